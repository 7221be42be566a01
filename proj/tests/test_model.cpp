#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "ophis/benchmarks/synthetic.hpp"
#include "ophis/model.hpp"

using namespace ophis;
using benchmarks::ConstantRewardModel;
using benchmarks::Linear1dModel;

namespace {

/// Test double whose reward and successor are chosen per instance.
class RiggedModel : public SystemModel {
 public:
  RiggedModel(double reward, double next_state) : reward_(reward), next_(next_state) {}

  int state_dim() const override { return 1; }
  int mode_count() const override { return 2; }
  double input_min() const override { return 0.0; }
  double input_max() const override { return 1.0; }
  double step(std::span<const double>, double, int, std::span<double> next) const override {
    next[0] = next_;
    return reward_;
  }

 private:
  double reward_;
  double next_;
};

}  // namespace

TEST_CASE("input scaling maps the unit interval onto the physical range") {
  CHECK(scale_input(0.5, -3.0, 3.0) == 0.0);
  CHECK(scale_input(1.0, -3.0, 3.0) == 3.0);
  CHECK(scale_input(11.0 / 54.0, 0.0, 1.0) == 11.0 / 54.0);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    double c = unit(rng);
    CHECK(std::abs(unscale_input(scale_input(c, -3.0, 3.0), -3.0, 3.0) - c) <= 1e-12);
  }
  CHECK_THROWS_AS(unscale_input(0.3, 2.0, 2.0), std::invalid_argument);
}

TEST_CASE("checked_step rejects contract violations before touching the model") {
  ConstantRewardModel model;
  std::vector<double> x{0.0}, next{0.0};
  CHECK_THROWS_AS(checked_step(model, x, -0.1, 0, next), std::invalid_argument);
  CHECK_THROWS_AS(checked_step(model, x, 1.1, 0, next), std::invalid_argument);
  CHECK_THROWS_AS(checked_step(model, x, std::nan(""), 0, next), std::invalid_argument);
  CHECK_THROWS_AS(checked_step(model, x, 0.5, -1, next), std::invalid_argument);
  CHECK_THROWS_AS(checked_step(model, x, 0.5, 2, next), std::invalid_argument);
  std::vector<double> wrong{0.0, 0.0};
  CHECK_THROWS_AS(checked_step(model, wrong, 0.5, 0, next), std::invalid_argument);
}

TEST_CASE("checked_step turns model contract breaches into model errors") {
  std::vector<double> x{0.0}, next{0.0};
  RiggedModel over(1.5, 0.0);
  CHECK_THROWS_AS(checked_step(over, x, 0.5, 0, next), ModelError);
  RiggedModel under(-0.5, 0.0);
  CHECK_THROWS_AS(checked_step(under, x, 0.5, 0, next), ModelError);
  RiggedModel blown(0.5, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(checked_step(blown, x, 0.5, 0, next), ModelError);
  RiggedModel fine(0.5, 0.25);
  CHECK(checked_step(fine, x, 0.5, 0, next) == 0.5);
  CHECK(next[0] == 0.25);
}

TEST_CASE("counting wrapper tallies paired evaluations") {
  ConstantRewardModel inner;
  CountingModel counted(inner);
  std::vector<double> x{0.0}, next{0.0};
  for (int i = 0; i < 7; ++i) checked_step(counted, x, 0.5, 0, next);
  CHECK(counted.calls() == 7);
  counted.reset_calls();
  CHECK(counted.calls() == 0);
}

TEST_CASE("truncated value brackets the infinite-horizon value") {
  ConstantRewardModel model;
  std::vector<double> x0{0.0};

  ValueBracket empty = truncated_value(model, x0, {}, 0.5);
  CHECK(empty.lower == 0.0);
  CHECK(empty.upper == Catch::Approx(2.0).margin(1e-15));

  HybridSequence three(3, HybridAction{0.5, 0});
  ValueBracket b = truncated_value(model, x0, three, 0.5);
  CHECK(b.lower == Catch::Approx(1.75).margin(1e-15));
  CHECK(b.upper == Catch::Approx(2.0).margin(1e-15));
  CHECK(b.upper - b.lower == Catch::Approx(std::pow(0.5, 3) / 0.5).margin(1e-15));
}

TEST_CASE("longer truncations nest inside shorter ones") {
  Linear1dModel model;
  std::vector<double> x0{0.0};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  HybridSequence seq;
  ValueBracket prev = truncated_value(model, x0, seq, 0.7);
  for (int k = 0; k < 12; ++k) {
    seq.push_back({unit(rng), static_cast<int>(rng() % 2)});
    ValueBracket cur = truncated_value(model, x0, seq, 0.7);
    CHECK(cur.lower >= prev.lower - 1e-12);
    CHECK(cur.upper <= prev.upper + 1e-12);
    prev = cur;
  }
}

TEST_CASE("partial geometric sum is exact at ratio one") {
  CHECK(geometric_sum(1.0, 0) == 0.0);
  CHECK(geometric_sum(1.0, 5) == 5.0);
  CHECK(geometric_sum(0.5, 3) == Catch::Approx(1.75).margin(1e-15));
  CHECK(geometric_sum(0.25, 4) ==
        Catch::Approx((1.0 - std::pow(0.25, 4)) / 0.75).margin(1e-15));
}

TEST_CASE("sequence semimetric hand values") {
  HybridSequence a(10, HybridAction{0.3, 1});
  CHECK(semimetric_bound(a, a, 1.0, 0.5, 0.5, 10) ==
        Catch::Approx(std::pow(0.5, 10) / 0.5).margin(1e-15));

  HybridSequence b = a;
  b[0].mode = 0;
  CHECK(semimetric_bound(a, b, 1.0, 0.5, 0.5, 10) == Catch::Approx(2.0).margin(1e-15));

  HybridSequence p{{0.0, 0}, {0.5, 0}};
  HybridSequence q{{1.0, 0}, {0.5, 1}};
  CHECK(semimetric_bound(p, q, 1.0, 0.5, 0.5, 2) == Catch::Approx(2.0).margin(1e-15));
}

TEST_CASE("sequence semimetric validates its inputs") {
  HybridSequence a(3, HybridAction{0.5, 0});
  CHECK_THROWS_AS(semimetric_bound(a, a, 1.0, 0.5, 0.5, 4), std::invalid_argument);
  CHECK_THROWS_AS(semimetric_bound(a, a, 1.0, 0.5, 1.0, 3), std::invalid_argument);
}

TEST_CASE("semimetric dominates observed value gaps on a verified model") {
  Linear1dModel model;
  const double gamma = 0.5;
  const double lf = model.tight_lipschitz_dynamics();
  const double lr = model.tight_lipschitz_reward();
  std::vector<double> x0{0.0};
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t horizon = 12;
  for (int trial = 0; trial < 500; ++trial) {
    HybridSequence a(horizon), b(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
      a[k] = {unit(rng), static_cast<int>(rng() % 2)};
      b[k] = {unit(rng), static_cast<int>(rng() % 2)};
    }
    double va = truncated_value(model, x0, a, gamma).lower;
    double vb = truncated_value(model, x0, b, gamma).lower;
    double bound = semimetric_bound(a, b, lr, lf, gamma, horizon);
    double slack = 2.0 * std::pow(gamma, static_cast<double>(horizon)) / (1.0 - gamma);
    CHECK(std::abs(va - vb) <= bound + slack + 1e-9);
  }
}

TEST_CASE("assumption probe accepts true constants and refutes false ones") {
  Linear1dModel model;
  AssumptionReport ok =
      validate_assumptions(model, 4000, model.tight_lipschitz_dynamics(),
                           model.tight_lipschitz_reward(), 0.5, 42);
  CHECK(ok.samples == 4000);
  CHECK(ok.dynamics_within_candidate);
  CHECK(ok.reward_within_candidate);
  CHECK(ok.contraction_holds);
  CHECK(ok.max_dynamics_ratio <= 0.6 + 1e-9);

  AssumptionReport bad = validate_assumptions(model, 4000, 0.05, 0.05, 0.5, 42);
  CHECK(!bad.dynamics_within_candidate);
  CHECK(!bad.reward_within_candidate);

  AssumptionReport expansive = validate_assumptions(model, 100, 1.3, 1.0, 0.8, 7);
  CHECK(!expansive.contraction_holds);
  CHECK_THROWS_AS(validate_assumptions(model, 0, 1.0, 1.0, 0.5, 1), std::invalid_argument);
}

TEST_CASE("a constant reward has zero observed reward ratio") {
  ConstantRewardModel model;
  AssumptionReport rep = validate_assumptions(model, 500, 1.0, 1.0, 0.5, 9);
  CHECK(rep.max_reward_ratio == 0.0);
  CHECK(rep.max_dynamics_ratio <= 1.0 + 1e-9);
}
