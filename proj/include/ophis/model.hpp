#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ophis {

/// Raised when a model violates its contract at runtime (reward outside
/// [0, 1], integration blow-up, ...). The harness maps this to a distinct
/// exit code.
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One planned step: normalized continuous input and discrete mode.
struct HybridAction {
  double c{0.5};
  int mode{0};

  bool operator==(const HybridAction&) const = default;
};

using HybridSequence = std::vector<HybridAction>;

/// Affine map from normalized [0, 1] to a physical range [u_min, u_max].
inline double scale_input(double c, double u_min, double u_max) {
  return u_min + c * (u_max - u_min);
}

inline double unscale_input(double u, double u_min, double u_max) {
  if (u_max == u_min) throw std::invalid_argument("degenerate input range");
  return (u - u_min) / (u_max - u_min);
}

/// Deterministic discrete-time control system with a hybrid input. Rewards
/// must lie in [0, 1]; that is what ties the planner's bounds to reality.
class SystemModel {
 public:
  virtual ~SystemModel() = default;

  virtual int state_dim() const = 0;
  /// Number of discrete modes; valid modes are 0 .. mode_count() - 1.
  virtual int mode_count() const = 0;
  virtual double input_min() const = 0;
  virtual double input_max() const = 0;
  /// Seconds (or days) advanced by one step; used for logging only.
  virtual double sample_time() const { return 1.0; }

  /// Simulate one step from `x` under (c, mode). Writes the successor into
  /// `next` (length state_dim(), may not alias `x`) and returns the reward.
  virtual double step(std::span<const double> x, double c, int mode,
                      std::span<double> next) const = 0;

  /// Physical input actually applied for (c, mode), after any quantization.
  virtual double physical_input(double c, int /*mode*/) const {
    return scale_input(c, input_min(), input_max());
  }

  /// Sampling box for empirical constant validation.
  virtual std::vector<double> state_lower() const {
    return std::vector<double>(static_cast<std::size_t>(state_dim()), -1.0);
  }
  virtual std::vector<double> state_upper() const {
    return std::vector<double>(static_cast<std::size_t>(state_dim()), 1.0);
  }
};

/// step() plus contract enforcement. All planner and rollout code funnels
/// through here.
inline double checked_step(const SystemModel& model, std::span<const double> x, double c,
                           int mode, std::span<double> next) {
  if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("normalized input outside [0, 1]");
  if (mode < 0 || mode >= model.mode_count()) throw std::invalid_argument("mode out of range");
  if (x.size() != static_cast<std::size_t>(model.state_dim()) || next.size() != x.size())
    throw std::invalid_argument("state span size mismatch");
  double r = model.step(x, c, mode, next);
  if (!(r >= 0.0 && r <= 1.0)) {
    std::ostringstream msg;
    msg << "model reward " << r << " outside [0, 1]";
    throw ModelError(msg.str());
  }
  for (double v : next)
    if (!std::isfinite(v)) throw ModelError("model produced non-finite state");
  return r;
}

/// Pass-through wrapper that counts paired (dynamics, reward) evaluations.
class CountingModel : public SystemModel {
 public:
  explicit CountingModel(const SystemModel& inner) : inner_(&inner) {}

  int state_dim() const override { return inner_->state_dim(); }
  int mode_count() const override { return inner_->mode_count(); }
  double input_min() const override { return inner_->input_min(); }
  double input_max() const override { return inner_->input_max(); }
  double sample_time() const override { return inner_->sample_time(); }
  double step(std::span<const double> x, double c, int mode,
              std::span<double> next) const override {
    ++calls_;
    return inner_->step(x, c, mode, next);
  }
  double physical_input(double c, int mode) const override {
    return inner_->physical_input(c, mode);
  }
  std::vector<double> state_lower() const override { return inner_->state_lower(); }
  std::vector<double> state_upper() const override { return inner_->state_upper(); }

  std::uint64_t calls() const { return calls_; }
  void reset_calls() { calls_ = 0; }

 private:
  const SystemModel* inner_;
  mutable std::uint64_t calls_{0};
};

/// Discounted value of a finite input sequence, bracketed by the worst and
/// best possible continuations: upper = lower + gamma^K / (1 - gamma).
struct ValueBracket {
  double lower{0.0};
  double upper{0.0};
};

inline ValueBracket truncated_value(const SystemModel& model, std::span<const double> x0,
                                    const HybridSequence& actions, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must be in (0, 1)");
  std::vector<double> x(x0.begin(), x0.end());
  std::vector<double> next(x.size());
  double lower = 0.0;
  double pw = 1.0;
  for (const HybridAction& a : actions) {
    double r = checked_step(model, x, a.c, a.mode, next);
    lower += pw * r;
    pw *= gamma;
    x.swap(next);
  }
  double tail = std::pow(gamma, static_cast<double>(actions.size())) / (1.0 - gamma);
  return {lower, lower + tail};
}

/// Partial geometric sum 1 + s + ... + s^(m-1), exact for s = 1.
inline double geometric_sum(double s, std::size_t m) {
  double g = 0.0;
  for (std::size_t j = 0; j < m; ++j) g = 1.0 + s * g;
  return g;
}

/// A-priori bound on |v(a) - v(b)| for two sequences over `horizon` steps.
/// The continuous part of each step contributes while the mode prefixes
/// agree; past the first mode disagreement only the discounted tail is
/// known. When the modes never disagree the tail term is the truncation
/// slack gamma^horizon / (1 - gamma).
inline double semimetric_bound(const HybridSequence& a, const HybridSequence& b,
                               double lipschitz_reward, double lipschitz_dynamics,
                               double gamma, std::size_t horizon) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("discount must be in (0, 1)");
  if (a.size() < horizon || b.size() < horizon)
    throw std::invalid_argument("sequences must cover the comparison horizon");
  std::size_t disagreement = horizon;
  for (std::size_t k = 0; k < horizon; ++k) {
    if (a[k].mode != b[k].mode) {
      disagreement = k;
      break;
    }
  }
  double s = gamma * lipschitz_dynamics;
  double sum = 0.0;
  double pw = 1.0;
  for (std::size_t k = 0; k < disagreement; ++k) {
    sum += lipschitz_reward * std::abs(a[k].c - b[k].c) * pw *
           geometric_sum(s, disagreement - k);
    pw *= gamma;
  }
  return sum + std::pow(gamma, static_cast<double>(disagreement)) / (1.0 - gamma);
}

/// Empirical probe of the contraction and Lipschitz assumptions by random
/// sampling. Sampling can refute candidate constants, never prove them.
struct AssumptionReport {
  double candidate_lipschitz_dynamics{0.0};
  double candidate_lipschitz_reward{0.0};
  double discount{0.0};
  double max_dynamics_ratio{0.0};
  double max_reward_ratio{0.0};
  bool dynamics_within_candidate{false};
  bool reward_within_candidate{false};
  bool contraction_holds{false};
  int samples{0};
};

inline AssumptionReport validate_assumptions(const SystemModel& model, int samples,
                                              double lipschitz_dynamics,
                                              double lipschitz_reward, double gamma,
                                              std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> mode_dist(0, model.mode_count() - 1);
  const std::vector<double> lo = model.state_lower();
  const std::vector<double> hi = model.state_upper();
  const auto dim = static_cast<std::size_t>(model.state_dim());

  AssumptionReport rep;
  rep.candidate_lipschitz_dynamics = lipschitz_dynamics;
  rep.candidate_lipschitz_reward = lipschitz_reward;
  rep.discount = gamma;
  rep.samples = samples;

  std::vector<double> xa(dim), xb(dim), na(dim), nb(dim);
  for (int i = 0; i < samples; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      xa[j] = lo[j] + unit(rng) * (hi[j] - lo[j]);
      xb[j] = lo[j] + unit(rng) * (hi[j] - lo[j]);
    }
    double ca = unit(rng);
    double cb = unit(rng);
    int mode = mode_dist(rng);
    double ra = checked_step(model, xa, ca, mode, na);
    double rb = checked_step(model, xb, cb, mode, nb);
    double in_dist = std::abs(ca - cb);
    for (std::size_t j = 0; j < dim; ++j) in_dist += std::abs(xa[j] - xb[j]);
    if (in_dist < 1e-12) continue;
    double out_dist = 0.0;
    for (std::size_t j = 0; j < dim; ++j) out_dist += std::abs(na[j] - nb[j]);
    rep.max_dynamics_ratio = std::max(rep.max_dynamics_ratio, out_dist / in_dist);
    rep.max_reward_ratio = std::max(rep.max_reward_ratio, std::abs(ra - rb) / in_dist);
  }
  rep.dynamics_within_candidate = rep.max_dynamics_ratio <= lipschitz_dynamics + 1e-9;
  rep.reward_within_candidate = rep.max_reward_ratio <= lipschitz_reward + 1e-9;
  rep.contraction_holds = gamma * lipschitz_dynamics < 1.0;
  return rep;
}

}  // namespace ophis
