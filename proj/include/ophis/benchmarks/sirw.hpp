#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "ophis/model.hpp"

namespace ophis::benchmarks {

/// Compartmental epidemic with vaccination. State is (S, I, R, W) as
/// population fractions: susceptible, infected, removed, vaccinated.
/// The discrete input toggles a vaccination campaign, the continuous input
/// sets a social-distancing level that suppresses the transmission rate.
struct SirwParams {
  double beta_baseline{0.3566};
  double removal_rate{0.0858};
  double vaccination_rate{0.04};
  double distancing_effect{0.5};
  int substeps{10};
  bool clamp_transmission{false};
  bool distancing_enabled{true};
  double population_scale{1000.0};
  double sample_time{1.0};
};

struct SirwState {
  double S{0.0};
  double I{0.0};
  double R{0.0};
  double W{0.0};
};

inline SirwState sirw_default_initial() { return {1.0 - 0.0038, 0.0038, 0.0, 0.0}; }

/// One day of explicit Euler with both inputs held. The reward is charged
/// on the pre-step infection level plus small usage penalties on both
/// inputs, keeping it inside [0, 1] by construction.
inline std::pair<SirwState, double> sirw_step(const SirwState& x, double u_c, int u_d,
                                              const SirwParams& p) {
  double beta = p.beta_baseline - p.distancing_effect * u_c;
  if (p.clamp_transmission && beta < 0.0) beta = 0.0;
  double reward = 1.0 - 0.9998 * x.I - 0.0001 * u_c - 0.0001 * static_cast<double>(u_d);
  if (reward < 0.0) reward = 0.0;
  if (reward > 1.0) reward = 1.0;

  SirwState s = x;
  const double dt = p.sample_time / static_cast<double>(p.substeps);
  for (int i = 0; i < p.substeps; ++i) {
    const double infection = beta * s.S * s.I;
    const double vaccination = p.vaccination_rate * static_cast<double>(u_d) * s.S;
    const double removal = p.removal_rate * s.I;
    s.S += dt * (-infection - vaccination);
    s.I += dt * (infection - removal);
    s.R += dt * removal;
    s.W += dt * vaccination;
    if (!(s.S > -1e-9 && s.I > -1e-9 && s.R > -1e-9 && s.W > -1e-9) ||
        !std::isfinite(s.S + s.I + s.R + s.W))
      throw ModelError("epidemic integration left the simplex");
  }
  return {s, reward};
}

class SirwModel : public SystemModel {
 public:
  explicit SirwModel(SirwParams params = {}) : p_(params) {
    if (p_.substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  }

  int state_dim() const override { return 4; }
  int mode_count() const override { return 2; }
  double input_min() const override { return 0.0; }
  double input_max() const override { return 1.0; }
  double sample_time() const override { return p_.sample_time; }

  double step(std::span<const double> x, double c, int mode,
              std::span<double> next) const override {
    double u_c = p_.distancing_enabled ? c : 0.0;
    auto [s, r] = sirw_step({x[0], x[1], x[2], x[3]}, u_c, mode, p_);
    next[0] = s.S;
    next[1] = s.I;
    next[2] = s.R;
    next[3] = s.W;
    return r;
  }

  double physical_input(double c, int /*mode*/) const override {
    return p_.distancing_enabled ? c : 0.0;
  }

  std::vector<double> state_lower() const override { return {0.0, 0.0, 0.0, 0.0}; }
  std::vector<double> state_upper() const override { return {1.0, 1.0, 1.0, 1.0}; }

  const SirwParams& params() const { return p_; }

 private:
  SirwParams p_;
};

}  // namespace ophis::benchmarks
