#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "ophis/benchmarks/trits.hpp"
#include "ophis/model.hpp"

namespace ophis::benchmarks {

/// Underactuated rotary pendulum driven by a DC motor. The motor saturates
/// well below the torque needed to hold the upright position statically, so
/// reaching it requires swinging.
struct PendulumParams {
  double inertia{1.91e-4};
  double mass{0.055};
  double gravity{9.81};
  double length{0.042};
  double damping{3e-6};
  double torque_constant{0.0536};
  double resistance{9.5};
  double sample_time{0.05};
  double voltage_max{3.0};
};

inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a + std::numbers::pi, two_pi);
  if (a < 0.0) a += two_pi;
  return a - std::numbers::pi;
}

/// One Euler step. The angle is wrapped to [-pi, pi) and the velocity
/// saturated to +-15 pi, matching the region the reward is normalized over.
inline std::array<double, 2> pendulum_step(const std::array<double, 2>& x, double u_volts,
                                           const PendulumParams& p) {
  const double alpha = x[0];
  const double omega = x[1];
  const double accel =
      (p.mass * p.gravity * p.length * std::sin(alpha) - p.damping * omega -
       p.torque_constant * p.torque_constant * omega / p.resistance +
       p.torque_constant * u_volts / p.resistance) /
      p.inertia;
  const double omega_cap = 15.0 * std::numbers::pi;
  double alpha_next = wrap_angle(alpha + p.sample_time * omega);
  double omega_next = omega + p.sample_time * accel;
  if (omega_next > omega_cap) omega_next = omega_cap;
  if (omega_next < -omega_cap) omega_next = -omega_cap;
  return {alpha_next, omega_next};
}

/// Normalized quadratic reward on the post-step angle and the applied
/// voltage; 1 at the upright rest, 0 at the worst corner.
inline double pendulum_reward(const std::array<double, 2>& x_next, double u_volts,
                              const PendulumParams& p) {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  return 1.0 - 0.75 * x_next[0] * x_next[0] / pi2 -
         0.25 * u_volts * u_volts / (p.voltage_max * p.voltage_max);
}

/// Direct-drive pendulum: one mode, continuous input is the voltage.
class PendulumModel : public SystemModel {
 public:
  explicit PendulumModel(PendulumParams params = {}) : p_(params) {}

  int state_dim() const override { return 2; }
  int mode_count() const override { return 1; }
  double input_min() const override { return -p_.voltage_max; }
  double input_max() const override { return p_.voltage_max; }
  double sample_time() const override { return p_.sample_time; }

  double step(std::span<const double> x, double c, int /*mode*/,
              std::span<double> next) const override {
    double u = scale_input(c, input_min(), input_max());
    std::array<double, 2> xn = pendulum_step({x[0], x[1]}, u, p_);
    next[0] = xn[0];
    next[1] = xn[1];
    return pendulum_reward(xn, u, p_);
  }

  std::vector<double> state_lower() const override {
    return {-std::numbers::pi, -15.0 * std::numbers::pi};
  }
  std::vector<double> state_upper() const override {
    return {std::numbers::pi, 15.0 * std::numbers::pi};
  }

  const PendulumParams& params() const { return p_; }

 private:
  PendulumParams p_;
};

/// Pendulum behind a rate-limited link: each mode buys a ternary word
/// length for the transmitted input. Long words quantize finely, short
/// words coarsely; the reward sees the voltage actually applied.
class QuantizedPendulumModel : public SystemModel {
 public:
  explicit QuantizedPendulumModel(std::vector<int> mode_trits = {60, 1},
                                  PendulumParams params = {})
      : p_(params), mode_trits_(std::move(mode_trits)) {
    if (mode_trits_.empty()) throw std::invalid_argument("need at least one mode");
    for (int t : mode_trits_)
      if (t < 0) throw std::invalid_argument("trit counts must be >= 0");
  }

  int state_dim() const override { return 2; }
  int mode_count() const override { return static_cast<int>(mode_trits_.size()); }
  double input_min() const override { return -p_.voltage_max; }
  double input_max() const override { return p_.voltage_max; }
  double sample_time() const override { return p_.sample_time; }

  double step(std::span<const double> x, double c, int mode,
              std::span<double> next) const override {
    double u = physical_input(c, mode);
    std::array<double, 2> xn = pendulum_step({x[0], x[1]}, u, p_);
    next[0] = xn[0];
    next[1] = xn[1];
    return pendulum_reward(xn, u, p_);
  }

  double physical_input(double c, int mode) const override {
    double qc = trit_roundtrip(c, mode_trits_.at(static_cast<std::size_t>(mode)));
    return scale_input(qc, input_min(), input_max());
  }

  std::vector<double> state_lower() const override {
    return {-std::numbers::pi, -15.0 * std::numbers::pi};
  }
  std::vector<double> state_upper() const override {
    return {std::numbers::pi, 15.0 * std::numbers::pi};
  }

  const PendulumParams& params() const { return p_; }
  const std::vector<int>& mode_trits() const { return mode_trits_; }

 private:
  PendulumParams p_;
  std::vector<int> mode_trits_;
};

}  // namespace ophis::benchmarks
