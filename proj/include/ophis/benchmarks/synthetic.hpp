#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "ophis/model.hpp"

namespace ophis::benchmarks {

/// Identity dynamics, reward constantly 1. Makes every planner quantity a
/// closed-form function of the tree shape.
class ConstantRewardModel : public SystemModel {
 public:
  explicit ConstantRewardModel(int modes = 2) : modes_(modes) {
    if (modes < 1) throw std::invalid_argument("need at least one mode");
  }

  int state_dim() const override { return 1; }
  int mode_count() const override { return modes_; }
  double input_min() const override { return 0.0; }
  double input_max() const override { return 1.0; }
  double step(std::span<const double> x, double /*c*/, int /*mode*/,
              std::span<double> next) const override {
    next[0] = x[0];
    return 1.0;
  }

 private:
  int modes_;
};

/// Scalar contraction with a mode-dependent offset and a tent reward around
/// a target point. Tight constants are known in closed form, so empirical
/// probes and a-priori bounds can be checked against ground truth.
class Linear1dModel : public SystemModel {
 public:
  Linear1dModel(double a = 0.5, double b = 0.1, std::vector<double> offsets = {0.0, 0.2},
                double target = 0.3)
      : a_(a), b_(b), offsets_(std::move(offsets)), target_(target) {
    if (offsets_.empty()) throw std::invalid_argument("need at least one mode offset");
  }

  int state_dim() const override { return 1; }
  int mode_count() const override { return static_cast<int>(offsets_.size()); }
  double input_min() const override { return 0.0; }
  double input_max() const override { return 1.0; }

  double step(std::span<const double> x, double c, int mode,
              std::span<double> next) const override {
    double xn = a_ * x[0] + b_ * c + offsets_[static_cast<std::size_t>(mode)];
    next[0] = xn;
    double r = 1.0 - std::abs(xn - target_);
    if (r < 0.0) r = 0.0;
    if (r > 1.0) r = 1.0;
    return r;
  }

  std::vector<double> state_lower() const override { return {-2.0}; }
  std::vector<double> state_upper() const override { return {2.0}; }

  /// |a| + |b|: conservative joint-input constant (each metric term can
  /// move the successor by its own coefficient).
  double tight_lipschitz_dynamics() const { return std::abs(a_) + std::abs(b_); }
  double tight_lipschitz_reward() const { return 1.0; }

 private:
  double a_;
  double b_;
  std::vector<double> offsets_;
  double target_;
};

}  // namespace ophis::benchmarks
