#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace ophis {

/// One cell of a recursively subdivided unit interval.
///
/// A cell produced by `level` successive splits of factor `base` is
/// [offset * base^-level, (offset + 1) * base^-level]. Storing the pair
/// (offset, level) as integers keeps endpoints and widths exact under
/// repeated refinement; floats are only materialized on read.
class Interval {
 public:
  Interval() = default;

  /// The unsplit cell [0, 1].
  static Interval unit(std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("interval base must be >= 2");
    Interval iv;
    iv.base_ = base;
    return iv;
  }

  /// Deepest level whose offsets still fit in 63 bits.
  static std::uint32_t max_level(std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("interval base must be >= 2");
    std::uint64_t cap = std::uint64_t{1} << 63;
    std::uint64_t v = 1;
    std::uint32_t lvl = 0;
    while (v <= cap / base) {
      v *= base;
      ++lvl;
    }
    return lvl;
  }

  /// Child j (0-based, left to right) of an equal split into `base` parts.
  Interval split_child(std::uint32_t j) const {
    if (j >= base_) throw std::out_of_range("split child index out of range");
    if (level_ >= max_level(base_))
      throw std::overflow_error("interval refinement too deep for exact arithmetic");
    Interval child = *this;
    child.offset_ = offset_ * base_ + j;
    child.level_ = level_ + 1;
    return child;
  }

  double width() const { return std::pow(static_cast<double>(base_), -static_cast<double>(level_)); }
  double lo() const { return static_cast<double>(offset_) * width(); }
  double hi() const { return static_cast<double>(offset_ + 1) * width(); }
  double center() const { return (static_cast<double>(offset_) + 0.5) * width(); }

  std::uint64_t offset() const { return offset_; }
  std::uint32_t level() const { return level_; }
  std::uint32_t base() const { return base_; }

  bool operator==(const Interval&) const = default;

 private:
  std::uint64_t offset_{0};
  std::uint32_t level_{0};
  std::uint32_t base_{3};
};

}  // namespace ophis
