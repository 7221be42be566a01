#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ophis::benchmarks {

/// Symmetric ternary quantizer for normalized inputs.
///
/// encode(c, t) walks t levels of the base-3 partition of [0, 1], picking
/// the cell containing c (values exactly on an interior boundary go to the
/// lower cell). decode returns the center of the selected cell, so
/// |decode(encode(c, t)) - c| <= 3^-t / 2.
///
/// The walk runs in 120-bit fixed point: a double's 53-bit mantissa embeds
/// exactly, and multiplying by 3 per level stays exact, so the selected
/// cell is the mathematically correct one at every level.

inline std::vector<int> trit_encode(double c, int count) {
  if (count < 0) throw std::invalid_argument("trit count must be >= 0");
  if (count > 120) throw std::invalid_argument("trit count too large");
  if (c < 0.0) c = 0.0;
  if (c > 1.0) c = 1.0;

  using u128 = unsigned __int128;
  const u128 one = u128{1} << 120;
  // exact c * 2^120 (c has <= 53 significant bits)
  u128 pos = 0;
  if (c > 0.0) {
    int e = 0;
    double m = std::frexp(c, &e);                      // c = m * 2^e, m in [0.5, 1)
    auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));  // exact
    int shift = 120 + e - 53;
    if (shift >= 0)
      pos = u128{mant} << shift;
    else
      pos = u128{mant} >> -shift;
  }

  std::vector<int> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    u128 x = pos * 3;
    auto cell = static_cast<int>(x >> 120);
    u128 rem = x - (static_cast<u128>(cell) << 120);
    if (rem == 0 && cell > 0) {
      cell -= 1;
      rem = one;
    }
    out[static_cast<std::size_t>(i)] = cell;
    pos = rem;
  }
  return out;
}

inline double trit_decode(const std::vector<int>& trits) {
  long double x = 0.5L;
  for (std::size_t i = trits.size(); i-- > 0;) {
    int t = trits[i];
    if (t < 0 || t > 2) throw std::invalid_argument("trit out of range");
    x = (static_cast<long double>(t) + x) / 3.0L;
  }
  return static_cast<double>(x);
}

inline double trit_roundtrip(double c, int count) { return trit_decode(trit_encode(c, count)); }

}  // namespace ophis::benchmarks
