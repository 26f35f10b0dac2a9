#pragma once

#include "pulsefield/common.hpp"

#include <algorithm>
#include <cmath>

namespace pulsefield::detail {

/// Grid indices i in [0, 2^grid_bits] with |i 2^-grid_bits - center| <= radius,
/// using exactly that floating-point predicate at the boundary.
inline IndexRange closed_ball_cells(double center, double radius, int grid_bits) {
  const Index last = Index{1} << grid_bits;
  const auto inside = [&](Index i) {
    return std::abs(std::ldexp(static_cast<double>(i), -grid_bits) - center) <= radius;
  };
  const double scale = std::ldexp(1.0, grid_bits);
  const double lo_guess = std::ceil((center - radius) * scale);
  const double hi_guess = std::floor((center + radius) * scale);
  if (hi_guess < -1.0 || lo_guess > static_cast<double>(last) + 1.0) return {0, 0};
  Index lo = static_cast<Index>(std::clamp(lo_guess, 0.0, static_cast<double>(last)));
  Index hi = static_cast<Index>(std::clamp(hi_guess, 0.0, static_cast<double>(last)));
  while (lo > 0 && inside(lo - 1)) --lo;
  while (lo <= last && !inside(lo)) ++lo;
  while (hi < last && inside(hi + 1)) ++hi;
  while (hi >= 0 && !inside(hi)) --hi;
  if (lo > hi) return {0, 0};
  return {lo, hi + 1};
}

}  // namespace pulsefield::detail
