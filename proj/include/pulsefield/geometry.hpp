#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/point_process.hpp"

#include <string_view>
#include <vector>

namespace pulsefield {

/// Ball families whose limsup sets drive the regularity theory.
enum class CoverageVariant {
  /// All n in A_j, radius B_n^-delta.
  g_delta,
  /// Isolated n in I_j, radius B_n^{-delta (1 - eps~_j)}.
  g_prime_delta,
  /// All n in A_j, radius B_n^{-(1 - eps~_j)}.
  covering_eq51,
  /// All n in A_j, radius B_n^{-(1 + 3 eps_j)}.
  g_tilde_one,
};

[[nodiscard]] std::string_view to_string(CoverageVariant variant) noexcept;
[[nodiscard]] CoverageVariant parse_coverage_variant(std::string_view text);

struct LevelCoverage {
  int j = 0;
  double covered_fraction = 0.0;
  Index ball_count = 0;
};

struct CoverageReport {
  CoverageVariant variant = CoverageVariant::g_delta;
  double delta = 1.0;
  std::vector<LevelCoverage> per_level;
  /// Fraction of grid points inside the union over all reported levels.
  double cumulative_fraction = 0.0;
  int grid_bits = 0;
};

/// Level-j pulses whose support meets no other support across the window levels.
struct IsolatedSet {
  int j = 0;
  std::vector<Index> indices;
  LevelRange a_tilde_range{};
};

/// Closed-ball test |x - X_n| <= r + B_n^{-1/eta}.
[[nodiscard]] bool covers(const Realization& real, Index n, double x, double r);

/// Number of n in A_j with covers(n, x, r).
[[nodiscard]] Index overlap_count(const Realization& real, int j, double x, double r);

/// Number of n in A_j with X_n in [k 2^-m - 2^{1-m}, (k+1) 2^-m + 2^{1-m}], m = floor(eta j).
[[nodiscard]] Index local_count_l_jk(const Realization& real, int j, Index k);

/// Level window floor((1 - p0 eta eps_j) j) .. floor(gamma j), lower end clamped at 0.
[[nodiscard]] LevelRange isolation_window(const ModelParams& params, int j);

/// Requires 2 <= j and floor(gamma j) <= j_max.
[[nodiscard]] IsolatedSet isolated_indices(const Realization& real, int j);

/// Ball radius of pulse n at level j for a variant.
[[nodiscard]] double variant_radius(const Realization& real, CoverageVariant variant, double delta,
                                    Index n, int j);

/// Per-level and cumulative grid coverage by the variant's balls over levels j_lo..j_hi.
[[nodiscard]] CoverageReport union_coverage(const Realization& real, CoverageVariant variant,
                                            double delta, int j_lo, int j_hi, int grid_bits);

/// Ascending levels j in [2, j_max] at which some variant ball contains x.
[[nodiscard]] std::vector<int> limsup_hits(const Realization& real, double x,
                                           CoverageVariant variant, double delta);

/// Max over the grid of overlap_count(j, x_i, r), computed by a sweep.
[[nodiscard]] Index max_overlap_on_grid(const Realization& real, int j, double r, int grid_bits);

}  // namespace pulsefield
