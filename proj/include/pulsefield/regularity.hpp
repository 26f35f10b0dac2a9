#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/field.hpp"
#include "pulsefield/regression.hpp"
#include "pulsefield/wavelet.hpp"

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace pulsefield {

/// Estimates above this are unidentifiable from first differences and get flagged.
inline constexpr double kExponentCap = 1.0;

enum class EstimatorMethod { oscillation, wavelet_cone };
[[nodiscard]] std::string_view to_string(EstimatorMethod method) noexcept;
[[nodiscard]] EstimatorMethod parse_estimator_method(std::string_view text);

/// What to do with a point that is not a grid node.
enum class SnapPolicy {
  reject,   ///< throw DomainError
  nearest,  ///< round to the nearest node, ties to even; reported as snapped
};

struct GridPoint {
  Index index = 0;
  double x = 0.0;
  bool snapped = false;
};

[[nodiscard]] GridPoint snap_to_grid(const Signal& signal, double x0, SnapPolicy policy);

/// Dyadic scales 2^-k, k = k_lo..k_hi.
struct ScaleWindow {
  int k_lo = 5;
  int k_hi = 8;
  /// k_lo = 5, k_hi = grid_bits - 4.
  [[nodiscard]] static ScaleWindow defaults(int grid_bits) noexcept { return {5, grid_bits - 4}; }
  [[nodiscard]] int count() const noexcept { return k_hi - k_lo + 1; }
};

/// max over grid points in [x0 - r, x0 + r] of |f(x) - f(x0)|; requires r >= grid step.
[[nodiscard]] double oscillation(const Signal& signal, double x0, double r,
                                 SnapPolicy policy = SnapPolicy::reject);

struct PointwiseEstimate {
  double h = 0.0;
  bool capped = false;
  bool snapped = false;
  /// Unset when capped because some scale had zero oscillation.
  std::optional<PowerFit> fit;
};

/**
 * Pointwise exponent at x0. oscillation: slope of log2 osc(x0, 2^-k).
 * wavelet_cone: slope of log2 max_{|t - x0| <= s} |W(s, t)| s^{-1/2}
 * over the grid scales s = 2^-k in the window (cwt required). Estimates
 * above kExponentCap, and points where some scale shows no variation at
 * all, are returned as capped at kExponentCap.
 */
[[nodiscard]] PointwiseEstimate pointwise_exponent(const Signal& signal, double x0,
                                                   ScaleWindow window, EstimatorMethod method,
                                                   const CwtGrid* cwt = nullptr,
                                                   SnapPolicy policy = SnapPolicy::reject);

/// w(2^-k) = max |f_i - f_j| over |i - j| <= 2^{grid_bits - k}, by sliding extrema.
[[nodiscard]] std::vector<ScaleValue> uniform_modulus(const Signal& signal, int k_lo, int k_hi);

struct ExponentField {
  Eigen::VectorXd positions;
  Eigen::VectorXd h_est;
  Eigen::VectorXd r_squared;  // NaN where capped without a fit
  std::vector<bool> capped;
  EstimatorMethod method = EstimatorMethod::oscillation;
  ScaleWindow window;

  [[nodiscard]] Index size() const noexcept { return positions.size(); }
};

/// pointwise_exponent at x_i = i 2^-stride_bits, i = 0..2^stride_bits.
[[nodiscard]] ExponentField exponent_field(const Signal& signal, int stride_bits,
                                           ScaleWindow window, EstimatorMethod method,
                                           const CwtGrid* cwt = nullptr);

/// H / alpha on [alpha eta, alpha], kNegInfinity elsewhere; exact at both endpoints.
[[nodiscard]] double theoretical_spectrum(double alpha, double eta, double H);

struct SpectrumEstimate {
  Eigen::VectorXd bin_centers;
  double bin_width = 0.0;
  Eigen::VectorXd dims;    // kNegInfinity for empty or degenerate bins
  std::vector<Index> counts;
  Eigen::VectorXd theory;  // kNegInfinity outside [alpha eta, alpha]
  std::vector<bool> degenerate;
  std::vector<bool> clamped;  // raw slope above 1 reported as 1
  double alpha = 0.0;
  double eta = 0.0;
  int box_k_lo = 0;
  int box_k_hi = 0;
};

/// Box-counting slope over k = box_k_lo..box_k_hi of the positions falling in each H-bin.
[[nodiscard]] double box_dimension(std::span<const double> points, int box_k_lo, int box_k_hi);

/**
 * Bins h_est on edges alpha eta + i bin_width and box-counts each bin.
 * Every position lands in exactly one bin. Bins with fewer than two
 * points are degenerate and report kNegInfinity.
 */
[[nodiscard]] SpectrumEstimate spectrum_estimate(const ExponentField& field, double alpha, double eta,
                                                 double bin_width, int box_k_lo, int box_k_hi);

}  // namespace pulsefield
