#pragma once

#include "pulsefield/common.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

namespace pulsefield {

struct ScaleValue {
  double scale = 0.0;
  double value = 0.0;
};

/// Least-squares line y = slope x + intercept.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Index points = 0;
};

/// Ordinary least squares on dense vectors; needs two distinct abscissae.
template <typename DerivedX, typename DerivedY>
[[nodiscard]] LineFit least_squares_line(const Eigen::DenseBase<DerivedX>& xs,
                                         const Eigen::DenseBase<DerivedY>& ys) {
  using Scalar = typename DerivedX::Scalar;
  const auto x = xs.derived().template cast<Scalar>().array().eval();
  const auto y = ys.derived().template cast<Scalar>().array().eval();
  const Index n = x.size();
  if (n < 2 || y.size() != n) throw InsufficientDataError("line fit needs >= 2 points");
  const Scalar mx = x.mean();
  const Scalar my = y.mean();
  const Scalar sxx = (x - mx).square().sum();
  const Scalar sxy = ((x - mx) * (y - my)).sum();
  const Scalar syy = (y - my).square().sum();
  if (!(sxx > Scalar(0))) throw InsufficientDataError("line fit needs distinct abscissae");
  LineFit fit;
  fit.slope = static_cast<double>(sxy / sxx);
  fit.intercept = static_cast<double>(my - sxy / sxx * mx);
  fit.r_squared = syy > Scalar(0) ? static_cast<double>(sxy * sxy / (sxx * syy)) : 1.0;
  fit.points = n;
  return fit;
}

struct PowerFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  Index points = 0;
  double scale_min = 0.0;
  double scale_max = 0.0;
  std::optional<double> log_power;
};

/**
 * Slope of log2(value / |log2 scale|^log_power) against log2 scale.
 * Without log_power, no correction. Needs >= 4 pairs with distinct
 * positive scales and positive values.
 */
[[nodiscard]] PowerFit fit_power_log(std::span<const ScaleValue> pairs,
                                     std::optional<double> log_power = std::nullopt);

/// Spearman rank correlation (average ranks for ties).
[[nodiscard]] double spearman_rho(std::span<const double> a, std::span<const double> b);

[[nodiscard]] double median(std::vector<double> values);

}  // namespace pulsefield
