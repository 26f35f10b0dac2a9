#include "pulsefield/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pulsefield {

PowerFit fit_power_log(std::span<const ScaleValue> pairs, std::optional<double> log_power) {
  if (pairs.size() < 4) throw InsufficientDataError("fit_power_log: need at least 4 pairs");
  const auto n = static_cast<Index>(pairs.size());
  Eigen::VectorXd lx(n), ly(n);
  for (Index i = 0; i < n; ++i) {
    const auto& p = pairs[static_cast<std::size_t>(i)];
    if (!(p.scale > 0.0)) throw DomainError("fit_power_log: scales must be positive");
    if (!(p.value > 0.0)) throw DomainError("fit_power_log: values must be positive");
    lx[i] = std::log2(p.scale);
    ly[i] = std::log2(p.value);
    if (log_power) {
      const double l = std::abs(lx[i]);
      if (!(l > 0.0)) throw DomainError("fit_power_log: log correction undefined at scale 1");
      ly[i] -= *log_power * std::log2(l);
    }
  }
  std::vector<double> sorted(lx.data(), lx.data() + n);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("fit_power_log: scales must be distinct");
  }
  const LineFit line = least_squares_line(lx, ly);
  PowerFit fit;
  fit.exponent = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  fit.points = n;
  fit.scale_min = std::exp2(sorted.front());
  fit.scale_max = std::exp2(sorted.back());
  fit.log_power = log_power;
  return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t k = i;
    while (k + 1 < order.size() && v[order[k + 1]] == v[order[i]]) ++k;
    const double avg = 0.5 * static_cast<double>(i + k) + 1.0;
    for (std::size_t q = i; q <= k; ++q) r[order[q]] = avg;
    i = k + 1;
  }
  return r;
}

}  // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) throw InsufficientDataError("spearman_rho: size");
  const auto ra = ranks(a);
  const auto rb = ranks(b);
  const auto n = static_cast<Index>(ra.size());
  const Eigen::Map<const Eigen::ArrayXd> x(ra.data(), n), y(rb.data(), n);
  const double sxy = ((x - x.mean()) * (y - y.mean())).sum();
  const double sxx = (x - x.mean()).square().sum();
  const double syy = (y - y.mean()).square().sum();
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double median(std::vector<double> values) {
  if (values.empty()) throw InsufficientDataError("median of empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>(values.size() / 2);
  std::nth_element(values.begin(), mid, values.end());
  if (values.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(values.begin(), mid);
  return 0.5 * (lower + upper);
}

}  // namespace pulsefield
