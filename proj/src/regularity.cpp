#include "pulsefield/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace pulsefield {

namespace {

struct Extrema {
  Eigen::VectorXd max;
  Eigen::VectorXd min;
};

// Running max/min over the clipped window [i - half, i + half].
Extrema sliding_extrema(const Eigen::VectorXd& v, Index half) {
  const Index n = v.size();
  Extrema out{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  std::deque<Index> hi, lo;
  Index next = 0;
  for (Index i = 0; i < n; ++i) {
    const Index right = std::min(n - 1, i + half);
    for (; next <= right; ++next) {
      while (!hi.empty() && v[hi.back()] <= v[next]) hi.pop_back();
      while (!lo.empty() && v[lo.back()] >= v[next]) lo.pop_back();
      hi.push_back(next);
      lo.push_back(next);
    }
    while (hi.front() < i - half) hi.pop_front();
    while (lo.front() < i - half) lo.pop_front();
    out.max[i] = v[hi.front()];
    out.min[i] = v[lo.front()];
  }
  return out;
}

Index half_width(const Signal& signal, double r) {
  if (!(r >= signal.step())) {
    std::ostringstream msg;
    msg << "radius " << r << " is below the grid step " << signal.step();
    throw ResolutionError(msg.str());
  }
  return static_cast<Index>(std::floor(std::ldexp(r, signal.grid_bits)));
}

void check_window(const Signal& signal, ScaleWindow window) {
  if (window.k_lo < 0 || window.k_hi > signal.grid_bits) {
    std::ostringstream msg;
    msg << "scale window " << window.k_lo << ".." << window.k_hi << " outside 0.." << signal.grid_bits;
    throw ResolutionError(msg.str());
  }
  if (window.count() < 4) throw InsufficientDataError("scale window needs at least 4 scales");
}

PointwiseEstimate finish(std::vector<ScaleValue> pairs) {
  PointwiseEstimate est;
  if (std::any_of(pairs.begin(), pairs.end(), [](const ScaleValue& p) { return !(p.value > 0.0); })) {
    est.h = kExponentCap;
    est.capped = true;
    return est;
  }
  est.fit = fit_power_log(pairs);
  est.h = est.fit->exponent;
  if (est.h > kExponentCap) {
    est.h = kExponentCap;
    est.capped = true;
  }
  return est;
}

const CwtScale* scale_of(const CwtGrid& cwt, int m) {
  for (const auto& s : cwt.scales) {
    if (s.m == m) return &s;
  }
  return nullptr;
}

double cone_sup(const CwtScale& scale, double x0) {
  // t_k = (k + 4) s / 4; the cone |t - x0| <= s holds k in [4 x0 / s - 8, 4 x0 / s].
  const double u = std::ldexp(x0, scale.m + 2);
  const Index first = std::max<Index>(0, static_cast<Index>(std::floor(u)) - 9);
  const Index last = std::min<Index>(scale.t.size() - 1, static_cast<Index>(std::ceil(u)) + 1);
  double sup = 0.0;
  for (Index k = first; k <= last; ++k) {
    if (std::abs(scale.t[k] - x0) <= scale.s) sup = std::max(sup, std::abs(scale.w[k]));
  }
  return sup / std::sqrt(scale.s);
}

std::vector<const CwtScale*> cone_scales(const CwtGrid* cwt, ScaleWindow window) {
  if (cwt == nullptr) throw DomainError("wavelet_cone estimator needs a CwtGrid");
  std::vector<const CwtScale*> out;
  for (int k = window.k_lo; k <= window.k_hi; ++k) {
    const CwtScale* s = scale_of(*cwt, k);
    if (s == nullptr) {
      std::ostringstream msg;
      msg << "CwtGrid has no scale 2^-" << k;
      throw ResolutionError(msg.str());
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace

std::string_view to_string(EstimatorMethod method) noexcept {
  return method == EstimatorMethod::oscillation ? "oscillation" : "wavelet_cone";
}

EstimatorMethod parse_estimator_method(std::string_view text) {
  if (text == "oscillation") return EstimatorMethod::oscillation;
  if (text == "wavelet_cone") return EstimatorMethod::wavelet_cone;
  throw ParameterError("unknown estimator method '" + std::string(text) + "'");
}

GridPoint snap_to_grid(const Signal& signal, double x0, SnapPolicy policy) {
  if (!(x0 >= 0.0 && x0 <= 1.0)) throw DomainError("point must lie in [0, 1]");
  const double u = std::ldexp(x0, signal.grid_bits);
  const double rounded = std::nearbyint(u);
  GridPoint p;
  p.index = static_cast<Index>(rounded);
  p.x = signal.position(p.index);
  p.snapped = rounded != u;
  if (p.snapped && policy == SnapPolicy::reject) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "point " << x0 << " is not on the 2^-" << signal.grid_bits << " grid";
    throw DomainError(msg.str());
  }
  return p;
}

double oscillation(const Signal& signal, double x0, double r, SnapPolicy policy) {
  const GridPoint p = snap_to_grid(signal, x0, policy);
  const Index half = half_width(signal, r);
  const Index lo = std::max<Index>(0, p.index - half);
  const Index hi = std::min<Index>(signal.size() - 1, p.index + half);
  const auto window = signal.values.segment(lo, hi - lo + 1);
  const double v0 = signal.values[p.index];
  return std::max(window.maxCoeff() - v0, v0 - window.minCoeff());
}

PointwiseEstimate pointwise_exponent(const Signal& signal, double x0, ScaleWindow window,
                                     EstimatorMethod method, const CwtGrid* cwt, SnapPolicy policy) {
  check_window(signal, window);
  const GridPoint p = snap_to_grid(signal, x0, policy);
  std::vector<ScaleValue> pairs;
  if (method == EstimatorMethod::oscillation) {
    for (int k = window.k_lo; k <= window.k_hi; ++k) {
      const double r = std::ldexp(1.0, -k);
      pairs.push_back({r, oscillation(signal, p.x, r)});
    }
  } else {
    for (const CwtScale* s : cone_scales(cwt, window)) pairs.push_back({s->s, cone_sup(*s, p.x)});
  }
  PointwiseEstimate est = finish(std::move(pairs));
  est.snapped = p.snapped;
  return est;
}

std::vector<ScaleValue> uniform_modulus(const Signal& signal, int k_lo, int k_hi) {
  if (k_lo < 0 || k_hi < k_lo || k_hi > signal.grid_bits) {
    throw ResolutionError("uniform_modulus: need 0 <= k_lo <= k_hi <= grid_bits");
  }
  std::vector<ScaleValue> out;
  const Eigen::VectorXd& v = signal.values;
  for (int k = k_lo; k <= k_hi; ++k) {
    const Index lag = Index{1} << (signal.grid_bits - k);
    // Trailing windows [i - lag, i].
    std::deque<Index> hi, lo;
    double w = 0.0;
    for (Index i = 0; i < v.size(); ++i) {
      while (!hi.empty() && v[hi.back()] <= v[i]) hi.pop_back();
      while (!lo.empty() && v[lo.back()] >= v[i]) lo.pop_back();
      hi.push_back(i);
      lo.push_back(i);
      while (hi.front() < i - lag) hi.pop_front();
      while (lo.front() < i - lag) lo.pop_front();
      w = std::max(w, v[hi.front()] - v[lo.front()]);
    }
    out.push_back({std::ldexp(1.0, -k), w});
  }
  return out;
}

ExponentField exponent_field(const Signal& signal, int stride_bits, ScaleWindow window,
                             EstimatorMethod method, const CwtGrid* cwt) {
  check_window(signal, window);
  if (stride_bits < 0 || stride_bits > signal.grid_bits) {
    throw ResolutionError("exponent_field: stride must be coarser than the grid");
  }
  const Index count = (Index{1} << stride_bits) + 1;
  const Index step = Index{1} << (signal.grid_bits - stride_bits);
  const Index scales = window.count();

  // values(i, k): the per-scale quantity at position i.
  Eigen::MatrixXd values(count, scales);
  if (method == EstimatorMethod::oscillation) {
    for (Index c = 0; c < scales; ++c) {
      const Extrema e = sliding_extrema(signal.values, half_width(signal, std::ldexp(1.0, -(window.k_lo + static_cast<int>(c)))));
      for (Index i = 0; i < count; ++i) {
        const Index g = i * step;
        const double v0 = signal.values[g];
        values(i, c) = std::max(e.max[g] - v0, v0 - e.min[g]);
      }
    }
  } else {
    const auto s = cone_scales(cwt, window);
    for (Index c = 0; c < scales; ++c) {
      for (Index i = 0; i < count; ++i) values(i, c) = cone_sup(*s[static_cast<std::size_t>(c)], signal.position(i * step));
    }
  }

  ExponentField field;
  field.method = method;
  field.window = window;
  field.positions.resize(count);
  field.h_est.resize(count);
  field.r_squared.resize(count);
  field.capped.assign(static_cast<std::size_t>(count), false);
  std::vector<char> capped(static_cast<std::size_t>(count), 0);
  parallel_for(count, 4096, [&](Index begin, Index end) {
    std::vector<ScaleValue> pairs(static_cast<std::size_t>(scales));
    for (Index i = begin; i < end; ++i) {
      for (Index c = 0; c < scales; ++c) {
        pairs[static_cast<std::size_t>(c)] = {std::ldexp(1.0, -(window.k_lo + static_cast<int>(c))), values(i, c)};
      }
      const PointwiseEstimate est = finish(pairs);
      field.positions[i] = signal.position(i * step);
      field.h_est[i] = est.h;
      field.r_squared[i] = est.fit ? est.fit->r_squared : std::numeric_limits<double>::quiet_NaN();
      capped[static_cast<std::size_t>(i)] = est.capped ? 1 : 0;
    }
  });
  for (std::size_t i = 0; i < capped.size(); ++i) field.capped[i] = capped[i] != 0;
  return field;
}

double theoretical_spectrum(double alpha, double eta, double H) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0,1)");
  if (!(eta > 0.0 && eta < 1.0)) throw ParameterError("eta must lie in (0,1)");
  const double lower = alpha * eta;
  // endpoints typed in decimal may miss the product alpha * eta by an ulp
  constexpr double slack = 1e-12;
  if (std::abs(H - lower) <= slack * lower) return eta;
  if (std::abs(H - alpha) <= slack * alpha) return 1.0;
  if (H > lower && H < alpha) return H / alpha;
  return kNegInfinity;
}

double box_dimension(std::span<const double> points, int box_k_lo, int box_k_hi) {
  if (box_k_hi <= box_k_lo) throw InsufficientDataError("box counting needs two scales");
  const Index scales = box_k_hi - box_k_lo + 1;
  Eigen::VectorXd ks(scales), counts(scales);
  std::vector<Index> boxes;
  boxes.reserve(points.size());
  for (Index c = 0; c < scales; ++c) {
    const int k = box_k_lo + static_cast<int>(c);
    const Index last = (Index{1} << k) - 1;
    boxes.clear();
    for (double x : points) boxes.push_back(std::min(last, static_cast<Index>(std::floor(std::ldexp(x, k)))));
    std::sort(boxes.begin(), boxes.end());
    const auto distinct = std::unique(boxes.begin(), boxes.end()) - boxes.begin();
    ks[c] = k;
    counts[c] = std::log2(static_cast<double>(distinct));
  }
  return least_squares_line(ks, counts).slope;
}

SpectrumEstimate spectrum_estimate(const ExponentField& field, double alpha, double eta, double bin_width,
                                   int box_k_lo, int box_k_hi) {
  if (!(bin_width > 0.0)) throw ParameterError("bin width must be positive");
  if (box_k_lo < 0 || box_k_hi <= box_k_lo) throw ParameterError("need 0 <= box_k_lo < box_k_hi");
  if (field.size() < (Index{1} << (box_k_hi + 2))) {
    std::ostringstream msg;
    msg << "spectrum_estimate: " << field.size() << " positions, need at least 2^" << box_k_hi + 2;
    throw ResolutionError(msg.str());
  }
  const double origin = alpha * eta;
  const auto bin_of = [&](double h) { return static_cast<long>(std::floor((h - origin) / bin_width)); };
  long first = 0;
  long last = bin_of(alpha);
  for (Index i = 0; i < field.size(); ++i) {
    first = std::min(first, bin_of(field.h_est[i]));
    last = std::max(last, bin_of(field.h_est[i]));
  }
  const auto bins = static_cast<std::size_t>(last - first + 1);
  std::vector<std::vector<double>> members(bins);
  for (Index i = 0; i < field.size(); ++i) {
    members[static_cast<std::size_t>(bin_of(field.h_est[i]) - first)].push_back(field.positions[i]);
  }

  SpectrumEstimate est;
  est.alpha = alpha;
  est.eta = eta;
  est.bin_width = bin_width;
  est.box_k_lo = box_k_lo;
  est.box_k_hi = box_k_hi;
  est.bin_centers.resize(static_cast<Index>(bins));
  est.dims.resize(static_cast<Index>(bins));
  est.theory.resize(static_cast<Index>(bins));
  est.counts.resize(bins);
  est.degenerate.assign(bins, false);
  est.clamped.assign(bins, false);
  for (std::size_t b = 0; b < bins; ++b) {
    const auto i = static_cast<Index>(b);
    est.bin_centers[i] = origin + (static_cast<double>(first + static_cast<long>(b)) + 0.5) * bin_width;
    est.theory[i] = theoretical_spectrum(alpha, eta, est.bin_centers[i]);
    est.counts[b] = static_cast<Index>(members[b].size());
    if (members[b].size() < 2) {
      est.dims[i] = kNegInfinity;
      est.degenerate[b] = !members[b].empty();
      continue;
    }
    double d = box_dimension(members[b], box_k_lo, box_k_hi);
    if (d > 1.0) {
      d = 1.0;
      est.clamped[b] = true;
    }
    est.dims[i] = d;
  }
  return est;
}

}  // namespace pulsefield
