#include "pulsefield/point_process.hpp"

#include "pulsefield/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace pulsefield {

double eps_level(int j, double eta) noexcept {
  if (j < 2) return kInfinity;
  return std::log2(static_cast<double>(j)) / (eta * j);
}

double eps_tilde_level(int j, double eta) noexcept {
  if (j < 2) return kInfinity;
  const double jd = static_cast<double>(j);
  return std::log2(16.0 * jd * std::log2(jd)) / (eta * jd);
}

double level_poisson_parameter(int j, double eta) noexcept {
  if (j == 0) return 1.0;
  return std::exp2(eta * j) - std::exp2(eta * (j - 1));
}

namespace {

// Dilation window edge of level j in B units: B^{1/eta} <= 2^j.
double b_upper(int j, double eta) { return std::exp2(eta * j); }

int level_from_dilation(double dilation) {
  if (dilation <= 1.0) return 0;
  int j = std::max(1, static_cast<int>(std::ceil(std::log2(dilation))));
  // log2 is not exact: settle 2^{j-1} < d <= 2^j with exact power-of-two compares.
  while (dilation > std::ldexp(1.0, j)) ++j;
  while (j > 1 && dilation <= std::ldexp(1.0, j - 1)) --j;
  return j;
}

}  // namespace

Realization Realization::from_arrays(const ModelParams& params, Eigen::VectorXd c,
                                     Eigen::VectorXd b, Eigen::VectorXd x) {
  params.validate();
  if (c.size() != b.size() || x.size() != b.size())
    throw ParameterError("realization arrays c, b, x must have equal length");
  for (Index n = 0; n < b.size(); ++n) {
    if (!(b[n] > 0.0) || !(c[n] > 0.0)) throw ParameterError("b and c must be positive");
    if (n > 0 && !(b[n] > b[n - 1])) throw ParameterError("b must be strictly increasing");
    if (n > 0 && !(c[n] > c[n - 1])) throw ParameterError("c must be strictly increasing");
    if (!(x[n] >= 0.0 && x[n] <= 1.0)) throw ParameterError("x must lie in [0,1]");
  }

  Realization real;
  real.params_ = params;
  real.c_ = std::move(c);
  real.b_ = std::move(b);
  real.x_ = std::move(x);
  const Index n_total = real.b_.size();
  real.dilation_.resize(n_total);
  real.radius_.resize(n_total);
  real.amplitude_.resize(n_total);
  const double ceiling = std::ldexp(1.0, params.j_max);
  for (Index n = 0; n < n_total; ++n) {
    real.dilation_[n] = std::pow(real.b_[n], 1.0 / params.eta);
    real.radius_[n] = 1.0 / real.dilation_[n];
    real.amplitude_[n] = std::pow(real.c_[n], -params.alpha);
    if (real.dilation_[n] > ceiling) {
      std::ostringstream out;
      out.precision(17);
      out << "b[" << n << "]^(1/eta) = " << real.dilation_[n] << " exceeds 2^jmax";
      throw WindowError(out.str());
    }
  }
  real.build_index();
  return real;
}

void Realization::build_index() {
  const int levels = params_.j_max + 1;
  levels_.assign(static_cast<std::size_t>(levels), IndexRange{});
  level_of_.resize(static_cast<std::size_t>(size()));
  for (Index n = 0; n < size(); ++n) level_of_[static_cast<std::size_t>(n)] = level_from_dilation(dilation_[n]);

  Index cursor = 0;
  for (int j = 0; j < levels; ++j) {
    IndexRange& range = levels_[static_cast<std::size_t>(j)];
    range.begin = cursor;
    while (cursor < size() && level_of_[static_cast<std::size_t>(cursor)] == j) ++cursor;
    range.end = cursor;
  }
  if (cursor != size()) throw Error("internal: levels are not contiguous in b");

  by_x_.assign(static_cast<std::size_t>(levels), {});
  sorted_x_.assign(static_cast<std::size_t>(levels), {});
  for (int j = 0; j < levels; ++j) {
    const IndexRange range = levels_[static_cast<std::size_t>(j)];
    auto& order = by_x_[static_cast<std::size_t>(j)];
    order.resize(static_cast<std::size_t>(range.size()));
    std::iota(order.begin(), order.end(), range.begin);
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return x_[a] < x_[b]; });
    auto& xs = sorted_x_[static_cast<std::size_t>(j)];
    xs.reserve(order.size());
    for (Index n : order) xs.push_back(x_[n]);
  }
}

IndexRange Realization::level(int j) const {
  if (j < 0 || j > params_.j_max) {
    throw WindowError("level " + std::to_string(j) + " outside materialized window 0.." +
                      std::to_string(params_.j_max));
  }
  return levels_[static_cast<std::size_t>(j)];
}

int Realization::level_of(Index n) const { return level_of_.at(static_cast<std::size_t>(n)); }

std::span<const Index> Realization::level_by_x(int j) const {
  (void)level(j);
  return by_x_[static_cast<std::size_t>(j)];
}

std::span<const double> Realization::level_sorted_x(int j) const {
  (void)level(j);
  return sorted_x_[static_cast<std::size_t>(j)];
}

double Realization::max_radius(int j) noexcept {
  return j == 0 ? kInfinity : std::ldexp(1.0, 1 - j);
}

std::vector<Index> Realization::level_candidates(int j, double center, double reach) const {
  const auto xs = level_sorted_x(j);
  const auto order = level_by_x(j);
  const auto lo = std::lower_bound(xs.begin(), xs.end(), center - reach);
  const auto hi = std::upper_bound(lo, xs.end(), center + reach);
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(hi - lo));
  for (auto it = lo; it != hi; ++it) out.push_back(order[static_cast<std::size_t>(it - xs.begin())]);
  std::sort(out.begin(), out.end());
  return out;
}

Realization sample_realization(const ModelParams& params) {
  params.validate();
  std::vector<double> b_all;
  std::vector<double> x_all;
  const double ceiling = std::ldexp(1.0, params.j_max);

  for (int j = 0; j <= params.j_max; ++j) {
    const double lower = j == 0 ? 0.0 : b_upper(j - 1, params.eta);
    const double upper = b_upper(j, params.eta);
    auto b_stream = CounterRng::stream(params.seed, "B", static_cast<std::uint64_t>(j));
    const long count = poisson_by_gaps(b_stream, upper - lower);
    std::vector<double> level_b;
    level_b.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      // uniform_open0 is in (0, 1], so b lies in (lower, upper].
      const double b = lower + (upper - lower) * b_stream.uniform_open0();
      level_b.push_back(b > lower ? b : upper);
    }
    std::sort(level_b.begin(), level_b.end());

    auto x_stream = CounterRng::stream(params.seed, "X", static_cast<std::uint64_t>(j));
    for (double b : level_b) {
      const double x = x_stream.uniform();
      // Zero-probability ties and rounding past 2^jmax are dropped.
      if (!b_all.empty() && !(b > b_all.back())) continue;
      if (std::pow(b, 1.0 / params.eta) > ceiling) continue;
      b_all.push_back(b);
      x_all.push_back(x);
    }
  }

  const auto n_total = static_cast<Index>(b_all.size());
  Eigen::VectorXd c(n_total);
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(b_all.data(), n_total);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x_all.data(), n_total);
  auto c_stream = CounterRng::stream(params.seed, "C");
  double arrival = 0.0;
  for (Index n = 0; n < n_total; ++n) {
    arrival += c_stream.exponential();
    c[n] = arrival;
  }
  return Realization::from_arrays(params, std::move(c), std::move(b), std::move(x));
}

IndexRange level_slice(const Realization& real, int j) { return real.level(j); }

LevelStats level_stats(const Realization& real, int j) {
  const IndexRange range = real.level(j);
  const double eta = real.params().eta;
  return LevelStats{j, range.size(), level_poisson_parameter(j, eta), eps_level(j, eta),
                    eps_tilde_level(j, eta)};
}

}  // namespace pulsefield
