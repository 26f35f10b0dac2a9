#include "pulsefield/geometry.hpp"

#include "grid_cells.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pulsefield {

std::string_view to_string(CoverageVariant variant) noexcept {
  switch (variant) {
    case CoverageVariant::g_delta: return "G_delta";
    case CoverageVariant::g_prime_delta: return "G_prime_delta";
    case CoverageVariant::covering_eq51: return "covering_eq51";
    case CoverageVariant::g_tilde_one: return "G_tilde_one";
  }
  return "?";
}

CoverageVariant parse_coverage_variant(std::string_view text) {
  for (auto v : {CoverageVariant::g_delta, CoverageVariant::g_prime_delta,
                 CoverageVariant::covering_eq51, CoverageVariant::g_tilde_one}) {
    if (text == to_string(v)) return v;
  }
  throw ParameterError("variant must be one of G_delta, G_prime_delta, covering_eq51, "
                       "G_tilde_one; got '" + std::string(text) + "'");
}

bool covers(const Realization& real, Index n, double x, double r) {
  return std::abs(x - real.x()[n]) <= r + real.radius()[n];
}

Index overlap_count(const Realization& real, int j, double x, double r) {
  const IndexRange level = real.level(j);
  Index count = 0;
  if (j == 0) {
    for (Index n = level.begin; n < level.end; ++n) count += covers(real, n, x, r) ? 1 : 0;
    return count;
  }
  for (Index n : real.level_candidates(j, x, r + Realization::max_radius(j))) {
    count += covers(real, n, x, r) ? 1 : 0;
  }
  return count;
}

Index local_count_l_jk(const Realization& real, int j, Index k) {
  const IndexRange level = real.level(j);
  const int m = static_cast<int>(std::floor(real.params().eta * j));
  const Index cells = Index{1} << m;
  if (k < 0 || k >= cells) {
    throw DomainError("local_count_l_jk: k = " + std::to_string(k) + " outside [0, " +
                      std::to_string(cells) + ")");
  }
  const double width = std::ldexp(1.0, -m);
  const double lo = static_cast<double>(k) * width - 2.0 * width;
  const double hi = static_cast<double>(k + 1) * width + 2.0 * width;
  Index count = 0;
  for (Index n = level.begin; n < level.end; ++n) {
    const double x = real.x()[n];
    count += (x >= lo && x <= hi) ? 1 : 0;
  }
  return count;
}

LevelRange isolation_window(const ModelParams& params, int j) {
  const double lower = std::floor((1.0 - params.p0 * params.eta * eps_level(j, params.eta)) * j);
  const int hi = static_cast<int>(std::floor(params.gamma * j));
  return {lower < 0.0 ? 0 : static_cast<int>(lower), hi};
}

IsolatedSet isolated_indices(const Realization& real, int j) {
  if (j < 2) throw WindowError("isolated_indices: level must be >= 2");
  const LevelRange window = isolation_window(real.params(), j);
  if (window.hi > real.j_max()) {
    throw WindowError("isolated_indices: window up to level " + std::to_string(window.hi) +
                      " exceeds jmax = " + std::to_string(real.j_max()) + "; raise jmax");
  }
  const auto& xs = real.x();
  const auto& rad = real.radius();
  const auto disjoint = [&](Index n, Index m) { return std::abs(xs[n] - xs[m]) > rad[n] + rad[m]; };

  IsolatedSet out;
  out.j = j;
  out.a_tilde_range = window;
  const IndexRange level = real.level(j);
  for (Index n = level.begin; n < level.end; ++n) {
    bool isolated = true;
    for (int jj = window.lo; jj <= window.hi && isolated; ++jj) {
      if (jj == 0) {
        const IndexRange coarse = real.level(0);
        for (Index m = coarse.begin; m < coarse.end && isolated; ++m) isolated = disjoint(n, m);
        continue;
      }
      for (Index m : real.level_candidates(jj, xs[n], rad[n] + Realization::max_radius(jj))) {
        if (m != n && !disjoint(n, m)) {
          isolated = false;
          break;
        }
      }
    }
    if (isolated) out.indices.push_back(n);
  }
  return out;
}

double variant_radius(const Realization& real, CoverageVariant variant, double delta, Index n,
                      int j) {
  const double b = real.b()[n];
  const double eta = real.params().eta;
  switch (variant) {
    case CoverageVariant::g_delta: return std::pow(b, -delta);
    case CoverageVariant::g_prime_delta: return std::pow(b, -delta * (1.0 - eps_tilde_level(j, eta)));
    case CoverageVariant::covering_eq51: return std::pow(b, -(1.0 - eps_tilde_level(j, eta)));
    case CoverageVariant::g_tilde_one: return std::pow(b, -(1.0 + 3.0 * eps_level(j, eta)));
  }
  return 0.0;
}

namespace {

bool uses_delta(CoverageVariant variant) {
  return variant == CoverageVariant::g_delta || variant == CoverageVariant::g_prime_delta;
}

void check_delta(const Realization& real, CoverageVariant variant, double delta) {
  if (!uses_delta(variant)) return;
  const double eta = real.params().eta;
  if (!(delta >= 1.0 && delta <= 1.0 / eta)) {
    throw DomainError("delta must lie in [1, 1/eta] = [1, " + std::to_string(1.0 / eta) +
                      "], got " + std::to_string(delta));
  }
}

// Highest level whose balls are defined: G' needs the whole isolation window.
int top_level(const Realization& real, CoverageVariant variant) {
  if (variant != CoverageVariant::g_prime_delta) return real.j_max();
  int j = real.j_max();
  while (j >= 2 && isolation_window(real.params(), j).hi > real.j_max()) --j;
  return j;
}

std::vector<Index> variant_members(const Realization& real, CoverageVariant variant, int j) {
  if (variant == CoverageVariant::g_prime_delta) return isolated_indices(real, j).indices;
  const IndexRange level = real.level(j);
  std::vector<Index> all(static_cast<std::size_t>(level.size()));
  for (Index n = level.begin; n < level.end; ++n) all[static_cast<std::size_t>(n - level.begin)] = n;
  return all;
}

}  // namespace

CoverageReport union_coverage(const Realization& real, CoverageVariant variant, double delta,
                              int j_lo, int j_hi, int grid_bits) {
  check_delta(real, variant, delta);
  if (j_lo < 2) throw DomainError("union_coverage: j_lo must be >= 2");
  if (j_hi < j_lo) throw DomainError("union_coverage: j_hi must be >= j_lo");
  if (j_hi > top_level(real, variant)) {
    throw WindowError("union_coverage: level " + std::to_string(j_hi) +
                      " is beyond the materialized window for " + std::string(to_string(variant)));
  }
  if (grid_bits < 1 || grid_bits > 28) throw ResolutionError("union_coverage: grid_bits in [1, 28]");

  const Index last = Index{1} << grid_bits;
  const double points = static_cast<double>(last + 1);
  std::vector<unsigned char> any(static_cast<std::size_t>(last + 1), 0);
  std::vector<int> diff(static_cast<std::size_t>(last + 2), 0);

  CoverageReport report;
  report.variant = variant;
  report.delta = delta;
  report.grid_bits = grid_bits;
  for (int j = j_lo; j <= j_hi; ++j) {
    std::fill(diff.begin(), diff.end(), 0);
    const auto members = variant_members(real, variant, j);
    for (Index n : members) {
      const IndexRange cells =
          detail::closed_ball_cells(real.x()[n], variant_radius(real, variant, delta, n, j), grid_bits);
      if (cells.empty()) continue;
      ++diff[static_cast<std::size_t>(cells.begin)];
      --diff[static_cast<std::size_t>(cells.end)];
    }
    Index covered = 0;
    int running = 0;
    for (Index i = 0; i <= last; ++i) {
      running += diff[static_cast<std::size_t>(i)];
      if (running > 0) {
        ++covered;
        any[static_cast<std::size_t>(i)] = 1;
      }
    }
    report.per_level.push_back({j, static_cast<double>(covered) / points,
                                static_cast<Index>(members.size())});
  }
  const auto total = std::count(any.begin(), any.end(), static_cast<unsigned char>(1));
  report.cumulative_fraction = static_cast<double>(total) / points;
  return report;
}

std::vector<int> limsup_hits(const Realization& real, double x, CoverageVariant variant,
                             double delta) {
  check_delta(real, variant, delta);
  std::vector<int> hits;
  const int top = top_level(real, variant);
  for (int j = 2; j <= top; ++j) {
    for (Index n : variant_members(real, variant, j)) {
      if (std::abs(x - real.x()[n]) <= variant_radius(real, variant, delta, n, j)) {
        hits.push_back(j);
        break;
      }
    }
  }
  return hits;
}

Index max_overlap_on_grid(const Realization& real, int j, double r, int grid_bits) {
  const IndexRange level = real.level(j);
  const Index last = Index{1} << grid_bits;
  std::vector<int> diff(static_cast<std::size_t>(last + 2), 0);
  for (Index n = level.begin; n < level.end; ++n) {
    const IndexRange cells = detail::closed_ball_cells(real.x()[n], r + real.radius()[n], grid_bits);
    if (cells.empty()) continue;
    ++diff[static_cast<std::size_t>(cells.begin)];
    --diff[static_cast<std::size_t>(cells.end)];
  }
  int running = 0;
  int best = 0;
  for (Index i = 0; i <= last; ++i) {
    running += diff[static_cast<std::size_t>(i)];
    best = std::max(best, running);
  }
  return best;
}

}  // namespace pulsefield
