#include "pulsefield/experiments.hpp"

#include "pulsefield/geometry.hpp"
#include "pulsefield/point_process.hpp"
#include "pulsefield/regression.hpp"
#include "pulsefield/rng.hpp"
#include "pulsefield/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <memory>
#include <sstream>

namespace pulsefield {

std::string_view to_string(Comparison c) noexcept {
  switch (c) {
    case Comparison::two_sided: return "two_sided";
    case Comparison::at_most: return "at_most";
    case Comparison::at_least: return "at_least";
  }
  return "two_sided";
}

namespace {

ModelParams with_seed(ModelParams p, std::uint64_t seed) {
  p.seed = seed;
  return p;
}

std::shared_ptr<const Realization> realize(const ModelParams& params, std::uint64_t seed) {
  return std::make_shared<const Realization>(sample_realization(with_seed(params, seed)));
}

void finalize(VerificationReport& r) {
  if (r.checks.empty()) throw DomainError("report without checks");
  const Check& head = r.checks.front();
  r.statistic = head.statistic;
  r.target = head.target;
  r.tolerance = head.tolerance;
  r.comparison = head.comparison;
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const Check& c) { return c.pass; });
}

CsvTable make_table(std::vector<std::string> header, const std::vector<std::vector<double>>& rows) {
  CsvTable t{std::move(header), Eigen::MatrixXd(static_cast<Index>(rows.size()), 0)};
  t.rows.resize(static_cast<Index>(rows.size()), static_cast<Index>(t.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      t.rows(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return t;
}

}  // namespace

Check Check::make(std::string name, double statistic, double target, double tolerance,
                  Comparison comparison) {
  Check c{std::move(name), statistic, target, tolerance, comparison, false};
  switch (comparison) {
    case Comparison::two_sided: c.pass = std::abs(statistic - target) <= tolerance; break;
    case Comparison::at_most: c.pass = statistic <= target + tolerance; break;
    case Comparison::at_least: c.pass = statistic >= target - tolerance; break;
  }
  return c;
}

const Check& VerificationReport::check(std::string_view wanted) const {
  for (const auto& c : checks) {
    if (c.name == wanted) return c;
  }
  throw DomainError("report " + name + " has no check " + std::string(wanted));
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"statistic", c.statistic},
                           {"target", c.target},
                           {"tolerance", c.tolerance},
                           {"comparison", std::string(pulsefield::to_string(c.comparison))},
                           {"pass", c.pass}});
  }
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < details.rows.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < details.rows.cols(); ++c) {
      const double v = details.rows(r, c);
      if (std::isfinite(v)) {
        row.push_back(v);
      } else {
        row.push_back(format_double(v));
      }
    }
    rows.push_back(std::move(row));
  }
  return {{"name", name},
          {"params", pulsefield::to_json(params)},
          {"seeds", seeds},
          {"statistic", statistic},
          {"target", target},
          {"tolerance", tolerance},
          {"comparison", std::string(pulsefield::to_string(comparison))},
          {"pass", pass},
          {"checks", checks_json},
          {"details", {{"columns", details.header}, {"rows", rows}}},
          {"flags", flags},
          {"version", std::string(kArtifactVersion)}};
}

std::string VerificationReport::to_text() const {
  std::ostringstream out;
  out << name << "  " << (pass ? "PASS" : "FAIL") << "  (alpha=" << params.alpha << ", eta=" << params.eta
      << ", jmax=" << params.j_max << ", seeds=" << seeds.size() << ")\n";
  std::size_t width = 0;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << c.name << "  "
        << std::right << std::setw(12) << std::setprecision(6) << c.statistic << "  "
        << pulsefield::to_string(c.comparison) << " " << c.target << " +/- " << c.tolerance << "  "
        << (c.pass ? "pass" : "FAIL") << "\n";
  }
  for (const auto& f : flags) out << "  flag: " << f << "\n";
  if (!details.header.empty()) {
    std::vector<int> cols;
    for (const auto& h : details.header) cols.push_back(static_cast<int>(std::max<std::size_t>(14, h.size() + 2)));
    out << "  ";
    for (std::size_t c = 0; c < cols.size(); ++c) out << std::setw(cols[c]) << details.header[c];
    out << "\n";
    for (Index r = 0; r < details.rows.rows(); ++r) {
      out << "  ";
      for (Index c = 0; c < details.rows.cols(); ++c) {
        out << std::setw(cols[static_cast<std::size_t>(c)]) << std::setprecision(6) << details.rows(r, c);
      }
      out << "\n";
    }
  }
  return out.str();
}

std::vector<std::uint64_t> default_seeds() { return {1, 2, 3, 4, 5}; }

VerificationReport verify_level_counts(const ModelParams& params, int trials) {
  params.validate();
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (params.j_max < 4) throw ParameterError("level counts need jmax >= 4");
  VerificationReport report;
  report.name = "level_counts";
  report.params = params;
  for (int t = 0; t < trials; ++t) report.seeds.push_back(params.seed + static_cast<std::uint64_t>(t));

  const int levels = params.j_max - 3;
  Eigen::MatrixXd counts(trials, levels);
  for (int t = 0; t < trials; ++t) {
    const Realization real = sample_realization(with_seed(params, report.seeds[static_cast<std::size_t>(t)]));
    for (int j = 4; j <= params.j_max; ++j) counts(t, j - 4) = static_cast<double>(real.level(j).size());
  }

  double worst_z = 0.0;
  double worst_dispersion = 0.0;
  long bound_failures = 0;
  long bound_samples = 0;
  std::vector<std::vector<double>> rows;
  for (int j = 4; j <= params.j_max; ++j) {
    const auto col = counts.col(j - 4).array();
    const double lambda = level_poisson_parameter(j, params.eta);
    const double mean = col.mean();
    const double var = trials > 1 ? (col - mean).square().sum() / (trials - 1) : lambda;
    const double se = std::sqrt(var / trials);
    const double z = se > 0.0 ? std::abs(mean - lambda) / se : (mean == lambda ? 0.0 : kInfinity);
    const double dispersion = var / mean;
    long failures = 0;
    if (j >= 8) {
      const double e = eps_level(j, params.eta);
      const double lo = std::exp2(params.eta * j * (1.0 - e));
      const double hi = std::exp2(params.eta * j * (1.0 + e));
      failures = (col < lo || col > hi).count();
      bound_failures += failures;
      bound_samples += trials;
    }
    worst_z = std::max(worst_z, z);
    if (trials > 1) worst_dispersion = std::max(worst_dispersion, std::abs(dispersion - 1.0));
    rows.push_back({double(j), lambda, mean, var, se, z, dispersion, double(failures)});
  }
  report.details = make_table({"j", "lambda", "mean", "variance", "stderr", "z", "dispersion", "bound_failures"}, rows);
  report.checks.push_back(Check::make("mean_z_max", worst_z, 0.0, 3.0, Comparison::at_most));
  if (trials > 1) {
    report.checks.push_back(Check::make("dispersion_dev_max", worst_dispersion, 0.0, 0.2, Comparison::at_most));
  } else {
    report.flags.push_back("dispersion undefined for a single trial");
  }
  if (bound_samples > 0) {
    report.checks.push_back(Check::make("as_bound_failure_rate",
                                        static_cast<double>(bound_failures) / static_cast<double>(bound_samples),
                                        0.0, 0.01, Comparison::at_most));
  } else {
    report.flags.push_back("no level j >= 8; almost-sure bound not exercised");
  }
  if (trials < 100) report.flags.push_back("low power: fewer than 100 trials");
  finalize(report);
  return report;
}

VerificationReport verify_overlap_bound(const ModelParams& params, const std::vector<std::uint64_t>& seeds,
                                        int grid_bits) {
  params.validate();
  if (seeds.empty()) throw ParameterError("seeds must not be empty");
  if (params.j_max < 9) throw ParameterError("overlap law needs jmax >= 9");
  VerificationReport report;
  report.name = "overlap_bound";
  report.params = params;
  report.seeds = seeds;

  const int j_lo = 6;
  const int levels = params.j_max - j_lo + 1;
  const std::array<int, 3> spot_levels = {j_lo, (j_lo + params.j_max) / 2, params.j_max};
  std::vector<std::shared_ptr<const Realization>> reals;
  for (auto s : seeds) reals.push_back(realize(params, s));

  Eigen::MatrixXd m0(static_cast<Index>(seeds.size()), levels);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    for (int j = j_lo; j <= params.j_max; ++j) {
      m0(static_cast<Index>(s), j - j_lo) = static_cast<double>(max_overlap_on_grid(*reals[s], j, 0.0, grid_bits));
    }
  }
  Eigen::VectorXd j2(levels);
  for (int c = 0; c < levels; ++c) j2[c] = double(j_lo + c) * double(j_lo + c);
  const Eigen::MatrixXd ratio = m0.array().rowwise() / j2.transpose().array();
  const Eigen::VectorXd mean_ratio = ratio.colwise().mean().transpose();
  const double k_fit = ratio.maxCoeff();

  // Spot checks at r = 2^{-eta J}.
  Eigen::MatrixXd spot = Eigen::MatrixXd::Zero(levels, 3);
  for (std::size_t q = 0; q < spot_levels.size(); ++q) {
    const int big_j = spot_levels[q];
    const double r = std::exp2(-params.eta * big_j);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      for (int j = j_lo; j <= params.j_max; ++j) {
        const double bound = k_fit * j * j * std::max(1.0, std::exp2(params.eta * (j - big_j)));
        const double m = static_cast<double>(max_overlap_on_grid(*reals[s], j, r, grid_bits));
        spot(j - j_lo, static_cast<Index>(q)) = std::max(spot(j - j_lo, static_cast<Index>(q)), m / bound);
      }
    }
  }

  std::vector<double> js(static_cast<std::size_t>(levels)), rs(static_cast<std::size_t>(levels));
  std::vector<std::vector<double>> rows;
  for (int c = 0; c < levels; ++c) {
    js[static_cast<std::size_t>(c)] = j_lo + c;
    rs[static_cast<std::size_t>(c)] = mean_ratio[c];
    rows.push_back({double(j_lo + c), mean_ratio[c], m0.col(c).maxCoeff(), spot(c, 0), spot(c, 1), spot(c, 2)});
  }
  const double rho = spearman_rho(js, rs);
  const double med = median(rs);
  report.details = make_table({"j", "mean_M_over_j2", "max_M", "spot_J" + std::to_string(spot_levels[0]),
                               "spot_J" + std::to_string(spot_levels[1]), "spot_J" + std::to_string(spot_levels[2])},
                              rows);
  report.checks.push_back(Check::make("spearman_rho", rho, 0.0, 0.0, Comparison::at_most));
  report.checks.push_back(Check::make("max_over_median", med > 0.0 ? mean_ratio.maxCoeff() / med : kInfinity,
                                      2.0, 0.0, Comparison::at_most));
  report.checks.push_back(Check::make("spot_ratio_max", spot.maxCoeff(), 1.0, 0.0, Comparison::at_most));
  report.flags.push_back("K fitted as max M_j / j^2 = " + format_double(k_fit));
  finalize(report);
  return report;
}

VerificationReport verify_coverage(const ModelParams& params, const std::vector<std::uint64_t>& seeds) {
  params.validate();
  if (seeds.empty()) throw ParameterError("seeds must not be empty");
  if (params.j_max < 2) throw ParameterError("coverage needs jmax >= 2");
  VerificationReport report;
  report.name = "coverage";
  report.params = params;
  report.seeds = seeds;

  const int iso_lo = 8;
  const int iso_hi = std::min(14, params.j_max);
  double worst_prime = 1.0, worst_eq51 = 1.0;
  Index worst_isolated = std::numeric_limits<Index>::max();
  std::vector<std::vector<double>> rows;
  for (auto seed : seeds) {
    const auto real = realize(params, seed);
    const auto prime = union_coverage(*real, CoverageVariant::g_prime_delta, 1.0, 2, params.j_max, params.grid_bits);
    const auto eq51 = union_coverage(*real, CoverageVariant::covering_eq51, 1.0, 2, params.j_max, params.grid_bits);
    Index min_iso = std::numeric_limits<Index>::max();
    for (int j = iso_lo; j <= iso_hi; ++j) {
      min_iso = std::min<Index>(min_iso, static_cast<Index>(isolated_indices(*real, j).indices.size()));
    }
    worst_prime = std::min(worst_prime, prime.cumulative_fraction);
    worst_eq51 = std::min(worst_eq51, eq51.cumulative_fraction);
    worst_isolated = std::min(worst_isolated, min_iso);
    rows.push_back({double(seed), prime.cumulative_fraction, eq51.cumulative_fraction,
                    iso_lo <= iso_hi ? double(min_iso) : kNegInfinity,
                    static_cast<double>(real->level(0).size())});
  }
  report.details = make_table({"seed", "isolated_coverage", "eq51_coverage", "min_isolated_8_14", "level0_pulses"}, rows);
  report.checks.push_back(Check::make("isolated_coverage_min", worst_prime, 0.99, 0.0, Comparison::at_least));
  report.checks.push_back(Check::make("eq51_coverage_min", worst_eq51, 0.99, 0.0, Comparison::at_least));
  if (iso_lo <= iso_hi) {
    report.checks.push_back(Check::make("isolated_count_min", static_cast<double>(worst_isolated), 1.0, 0.0,
                                        Comparison::at_least));
  }
  if (params.j_max < iso_lo) report.flags.push_back("truncation too coarse: jmax below 8");
  finalize(report);
  return report;
}

UniformFits uniform_regularity_fits(const Signal& signal, double alpha, ScaleWindow window) {
  UniformFits out;
  const auto modulus = uniform_modulus(signal, window.k_lo, window.k_hi);
  out.modulus = fit_power_log(modulus);
  out.modulus_log = fit_power_log(modulus, 2.0 + alpha);
  const CwtGrid grid = cwt_signal_grid(signal, AnalyzingWavelet{}, window.k_lo, window.k_hi);
  out.cwt = uniform_decay_fit(grid);
  out.cwt_log = uniform_decay_fit(grid, 2.0 + alpha);
  out.smooth = out.modulus.exponent >= 0.9 || out.cwt.h_uniform >= 0.9;
  return out;
}

VerificationReport verify_uniform_regularity(const ModelParams& params, const std::vector<std::uint64_t>& seeds) {
  params.validate();
  if (seeds.empty()) throw ParameterError("seeds must not be empty");
  const ScaleWindow window = ScaleWindow::defaults(params.grid_bits);
  if (window.count() < 5) throw ResolutionError("uniform regularity needs grid_bits >= 13");
  VerificationReport report;
  report.name = "uniform_regularity";
  report.params = params;
  report.seeds = seeds;

  double mod = 0.0, cwt = 0.0;
  bool smooth = false;
  std::vector<std::vector<double>> rows;
  for (auto seed : seeds) {
    const Signal signal = evaluate_field(realize(params, seed), params.grid_bits);
    const UniformFits f = uniform_regularity_fits(signal, params.alpha, window);
    mod += f.modulus.exponent;
    cwt += f.cwt.h_uniform;
    smooth = smooth || f.smooth;
    rows.push_back({double(seed), f.modulus.exponent, f.cwt.h_uniform, f.modulus_log.exponent, f.cwt_log.h_uniform});
  }
  const double n = static_cast<double>(seeds.size());
  report.details = make_table({"seed", "modulus", "cwt", "modulus_log2a", "cwt_log2a"}, rows);
  report.checks.push_back(Check::make("modulus_exponent_mean", mod / n, params.alpha_eta(), 0.1, Comparison::two_sided));
  report.checks.push_back(Check::make("cwt_exponent_mean", cwt / n, params.alpha_eta(), 0.1, Comparison::two_sided));
  report.flags.push_back("scales 2^-" + std::to_string(window.k_lo) + "..2^-" + std::to_string(window.k_hi) +
                         "; log-corrected fits (power 2 + alpha) listed in details only");
  if (smooth) report.flags.emplace_back(kSmoothFlag);
  finalize(report);
  return report;
}

ScaleWindow truncation_window(const ModelParams& params) {
  const int k_hi = std::min(params.grid_bits - 4, static_cast<int>(std::floor(params.eta * params.j_max)));
  const ScaleWindow w{3, k_hi};
  if (w.count() < 4) {
    std::ostringstream msg;
    msg << "jmax " << params.j_max << " resolves scales only down to 2^-" << k_hi << "; need eta * jmax >= 6";
    throw ResolutionError(msg.str());
  }
  return w;
}

double median_exponent_at_random_points(const Signal& signal, std::uint64_t seed, int points, ScaleWindow window) {
  if (points < 1) throw ParameterError("points must be positive");
  CounterRng rng = CounterRng::stream(seed, "points", 0);
  const double cells = std::ldexp(1.0, signal.grid_bits);
  std::vector<double> hs;
  hs.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    const double x = std::ldexp(std::floor(rng.uniform() * cells), -signal.grid_bits);
    hs.push_back(pointwise_exponent(signal, x, window, EstimatorMethod::oscillation).h);
  }
  return median(std::move(hs));
}

VerificationReport assess_spectrum(const ModelParams& params, const std::vector<std::uint64_t>& seeds,
                                   const std::vector<SpectrumEstimate>& spectra, const std::vector<double>& medians,
                                   ScaleWindow window) {
  if (spectra.empty() || spectra.size() != medians.size()) throw ParameterError("one spectrum and median per seed");
  VerificationReport report;
  report.name = "spectrum";
  report.params = params;
  report.seeds = seeds;

  const double alpha = params.alpha;
  const double eta = params.eta;
  const double width = spectra.front().bin_width;
  struct Accum {
    double center = 0.0;
    double dim_sum = 0.0;
    int dim_seeds = 0;
    Index count = 0;
  };
  std::map<long, Accum> bins;
  for (const SpectrumEstimate& est : spectra) {
    for (Index i = 0; i < est.bin_centers.size(); ++i) {
      const long key = std::lround((est.bin_centers[i] - alpha * eta) / width - 0.5);
      Accum& a = bins[key];
      a.center = est.bin_centers[i];
      a.count += est.counts[static_cast<std::size_t>(i)];
      if (std::isfinite(est.dims[i])) {
        a.dim_sum += est.dims[i];
        ++a.dim_seeds;
      }
    }
  }
  double median_sum = 0.0;
  for (double m : medians) median_sum += m;

  const double lo = alpha * eta + 0.05 * alpha - 1e-12;
  const double hi = alpha - 0.05 * alpha + 1e-12;
  double worst = 0.0;
  int interior = 0;
  int violations = 0;
  double previous = kNegInfinity;
  std::vector<std::vector<double>> rows;
  for (const auto& [key, a] : bins) {
    const double dim = a.dim_seeds > 0 ? a.dim_sum / a.dim_seeds : kNegInfinity;
    const double theory = theoretical_spectrum(alpha, eta, a.center);
    rows.push_back({a.center, dim, theory, static_cast<double>(a.count), double(a.dim_seeds)});
    if (a.center < lo || a.center > hi || !std::isfinite(dim)) continue;
    ++interior;
    worst = std::max(worst, std::abs(dim - theory));
    if (dim < previous) ++violations;
    previous = dim;
  }
  report.details = make_table({"H", "dim_mean", "dim_theory", "count", "seeds_with_dim"}, rows);
  report.checks.push_back(Check::make("median_exponent", median_sum / static_cast<double>(medians.size()), alpha, 0.1,
                                      Comparison::two_sided));
  report.checks.push_back(Check::make("interior_dim_error_max", worst, 0.0, 0.2, Comparison::at_most));
  report.checks.push_back(Check::make("monotone_violations", violations, 1.0, 0.0, Comparison::at_most));
  if (interior == 0) report.flags.push_back("no populated interior bin: spectrum test vacuous");
  report.flags.push_back("exponent scales 2^-" + std::to_string(window.k_lo) + "..2^-" + std::to_string(window.k_hi));
  finalize(report);
  return report;
}

VerificationReport verify_spectrum(const ModelParams& params, const std::vector<std::uint64_t>& seeds,
                                   const SpectrumOptions& options) {
  params.validate();
  if (seeds.empty()) throw ParameterError("seeds must not be empty");
  const ScaleWindow window = options.window.value_or(truncation_window(params));
  std::vector<SpectrumEstimate> spectra;
  std::vector<double> medians;
  for (auto seed : seeds) {
    const Signal signal = evaluate_field(realize(params, seed), params.grid_bits);
    medians.push_back(median_exponent_at_random_points(signal, seed, options.points, window));
    const ExponentField field = exponent_field(signal, options.stride_bits, window, EstimatorMethod::oscillation);
    spectra.push_back(spectrum_estimate(field, params.alpha, params.eta, 0.05 * params.alpha, 4, options.stride_bits - 2));
  }
  return assess_spectrum(params, seeds, spectra, medians, window);
}

}  // namespace pulsefield
