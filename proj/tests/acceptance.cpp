// Acceptance battery: one pass/fail line per criterion, nonzero exit on any failure.

#include "cli.hpp"
#include "pulsefield/experiments.hpp"
#include "pulsefield/field.hpp"
#include "pulsefield/geometry.hpp"
#include "pulsefield/regression.hpp"
#include "pulsefield/regularity.hpp"
#include "pulsefield/wavelet.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace pulsefield;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

std::shared_ptr<const Realization> realize(double alpha, double eta, std::uint64_t seed, int jmax, int g) {
  return std::make_shared<const Realization>(sample_realization(make_params(alpha, eta, seed, jmax, g)));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int cli_run(std::vector<std::string> args) {
  args.insert(args.begin(), "pulsefield");
  std::ostringstream out, err;
  return cli::main_entry(args, out, err);
}

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  // grid_bits >= jmax + 2 rules out all 14 levels on 2^14 cells: check levels 0..12 there and all levels on 2^16
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = realize(0.5, 0.5, seed, 14, 16);
    for (auto [g, j_hi] : {std::pair{14, 12}, std::pair{16, 14}}) {
      const Signal s = evaluate_field(r, g, {0, j_hi});
      const Index keep = r->level(j_hi).end;  // levels are contiguous in ascending b
      const auto part = Realization::from_arrays(r->params(), r->c().head(keep), r->b().head(keep), r->x().head(keep));
      for (Index i = 0; i < s.size(); ++i)
        worst = std::max(worst, std::abs(s.values[i] - evaluate_field_direct(part, s.position(i))));
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst <= 1e-12 && secs < 10.0,
          fmt("max |grid - direct| = %.3g (tol 1e-12) on 2^14 (levels 0..12) and 2^16 (0..14), %.2f s (limit 10 s)", worst,
              secs)};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("pulsefield_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  bool same = true;
  std::string note;
  for (const std::string cmd : {"simulate", "field"}) {
    std::string bytes[2];
    for (int run = 0; run < 2; ++run) {
      const fs::path out = dir / (cmd + std::to_string(run) + ".csv");
      const int code = cli_run({cmd, "--alpha", "0.9", "--eta", "0.4", "--seed", "17", "--jmax", "14", "--out", out.string()});
      same = same && code == 0;
      bytes[run] = slurp(out) + slurp(out.string() + ".json");
    }
    same = same && !bytes[0].empty() && bytes[0] == bytes[1];
    note += cmd + " " + std::to_string(bytes[0].size()) + " bytes; ";
  }
  fs::remove_all(dir);
  return {same, note + (same ? "identical" : "differ")};
}

Outcome poisson_levels() {
  const auto start = std::chrono::steady_clock::now();
  const auto report = verify_level_counts(make_params(0.5, 0.5, 1, 12), 500);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& c1 = report.check("mean_z_max");
  const auto& c2 = report.check("dispersion_dev_max");
  return {c1.pass && c2.pass && secs < 30.0,
          fmt("max |mean - lambda| / stderr = %.3f (tol 3), max |dispersion - 1| = %.3f (tol 0.2), %.1f s", c1.statistic,
              c2.statistic, secs)};
}

Outcome overlap_law() {
  const auto report = verify_overlap_bound(make_params(0.5, 0.5, 1, 14), default_seeds(), 16);
  const auto& c = report.check("spearman_rho");
  return {c.pass, fmt("Spearman rho of M_j / j^2 over j = 6..14 = %.3f (need <= 0)", c.statistic)};
}

Outcome matched_scale() {
  const auto base = sample_realization(make_params(0.5, 0.5, 21, 16));
  std::mt19937_64 gen(21);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Index n = static_cast<Index>(gen() % static_cast<std::uint64_t>(base.size()));
    Eigen::VectorXd c(1), b(1), x(1);
    c << 1.0;
    b << base.b()[n];
    x << base.x()[n];
    const auto single = Realization::from_arrays(base.params(), c, b, x);
    const double s = single.radius()[0];
    const double expected = std::sqrt(s) * AnalyzingWavelet::pulse_overlap(PulseKind::hat);
    const double w = cwt_pulse_sum(single, s, x[0], {0, single.j_max()});
    worst = std::max(worst, std::abs(w - expected) / std::abs(expected));
  }
  return {worst <= 1e-6, fmt("max relative error over 100 pulses = %.3g (tol 1e-6)", worst)};
}

Outcome constant_kill() {
  const ModelParams defaults;
  const int g = defaults.grid_bits;
  const Signal one = Signal::sample(g, [](double) { return 1.0; });
  double worst = 0.0;
  for (const auto& sc : cwt_signal_grid(one, AnalyzingWavelet{}, 1, g - 4).scales) worst = std::max(worst, sc.w.cwiseAbs().maxCoeff());
  return {worst <= 1e-10, fmt("max |W| on grid 2^-%d, scales 2^-1..2^-%d = %.3g (tol 1e-10)", g, g - 4, worst)};
}

Outcome uniform_regularity() {
  std::vector<std::uint64_t> seeds(10);
  for (int i = 0; i < 10; ++i) seeds[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i + 1);
  const auto start = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (auto [alpha, eta] : {std::pair{0.5, 0.5}, std::pair{0.9, 0.4}}) {
    const auto report = verify_uniform_regularity(make_params(alpha, eta, 1, 16, 20), seeds);
    const auto& m = report.check("modulus_exponent_mean");
    const auto& w = report.check("cwt_exponent_mean");
    double mod_log = 0.0, cwt_log = 0.0;
    for (Index r = 0; r < report.details.rows.rows(); ++r) {
      mod_log += report.details.rows(r, 3);
      cwt_log += report.details.rows(r, 4);
    }
    pass = pass && m.pass && w.pass;
    detail += fmt("(%.1f,%.1f) target %.2f: modulus %.3f, cwt %.3f [log-corrected %.3f, %.3f]; ", alpha, eta, alpha * eta,
                  m.statistic, w.statistic, mod_log / 10, cwt_log / 10);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {pass && secs < 300.0, detail + fmt("tol 0.10, %.0f s", secs)};
}

Outcome ae_exponent() {
  bool pass = true;
  std::string detail;
  for (auto [alpha, eta] : {std::pair{0.5, 0.5}, std::pair{0.9, 0.4}}) {
    const ModelParams p = make_params(alpha, eta, 1, 20, 22);
    const ScaleWindow window = truncation_window(p);
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const Signal s = evaluate_field(realize(alpha, eta, seed, 20, 22), 22);
      sum += median_exponent_at_random_points(s, seed, 200, window);
    }
    const double stat = sum / 10.0;
    pass = pass && std::abs(stat - alpha) <= 0.1;
    detail += fmt("(%.1f,%.1f): mean of medians %.3f (target %.1f, scales 2^-%d..2^-%d); ", alpha, eta, stat, alpha,
                  window.k_lo, window.k_hi);
  }
  return {pass, detail + "tol 0.10"};
}

Outcome spectrum() {
  const auto start = std::chrono::steady_clock::now();
  const auto report = verify_spectrum(make_params(0.9, 0.4, 1, 20, 22), default_seeds());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto& e = report.check("interior_dim_error_max");
  const auto& v = report.check("monotone_violations");
  return {e.pass && v.pass && secs < 600.0,
          fmt("max interior |dim - H/alpha| = %.3f (tol 0.2), monotone violations %.0f (max 1), %.0f s", e.statistic,
              v.statistic, secs)};
}

Outcome coverage() {
  const auto report = verify_coverage(make_params(0.5, 0.5, 1, 16), default_seeds());
  const auto& c = report.check("isolated_coverage_min");
  const auto& n = report.check("isolated_count_min");
  return {c.pass && n.pass, fmt("min isolated-ball coverage %.4f (need >= 0.99), min |I_j| over j = 8..14 = %.0f (need >= 1)",
                                c.statistic, n.statistic)};
}

Outcome calibration() {
  const double x0 = 0.375;
  const Signal cusp = Signal::sample(16, [&](double x) { return std::pow(std::abs(x - x0), 0.7); });
  const double h_cusp = pointwise_exponent(cusp, x0, ScaleWindow::defaults(16), EstimatorMethod::oscillation).h;

  const Signal weier = Signal::sample(20, [](double x) {
    double s = 0.0;
    for (int k = 0; k <= 18; ++k) s += std::exp2(-0.6 * k) * std::cos(std::exp2(k) * x);
    return s;
  });
  const auto wf = exponent_field(weier, 10, ScaleWindow::defaults(20), EstimatorMethod::oscillation);
  const double h_weier = median({wf.h_est.data(), wf.h_est.data() + wf.size()});

  ExponentField cantor;
  const int bits = 20;
  const Index n = (Index{1} << bits) + 1;
  cantor.positions.resize(n);
  cantor.h_est.resize(n);
  cantor.r_squared = Eigen::VectorXd::Ones(n);
  cantor.capped.assign(static_cast<std::size_t>(n), false);
  const std::int64_t one = std::int64_t{1} << bits;
  for (Index i = 0; i < n; ++i) {
    std::int64_t y = i;
    bool inside = true;
    for (int depth = 0; depth < 10; ++depth) {
      y *= 3;
      const std::int64_t d = y / one;
      if (d == 3) break;
      if (d == 1) {
        inside = y == one;
        break;
      }
      y -= d * one;
    }
    cantor.positions[i] = std::ldexp(double(i), -bits);
    cantor.h_est[i] = inside ? 0.9 : 0.4;
  }
  const auto est = spectrum_estimate(cantor, 0.9, 0.4, 0.045, 4, 14);
  double dim = kNegInfinity;
  for (Index b = 0; b < est.dims.size(); ++b)
    if (est.bin_centers[b] > 0.85) dim = est.dims[b];
  const double target = std::log(2.0) / std::log(3.0);
  const bool pass = std::abs(h_cusp - 0.7) <= 0.05 && std::abs(h_weier - 0.6) <= 0.1 && std::abs(dim - target) <= 0.05;
  return {pass, fmt("cusp %.4f (0.7 +/- 0.05), Weierstrass median %.4f (0.6 +/- 0.1), Cantor box dim %.4f (%.4f +/- 0.05)",
                    h_cusp, h_weier, dim, target)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle equivalence", oracle_equivalence},
      {"determinism", determinism},
      {"Poisson levels", poisson_levels},
      {"overlap law", overlap_law},
      {"matched-scale identity", matched_scale},
      {"vanishing-integral kill", constant_kill},
      {"uniform regularity", uniform_regularity},
      {"a.e. exponent", ae_exponent},
      {"spectrum", spectrum},
      {"coverage", coverage},
      {"estimator calibration", calibration},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("%-4s %2d %-24s %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
