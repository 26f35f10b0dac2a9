#include "cli.hpp"

#include "pulsefield/field.hpp"
#include "pulsefield/io.hpp"
#include "pulsefield/point_process.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <memory>
#include <ostream>
#include <sstream>

namespace pulsefield::cli {

namespace {

struct CommonFlags {
  double alpha = 0.5;
  double eta = 0.5;
  std::uint64_t seed = 1;
  std::optional<int> jmax;
  std::optional<int> grid_bits;
  std::string pulse = "hat";
  std::optional<double> gamma;
  std::optional<int> p0;
  std::optional<std::string> out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--alpha", f.alpha, "regularity exponent in (0,1)");
  cmd->add_option("--eta", f.eta, "lacunarity in (0,1)");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--jmax", f.jmax, "finest materialized level");
  cmd->add_option("--grid-bits", f.grid_bits, "field grid 2^-grid_bits (default jmax + 2)");
  cmd->add_option("--pulse", f.pulse, "pulse profile")->check(CLI::IsMember({"hat", "smooth_bump"}));
  cmd->add_option("--gamma", f.gamma, "isolation window exponent (default 1)");
  cmd->add_option("--p0", f.p0, "isolation window constant (default from alpha, eta)");
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
  cmd->add_option("--format", f.format, "output format")->check(CLI::IsMember({"csv", "json"}));
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json table_json(const CsvTable& table, nlohmann::json metadata) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < table.rows.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < table.rows.cols(); ++c) {
      const double v = table.rows(r, c);
      if (std::isfinite(v)) {
        row.push_back(v);
      } else {
        row.push_back(format_double(v));
      }
    }
    rows.push_back(std::move(row));
  }
  metadata["columns"] = table.header;
  metadata["rows"] = std::move(rows);
  return metadata;
}

/// CSV (plus JSON sidecar when writing a file) or a single JSON document.
void emit_table(const RunConfig& cfg, const CsvTable& table, const nlohmann::json& metadata, std::ostream& out) {
  if (cfg.format == OutputFormat::json) {
    const auto doc = table_json(table, metadata);
    if (cfg.out) {
      write_json(doc, *cfg.out);
    } else {
      out << doc.dump(2) << "\n";
    }
    return;
  }
  if (cfg.out) {
    write_csv(table, *cfg.out);
    if (!metadata.is_null()) write_json(metadata, *cfg.out + ".json");
  } else {
    out << to_csv(table);
  }
}

void emit_json(const RunConfig& cfg, const nlohmann::json& doc, std::ostream& out) {
  if (cfg.out) {
    write_json(doc, *cfg.out);
  } else {
    out << doc.dump(2) << "\n";
  }
}

ScaleWindow window_of(const RunConfig& cfg) {
  const ScaleWindow d = ScaleWindow::defaults(cfg.params.grid_bits);
  return {cfg.k_lo.value_or(d.k_lo), cfg.k_hi.value_or(d.k_hi)};
}

LevelRange levels_of(const RunConfig& cfg) {
  return {cfg.j_lo.value_or(0), cfg.j_hi.value_or(cfg.params.j_max)};
}

std::shared_ptr<const Realization> realize(const RunConfig& cfg) {
  return std::make_shared<const Realization>(sample_realization(cfg.params));
}

/// Checks command options against module preconditions before any computation.
void validate(const RunConfig& cfg) {
  const ModelParams& p = cfg.params;
  const auto fail = [](const std::string& msg) { throw UsageError("error: " + msg, kUsage); };
  const LevelRange lv = levels_of(cfg);
  if (lv.lo < 0 || lv.hi > p.j_max || lv.lo > lv.hi) {
    fail("--jlo/--jhi must satisfy 0 <= jlo <= jhi <= jmax (got " + std::to_string(lv.lo) + ".." +
         std::to_string(lv.hi) + ")");
  }
  switch (cfg.command) {
    case Command::cwt: {
      const int m_hi = cfg.m_hi.value_or(p.grid_bits - 4);
      if (cfg.m_lo < 0 || cfg.m_lo > m_hi) fail("--mlo must lie in [0, mhi]");
      if (cfg.cwt_method == CwtMethod::signal_quadrature && m_hi > p.grid_bits - 4) {
        fail("--mhi must be at most grid_bits - 4 = " + std::to_string(p.grid_bits - 4) + " (got " +
             std::to_string(m_hi) + ")");
      }
      break;
    }
    case Command::holder:
    case Command::spectrum: {
      const ScaleWindow w = window_of(cfg);
      if (w.k_lo < 0 || w.k_hi > p.grid_bits || w.count() < 4) {
        fail("--klo/--khi must give at least 4 scales within 0..grid_bits (got " + std::to_string(w.k_lo) + ".." +
             std::to_string(w.k_hi) + ")");
      }
      if (cfg.stride_bits < 0 || cfg.stride_bits > p.grid_bits) fail("--stride must lie in [0, grid_bits]");
      if (cfg.x0 && !(*cfg.x0 >= 0.0 && *cfg.x0 <= 1.0)) fail("--x0 must lie in [0,1]");
      if (cfg.command == Command::spectrum) {
        const int lo = cfg.box_k_lo.value_or(4);
        const int hi = cfg.box_k_hi.value_or(cfg.stride_bits - 2);
        if (lo < 0 || hi <= lo || hi + 2 > cfg.stride_bits) {
          fail("--box-klo/--box-khi must satisfy 0 <= lo < hi <= stride - 2");
        }
        if (cfg.bin_width && !(*cfg.bin_width > 0.0)) fail("--bin-width must be positive");
      }
      break;
    }
    case Command::coverage: {
      const int hi = cfg.cover_j_hi.value_or(p.j_max);
      if (cfg.cover_j_lo < 2 || hi > p.j_max || cfg.cover_j_lo > hi) {
        fail("--cover-jlo/--cover-jhi must satisfy 2 <= lo <= hi <= jmax");
      }
      if (cfg.variant == CoverageVariant::g_delta || cfg.variant == CoverageVariant::g_prime_delta) {
        if (!(cfg.delta >= 1.0 && cfg.delta <= 1.0 / p.eta)) fail("--delta must lie in [1, 1/eta]");
      }
      break;
    }
    case Command::verify: {
      static const std::vector<std::string> suites = {"all", "level_counts", "overlap", "coverage", "uniform",
                                                      "spectrum"};
      if (std::find(suites.begin(), suites.end(), cfg.suite) == suites.end()) fail("unknown --suite " + cfg.suite);
      if (cfg.trials < 1) fail("--trials must be positive");
      break;
    }
    default:
      break;
  }
}

ModelParams experiment_params(const RunConfig& cfg, int j_max, int grid_bits) {
  ModelParams p = cfg.params;
  if (!cfg.jmax_given) p.j_max = j_max;
  if (!cfg.grid_bits_given) p.grid_bits = cfg.jmax_given ? std::max(p.j_max + 2, 13) : grid_bits;
  p.validate();
  return p;
}

int run_verify(const RunConfig& cfg, std::ostream& out) {
  const auto seeds = cfg.seeds.empty() ? default_seeds() : cfg.seeds;
  const bool all = cfg.suite == "all";
  std::vector<VerificationReport> reports;
  if (all || cfg.suite == "level_counts") {
    reports.push_back(verify_level_counts(experiment_params(cfg, 12, 14), cfg.trials));
  }
  if (all || cfg.suite == "overlap") {
    const ModelParams p = experiment_params(cfg, 14, 18);
    reports.push_back(verify_overlap_bound(p, seeds, p.grid_bits));
  }
  if (all || cfg.suite == "coverage") reports.push_back(verify_coverage(experiment_params(cfg, 16, 20), seeds));
  if (all || cfg.suite == "uniform") {
    reports.push_back(verify_uniform_regularity(experiment_params(cfg, 16, 20), seeds));
  }
  if (all || cfg.suite == "spectrum") reports.push_back(verify_spectrum(experiment_params(cfg, 20, 22), seeds));

  bool pass = true;
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& r : reports) {
    pass = pass && r.pass;
    doc.push_back(r.to_json());
    if (cfg.format == OutputFormat::csv || cfg.out) out << r.to_text() << "\n";
  }
  nlohmann::json summary = {{"pass", pass}, {"reports", doc}};
  if (cfg.out) {
    write_json(summary, *cfg.out);
  } else if (cfg.format == OutputFormat::json) {
    out << summary.dump(2) << "\n";
  }
  if (cfg.format == OutputFormat::csv || cfg.out) out << (pass ? "ALL PASS" : "SOME CHECKS FAILED") << "\n";
  return pass ? kOk : kVerificationFailed;
}

int dispatch(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::theory:
      out << shortest(theoretical_spectrum(cfg.params.alpha, cfg.params.eta, cfg.H)) << "\n";
      return kOk;
    case Command::simulate: {
      const auto real = realize(cfg);
      emit_table(cfg, realization_table(*real), realization_metadata(*real), out);
      return kOk;
    }
    case Command::field: {
      const Signal signal = evaluate_field(realize(cfg), cfg.params.grid_bits, levels_of(cfg));
      emit_table(cfg, signal_table(signal), signal_metadata(signal), out);
      return kOk;
    }
    case Command::cwt: {
      const auto real = realize(cfg);
      const int m_hi = cfg.m_hi.value_or(cfg.params.grid_bits - 4);
      CwtGrid grid;
      if (cfg.cwt_method == CwtMethod::signal_quadrature) {
        grid = cwt_signal_grid(evaluate_field(real, cfg.params.grid_bits, levels_of(cfg)), AnalyzingWavelet{},
                               cfg.m_lo, m_hi);
      } else {
        grid = cwt_pulse_grid(*real, cfg.m_lo, m_hi, levels_of(cfg));
      }
      auto meta = cwt_metadata(grid);
      meta["params"] = to_json(cfg.params);
      emit_table(cfg, cwt_table(grid), meta, out);
      return kOk;
    }
    case Command::holder:
    case Command::spectrum: {
      const Signal signal = evaluate_field(realize(cfg), cfg.params.grid_bits, levels_of(cfg));
      const ScaleWindow w = window_of(cfg);
      std::optional<CwtGrid> grid;
      if (cfg.estimator == EstimatorMethod::wavelet_cone) {
        grid = cwt_signal_grid(signal, AnalyzingWavelet{}, w.k_lo, w.k_hi);
      }
      const CwtGrid* cwt = grid ? &*grid : nullptr;
      nlohmann::json meta = {{"version", std::string(kArtifactVersion)},
                             {"params", to_json(cfg.params)},
                             {"method", std::string(to_string(cfg.estimator))},
                             {"k_lo", w.k_lo},
                             {"k_hi", w.k_hi}};
      if (cfg.command == Command::holder && cfg.x0) {
        const auto est = pointwise_exponent(signal, *cfg.x0, w, cfg.estimator, cwt, SnapPolicy::nearest);
        meta["x0"] = *cfg.x0;
        meta["h"] = est.h;
        meta["capped"] = est.capped;
        meta["snapped"] = est.snapped;
        if (est.snapped) meta["x0_grid"] = snap_to_grid(signal, *cfg.x0, SnapPolicy::nearest).x;
        if (est.fit) meta["r2"] = est.fit->r_squared;
        emit_json(cfg, meta, out);
        return kOk;
      }
      const ExponentField field = exponent_field(signal, cfg.stride_bits, w, cfg.estimator, cwt);
      if (cfg.command == Command::holder) {
        emit_table(cfg, exponent_field_table(field), meta, out);
        return kOk;
      }
      const double width = cfg.bin_width.value_or(0.05 * cfg.params.alpha);
      const SpectrumEstimate est = spectrum_estimate(field, cfg.params.alpha, cfg.params.eta, width,
                                                     cfg.box_k_lo.value_or(4),
                                                     cfg.box_k_hi.value_or(cfg.stride_bits - 2));
      meta["bin_width"] = width;
      meta["box_k_lo"] = est.box_k_lo;
      meta["box_k_hi"] = est.box_k_hi;
      emit_table(cfg, spectrum_table(est), meta, out);
      return kOk;
    }
    case Command::coverage: {
      const auto real = realize(cfg);
      const auto report = union_coverage(*real, cfg.variant, cfg.delta, cfg.cover_j_lo,
                                         cfg.cover_j_hi.value_or(cfg.params.j_max), cfg.params.grid_bits);
      auto meta = coverage_summary(report);
      meta["params"] = to_json(cfg.params);
      emit_table(cfg, coverage_table(report), meta, out);
      return kOk;
    }
    case Command::verify:
      return run_verify(cfg, out);
  }
  return kOk;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& argv) {
  CLI::App app{"Lacunary random pulse fields: simulation, wavelets, regularity and spectra"};
  app.name(argv.empty() ? "pulsefield" : argv.front());
  app.require_subcommand(1);
  CommonFlags f;
  RunConfig cfg;
  std::string cwt_method = "signal", estimator = "oscillation", variant = "G_delta";

  auto* simulate = app.add_subcommand("simulate", "sample a realization (n,c,b,x)");
  auto* field = app.add_subcommand("field", "evaluate the field on the grid (x,F)");
  auto* cwt = app.add_subcommand("cwt", "wavelet coefficients on the dyadic lattice (m,t,W)");
  auto* holder = app.add_subcommand("holder", "pointwise exponents (x,h,r2), or one point with --x0");
  auto* spectrum = app.add_subcommand("spectrum", "box-counted spectrum (H,dim_est,dim_theory,count)");
  auto* coverage = app.add_subcommand("coverage", "limsup ball coverage (j,ball_count,covered_fraction)");
  auto* verify = app.add_subcommand("verify", "run the verification battery");
  auto* theory = app.add_subcommand("theory", "theoretical spectrum value at --H");

  for (auto* cmd : {simulate, field, cwt, holder, spectrum, coverage, verify, theory}) add_common(cmd, f);
  for (auto* cmd : {field, cwt, holder, spectrum}) {
    cmd->add_option("--jlo", cfg.j_lo, "lowest level summed");
    cmd->add_option("--jhi", cfg.j_hi, "highest level summed");
  }
  cwt->add_option("--mlo", cfg.m_lo, "coarsest scale 2^-mlo");
  cwt->add_option("--mhi", cfg.m_hi, "finest scale 2^-mhi (default grid_bits - 4)");
  cwt->add_option("--method", cwt_method, "signal quadrature or exact pulse sum")
      ->check(CLI::IsMember({"signal", "pulse"}));
  for (auto* cmd : {holder, spectrum}) {
    cmd->add_option("--stride", cfg.stride_bits, "positions i 2^-stride");
    cmd->add_option("--klo", cfg.k_lo, "coarsest regression scale (default 5)");
    cmd->add_option("--khi", cfg.k_hi, "finest regression scale (default grid_bits - 4)");
    cmd->add_option("--method", estimator, "estimator")->check(CLI::IsMember({"oscillation", "wavelet_cone"}));
  }
  holder->add_option("--x0", cfg.x0, "single point, snapped to the nearest grid node");
  spectrum->add_option("--bin-width", cfg.bin_width, "H-bin width (default 0.05 alpha)");
  spectrum->add_option("--box-klo", cfg.box_k_lo, "coarsest box scale (default 4)");
  spectrum->add_option("--box-khi", cfg.box_k_hi, "finest box scale (default stride - 2)");
  coverage->add_option("--variant", variant, "ball family")
      ->check(CLI::IsMember({"G_delta", "G_prime_delta", "covering_eq51", "G_tilde_one"}));
  coverage->add_option("--delta", cfg.delta, "approximation rate in [1, 1/eta]");
  coverage->add_option("--cover-jlo", cfg.cover_j_lo, "lowest level (>= 2)");
  coverage->add_option("--cover-jhi", cfg.cover_j_hi, "highest level (default jmax)");
  verify->add_option("--suite", cfg.suite, "all, level_counts, overlap, coverage, uniform or spectrum");
  verify->add_option("--trials", cfg.trials, "level-count trials");
  verify->add_option("--seeds", cfg.seeds, "seed list (default 1 2 3 4 5)");
  theory->add_option("--H", cfg.H, "Hoelder exponent")->required();

  std::vector<const char*> args;
  for (const auto& a : argv) args.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(args.size()), args.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream msg, ignored;
    const int code = app.exit(e, msg, msg);
    throw UsageError(msg.str(), code == 0 ? kOk : kUsage);
  }

  const std::pair<CLI::App*, Command> table[] = {
      {simulate, Command::simulate}, {field, Command::field},       {cwt, Command::cwt},
      {holder, Command::holder},     {spectrum, Command::spectrum}, {coverage, Command::coverage},
      {verify, Command::verify},     {theory, Command::theory}};
  for (const auto& [app_cmd, command] : table) {
    if (app_cmd->parsed()) cfg.command = command;
  }

  try {
    cfg.params = make_params(f.alpha, f.eta, f.seed, f.jmax.value_or(ModelParams{}.j_max), f.grid_bits,
                             parse_pulse_kind(f.pulse), f.p0, f.gamma);
  } catch (const ParameterError& e) {
    throw UsageError(std::string("error: ") + e.what(), kUsage);
  }
  cfg.jmax_given = f.jmax.has_value();
  cfg.grid_bits_given = f.grid_bits.has_value();
  cfg.out = f.out;
  cfg.format = f.format == "json" ? OutputFormat::json : OutputFormat::csv;
  cfg.cwt_method = cwt_method == "pulse" ? CwtMethod::pulse_sum : CwtMethod::signal_quadrature;
  cfg.estimator = parse_estimator_method(estimator);
  cfg.variant = parse_coverage_variant(variant);
  validate(cfg);
  return cfg;
}

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(config, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
}

int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = parse_config(argv);
  } catch (const UsageError& e) {
    (e.code() == kOk ? out : err) << e.what();
    if (e.code() != kOk) err << "\n";
    return e.code();
  }
  return run_command(cfg, out, err);
}

}  // namespace pulsefield::cli
