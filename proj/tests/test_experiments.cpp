#include "helpers.hpp"

#include "pulsefield/experiments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace pulsefield;

namespace {

bool has_flag(const VerificationReport& r, std::string_view needle) {
  return std::any_of(r.flags.begin(), r.flags.end(), [&](const std::string& f) { return f.find(needle) != std::string::npos; });
}

Index column(const CsvTable& t, std::string_view name) {
  const auto it = std::find(t.header.begin(), t.header.end(), name);
  REQUIRE(it != t.header.end());
  return it - t.header.begin();
}

}  // namespace

TEST_CASE("checks compare as declared") {
  CHECK(Check::make("a", 0.35, 0.25, 0.1, Comparison::two_sided).pass);
  CHECK_FALSE(Check::make("a", 0.36, 0.25, 0.1, Comparison::two_sided).pass);
  CHECK(Check::make("a", 3.0, 0.0, 3.0, Comparison::at_most).pass);
  CHECK_FALSE(Check::make("a", 3.01, 0.0, 3.0, Comparison::at_most).pass);
  CHECK(Check::make("a", 0.99, 0.99, 0.0, Comparison::at_least).pass);
  CHECK_FALSE(Check::make("a", 0.98, 0.99, 0.0, Comparison::at_least).pass);
  CHECK_FALSE(Check::make("a", std::nan(""), 0.0, 1.0, Comparison::at_most).pass);
  CHECK(to_string(Comparison::at_least) == "at_least");
  CHECK(default_seeds() == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
}

TEST_CASE("level counts follow the Poisson law") {
  const auto report = verify_level_counts(make_params(0.5, 0.5, 1, 12), 500);
  const auto& d = report.details;
  const Index jc = column(d, "j"), mc = column(d, "mean"), lc = column(d, "lambda"), sc = column(d, "stderr"),
              dc = column(d, "dispersion");
  bool saw_ten = false;
  for (Index row = 0; row < d.rows.rows(); ++row) {
    const double disp = d.rows(row, dc);
    CHECK(disp >= 0.8);
    CHECK(disp <= 1.2);
    if (d.rows(row, jc) != 10.0) continue;
    saw_ten = true;
    CHECK(d.rows(row, lc) == doctest::Approx(32.0 - std::exp2(4.5)));
    CHECK(d.rows(row, lc) == doctest::Approx(9.37).epsilon(1e-3));
    CHECK(std::abs(d.rows(row, mc) - d.rows(row, lc)) <= 3.0 * d.rows(row, sc));
  }
  CHECK(saw_ten);
  CHECK(report.check("mean_z_max").pass);
  CHECK(report.check("dispersion_dev_max").pass);
  CHECK(report.seeds.size() == 500);
  CHECK_FALSE(has_flag(report, "low power"));
  // the finite-scale almost-sure bound is part of the verdict
  CHECK(report.pass);
}

TEST_CASE("a single trial is flagged") {
  const auto report = verify_level_counts(make_params(0.5, 0.5, 1, 12), 1);
  CHECK(has_flag(report, "low power"));
  CHECK(report.check("mean_z_max").pass);
  CHECK_THROWS_AS((void)verify_level_counts(make_params(0.5, 0.5, 1, 12), 0), ParameterError);
}

TEST_CASE("overlap growth stays below j^2") {
  const auto report = verify_overlap_bound(make_params(0.5, 0.5, 1, 14), default_seeds(), 16);
  CHECK(report.check("spearman_rho").statistic <= 0.0);
  CHECK(report.check("spearman_rho").pass);
  CHECK(report.details.rows.rows() == 9);
  CHECK_THROWS_AS((void)verify_overlap_bound(make_params(0.5, 0.5, 1, 8), default_seeds(), 12), ParameterError);
}

TEST_CASE("coverage") {
  SUBCASE("coarse truncation fails and is flagged") {
    const auto report = verify_coverage(make_params(0.5, 0.5, 1, 4), default_seeds());
    CHECK(has_flag(report, "truncation too coarse"));
    CHECK_FALSE(report.pass);
  }
  SUBCASE("isolated coverage at jmax 16") {
    const auto report = verify_coverage(make_params(0.5, 0.5, 1, 16), default_seeds());
    CHECK(report.check("eq51_coverage_min").pass);
    CHECK(report.check("isolated_coverage_min").statistic >= 0.99);
    CHECK(report.check("isolated_count_min").statistic >= 1.0);
  }
}

TEST_CASE("uniform regularity") {
  SUBCASE("(0.5, 0.5)") {
    const auto r = verify_uniform_regularity(make_params(0.5, 0.5, 1, 16, 20), default_seeds());
    for (auto name : {"modulus_exponent_mean", "cwt_exponent_mean"}) {
      CHECK(r.check(name).statistic >= 0.15);
      CHECK(r.check(name).statistic <= 0.35);
    }
    CHECK_FALSE(has_flag(r, "smooth"));
  }
  SUBCASE("(0.9, 0.4)") {
    const auto r = verify_uniform_regularity(make_params(0.9, 0.4, 1, 16, 20), default_seeds());
    for (auto name : {"modulus_exponent_mean", "cwt_exponent_mean"}) {
      CHECK(r.check(name).statistic >= 0.26);
      CHECK(r.check(name).statistic <= 0.46);
    }
  }
  SUBCASE("a smooth signal is not applicable") {
    const auto sine = Signal::sample(16, [](double x) { return std::sin(6.0 * x); });
    const auto f = uniform_regularity_fits(sine, 0.5, ScaleWindow::defaults(16));
    CHECK(f.smooth);
    CHECK(f.modulus.exponent >= 0.9);
    CHECK(f.cwt.h_uniform >= 0.9);
  }
}

TEST_CASE("truncation window") {
  CHECK(truncation_window(make_params(0.5, 0.5, 1, 20, 22)).k_hi == 10);
  CHECK(truncation_window(make_params(0.9, 0.4, 1, 20, 22)).k_hi == 8);
  CHECK(truncation_window(make_params(0.5, 0.5, 1, 20, 22)).k_lo == 3);
  CHECK_THROWS_AS((void)truncation_window(make_params(0.5, 0.5, 1, 10)), ResolutionError);
}

TEST_CASE("spectrum assessment") {
  SUBCASE("constant field gives one bin and a vacuous interior") {
    const ModelParams p = make_params(0.9, 0.4, 1, 16);
    ExponentField field;
    const Index n = (Index{1} << 12) + 1;
    field.positions = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
    field.h_est = Eigen::VectorXd::Constant(n, 1.0);
    field.r_squared = Eigen::VectorXd::Ones(n);
    field.capped.assign(static_cast<std::size_t>(n), true);
    const auto est = spectrum_estimate(field, 0.9, 0.4, 0.045, 4, 10);
    Index occupied = 0;
    for (Index c : est.counts) occupied += c > 0 ? 1 : 0;
    CHECK(occupied == 1);
    const auto report = assess_spectrum(p, {1}, {est}, {1.0}, {3, 6});
    CHECK(has_flag(report, "vacuous"));
    CHECK(report.check("interior_dim_error_max").pass);
  }
  SUBCASE("theory line endpoints") {
    CHECK(theoretical_spectrum(0.9, 0.4, 0.36) == 0.4);
    CHECK(theoretical_spectrum(0.9, 0.4, 0.9) == 1.0);
  }
}

TEST_CASE("reports are reproducible and serialize") {
  const ModelParams p = make_params(0.5, 0.5, 3, 12);
  const auto a = verify_level_counts(p, 120);
  const auto b = verify_level_counts(p, 120);
  CHECK(a.statistic == b.statistic);
  CHECK(a.to_json().dump() == b.to_json().dump());
  const auto j = a.to_json();
  CHECK(j.at("name") == "level_counts");
  CHECK(j.at("pass").get<bool>() == a.pass);
  CHECK(j.at("checks").size() == a.checks.size());
  CHECK(j.at("details").at("rows").size() == static_cast<std::size_t>(a.details.rows.rows()));
  const std::string text = a.to_text();
  CHECK(text.find("level_counts") != std::string::npos);
  CHECK(text.find("mean_z_max") != std::string::npos);
  CHECK(a.statistic == a.checks.front().statistic);
  CHECK(a.pass == std::all_of(a.checks.begin(), a.checks.end(), [](const Check& c) { return c.pass; }));
}
