#include "helpers.hpp"

#include "pulsefield/field.hpp"
#include "pulsefield/pulse.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace pulsefield;
using testing::manual;
using testing::shared;
using testing::vec;

TEST_CASE("pulse profiles") {
  CHECK(pulse_eval(PulseKind::hat, 0.0) == 1.0);
  CHECK(pulse_eval(PulseKind::hat, 0.5) == 0.5);
  CHECK(pulse_eval(PulseKind::hat, -0.5) == 0.5);
  CHECK(pulse_eval(PulseKind::hat, 1.5) == 0.0);
  CHECK(pulse_eval(PulseKind::smooth_bump, 0.0) == 1.0);
  CHECK(pulse_eval(PulseKind::smooth_bump, 1.0) == 0.0);
  CHECK(pulse_eval(PulseKind::smooth_bump, -1.2) == 0.0);
  CHECK(pulse_eval(PulseKind::smooth_bump, 0.5) == doctest::Approx(std::exp(1.0 - 1.0 / 0.75)));
  CHECK_THROWS_AS((void)pulse_eval(PulseKind::hat, std::numeric_limits<double>::quiet_NaN()), DomainError);
}

TEST_CASE("pulse support and Lipschitz constants on a fine mesh") {
  for (PulseKind kind : {PulseKind::hat, PulseKind::smooth_bump}) {
    const Pulse p = Pulse::of(kind);
    const int n = 1'000'000;
    double prev = p(-1.5);
    double sup = 0.0;
    double steepest = 0.0;
    const double h = 3.0 / n;
    for (int i = 1; i <= n; ++i) {
      const double u = -1.5 + i * h;
      const double v = p(u);
      steepest = std::max(steepest, std::abs(v - prev) / h);
      sup = std::max(sup, std::abs(v));
      if (std::abs(u) >= 1.0) CHECK(v == 0.0);
      prev = v;
    }
    CHECK(steepest <= p.lipschitz_constant * (1.0 + 1e-9));
    CHECK(steepest >= 0.99 * p.lipschitz_constant);
    CHECK(sup == doctest::Approx(p.sup_norm));
  }
}

TEST_CASE("field of an empty realization vanishes") {
  const ModelParams p = make_params(0.5, 0.5, 1, 6);
  const Signal s = evaluate_field(shared(manual(p, Eigen::VectorXd(0), Eigen::VectorXd(0), Eigen::VectorXd(0))), 10);
  CHECK(s.size() == (1 << 10) + 1);
  CHECK(s.values.isZero(0.0));
}

TEST_CASE("single pulse on grid equals its amplitude at the centre") {
  const ModelParams p = make_params(0.5, 0.5, 1, 6);
  const double x0 = 0.375;  // on the 2^-10 grid
  const auto r = shared(manual(p, vec({testing::b_for_dilation(20.0, 0.5)}), vec({x0}), vec({0.7})));
  const Signal s = evaluate_field(r, 10);
  CHECK(s.values[384] == std::pow(0.7, -0.5));
  CHECK(evaluate_field_direct(*r, x0) == std::pow(0.7, -0.5));
}

TEST_CASE("direct summation: outside supports and disjoint pulses") {
  const ModelParams p = make_params(0.5, 0.5, 1, 6);
  const auto r = manual(p, vec({testing::b_for_dilation(10.0, 0.5), testing::b_for_dilation(40.0, 0.5)}),
                        vec({0.2, 0.8}), vec({0.5, 1.5}));
  CHECK(evaluate_field_direct(r, 0.5) == 0.0);
  const double x = 0.23;
  CHECK(evaluate_field_direct(r, x) == doctest::Approx(std::pow(0.5, -0.5) * (1.0 - r.dilation()[0] * 0.03)));
}

TEST_CASE("grid evaluation is bit-identical to direct summation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto r = shared(sample_realization(make_params(0.5, 0.5, seed, 12)));
    const Signal s = evaluate_field(r, 14);
    double worst = 0.0;
    for (Index i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s.values[i] - evaluate_field_direct(*r, s.position(i))));
    CHECK(worst == 0.0);
  }
}

TEST_CASE("smooth bump fields also match direct summation") {
  const auto r = shared(sample_realization(make_params(0.9, 0.4, 3, 10, 12, PulseKind::smooth_bump)));
  const Signal s = evaluate_field(r, 12);
  for (Index i = 0; i < s.size(); ++i) REQUIRE(s.values[i] == evaluate_field_direct(*r, s.position(i)));
}

TEST_CASE("direct summation at random on-grid points matches the grid") {
  const auto r = shared(sample_realization(make_params(0.5, 0.5, 5, 10)));
  const Signal s = evaluate_field(r, 12);
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<Index> pick(0, s.size() - 1);
  for (int k = 0; k < 64; ++k) {
    const Index i = pick(gen);
    CHECK(evaluate_field_direct(*r, s.position(i)) == s.values[i]);
  }
}

TEST_CASE("support exactness") {
  const auto r = sample_realization(make_params(0.5, 0.5, 9, 8));
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int k = 0; k < 2000; ++k) {
    const double x = unit(gen);
    const bool outside = ((r.x().array() - x).abs() * r.dilation().array() >= 1.0).all();
    if (outside) CHECK(evaluate_field_direct(r, x) == 0.0);
  }
}

TEST_CASE("level additivity") {
  const auto r = shared(sample_realization(make_params(0.5, 0.5, 4, 12)));
  const Signal all = evaluate_field(r, 14, {2, 12});
  const Signal lo = evaluate_field(r, 14, {2, 7});
  const Signal hi = evaluate_field(r, 14, {8, 12});
  CHECK((all.values - lo.values - hi.values).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("range and resolution errors") {
  const auto r = shared(sample_realization(make_params(0.5, 0.5, 4, 12)));
  CHECK_THROWS_AS((void)evaluate_field(r, 14, {0, 13}), WindowError);
  CHECK_THROWS_WITH_AS((void)evaluate_field(r, 13, {0, 12}), doctest::Contains("14"), ResolutionError);
  CHECK_NOTHROW((void)evaluate_field(r, 10, {0, 8}));
}

TEST_CASE("Lipschitz sanity on adjacent grid points") {
  const auto r = shared(sample_realization(make_params(0.5, 0.5, 2, 10)));
  const Signal s = evaluate_field(r, 12);
  const double bound = field_lipschitz_sum(*r) * Pulse::of(PulseKind::hat).lipschitz_constant * s.step();
  const Eigen::VectorXd diff = s.values.tail(s.size() - 1) - s.values.head(s.size() - 1);
  CHECK(diff.cwiseAbs().maxCoeff() <= bound * (1.0 + 1e-12));
}

TEST_CASE("tail estimate") {
  const ModelParams p = make_params(0.9, 0.4, 1, 16);
  // Independent 50-digit re-summation.
  CHECK(tail_estimate(p, 16) == doctest::Approx(464.8527826529476216883557).epsilon(1e-10));
  const ModelParams q = make_params(0.5, 0.5, 1, 10);
  CHECK(tail_estimate(q, 10) == doctest::Approx(1258.6867323807274050505).epsilon(1e-10));
  CHECK(tail_estimate(q, 2) == doctest::Approx(1529.420101031097039099652).epsilon(1e-10));
  double prev = tail_estimate(q, 2);
  for (int j = 3; j < 400; ++j) {
    const double t = tail_estimate(q, j);
    CHECK(t < prev);
    prev = t;
  }
  CHECK(prev < 1e-10);
  CHECK_THROWS_AS((void)tail_estimate(q, 1), DomainError);
}

TEST_CASE("signals carry metadata") {
  const auto r = shared(sample_realization(make_params(0.5, 0.5, 4, 10)));
  const Signal s = evaluate_field(r, 12);
  CHECK(s.j_range == LevelRange{0, 10});
  CHECK(s.tail_estimate == tail_estimate(r->params(), 10));
  CHECK(s.source == r);
  CHECK(s.values.allFinite());
  CHECK_THROWS_AS((void)Signal::from_values(4, Eigen::VectorXd::Zero(16)), ResolutionError);
}
