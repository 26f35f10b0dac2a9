#include "helpers.hpp"

#include "pulsefield/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pulsefield;
using testing::manual;
using testing::vec;

TEST_CASE("counter streams are deterministic and independent") {
  auto a = CounterRng::stream(7, "B", 3);
  auto b = CounterRng::stream(7, "B", 3);
  auto c = CounterRng::stream(7, "X", 3);
  auto d = CounterRng::stream(7, "B", 4);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
  }
  auto u = CounterRng::stream(1, "U", 0);
  for (int i = 0; i < 10000; ++i) {
    const double v = u.uniform();
    CHECK((v >= 0.0 && v < 1.0));
    const double w = u.uniform_open0();
    CHECK((w > 0.0 && w <= 1.0));
  }
}

TEST_CASE("poisson counts have the requested mean") {
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto rng = CounterRng::stream(static_cast<std::uint64_t>(i), "P", 0);
    sum += static_cast<double>(poisson_by_gaps(rng, 3.5));
  }
  CHECK(sum / n == doctest::Approx(3.5).epsilon(0.02));
}

TEST_CASE("parameter validation names the violated constraint") {
  ModelParams p;
  p.alpha = 1.5;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("alpha must lie in (0,1)"), ParameterError);
  p = ModelParams{};
  p.eta = 0.0;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("eta"), ParameterError);
  p = ModelParams{};
  p.gamma = 2.5;  // above 1/eta = 2
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("gamma"), ParameterError);
  p = ModelParams{};
  p.p0 = 6;  // (3 + 1.5) / 0.75 = 6 exactly, must be strict
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("p0"), ParameterError);
  p = ModelParams{};
  p.grid_bits = p.j_max + 1;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("grid-bits"), ParameterError);
  CHECK_NOTHROW(ModelParams{}.validate());
}

TEST_CASE("default isolation constants") {
  CHECK(default_p0_gamma(0.9, 0.4).p0 == 9);
  CHECK(default_p0_gamma(0.9, 0.4).gamma == 1.0);
  CHECK(default_p0_gamma(0.5, 0.5).p0 == 7);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> unit(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 1000; ++i) {
    const double a = unit(gen), e = unit(gen);
    CHECK(default_p0_gamma(a, e).p0 > (3.0 + 3.0 * a) / (1.0 - a * e));
  }
}

TEST_CASE("level statistics and epsilons") {
  CHECK(eps_level(8, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(eps_tilde_level(8, 0.5) == doctest::Approx(std::log2(384.0) / 4.0).epsilon(1e-15));
  CHECK(eps_tilde_level(8, 0.5) == doctest::Approx(2.1462).epsilon(1e-4));
  CHECK(level_poisson_parameter(3, 0.5) == doctest::Approx(0.82843).epsilon(1e-5));
  CHECK(level_poisson_parameter(0, 0.5) == 1.0);
  CHECK(std::isinf(eps_level(0, 0.5)));
  CHECK(std::isinf(eps_level(1, 0.5)));
  CHECK(std::isinf(eps_tilde_level(1, 0.5)));
  // eventually decreasing to 0
  for (int j = 10; j < 200; ++j) {
    CHECK(eps_level(j + 1, 0.5) < eps_level(j, 0.5));
    CHECK(eps_tilde_level(j + 1, 0.5) < eps_tilde_level(j, 0.5));
  }
  CHECK(eps_level(100000, 0.5) < 1e-3);
}

TEST_CASE("level slices follow the dyadic dilation windows") {
  const ModelParams p = make_params(0.5, 0.5, 1, 10);
  const Realization r = manual(p, vec({1.2, 2.9, 7.3}), vec({0.1, 0.5, 0.9}));
  CHECK(level_slice(r, 1) == IndexRange{0, 1});
  CHECK(level_slice(r, 4) == IndexRange{1, 2});
  CHECK(level_slice(r, 6) == IndexRange{2, 3});
  for (int j : {0, 2, 3, 5, 7, 8, 9, 10}) CHECK(level_slice(r, j).empty());
  CHECK_THROWS_AS((void)level_slice(r, 11), WindowError);
  CHECK(level_stats(r, 4).n_j == 1);

  const Realization empty = manual(p, Eigen::VectorXd(0), Eigen::VectorXd(0), Eigen::VectorXd(0));
  for (int j = 0; j <= 10; ++j) CHECK(level_slice(empty, j).empty());
}

TEST_CASE("arrays are validated") {
  const ModelParams p = make_params(0.5, 0.5, 1, 4);
  CHECK_THROWS_AS((void)manual(p, vec({2.0, 1.0}), vec({0.1, 0.2})), ParameterError);
  CHECK_THROWS_AS((void)manual(p, vec({1.0, 2.0}), vec({0.1, 1.2})), ParameterError);
  CHECK_THROWS_AS((void)manual(p, vec({1.0, 5.0}), vec({0.1, 0.2})), WindowError);  // 25 > 2^4
}

TEST_CASE("sampled realizations satisfy the type invariants") {
  const ModelParams p = make_params(0.5, 0.5, 42, 10);
  const Realization r = sample_realization(p);
  REQUIRE(r.size() > 0);
  for (Index n = 1; n < r.size(); ++n) {
    CHECK(r.b()[n] > r.b()[n - 1]);
    CHECK(r.c()[n] > r.c()[n - 1]);
  }
  CHECK((r.x().array() >= 0.0).all());
  CHECK((r.x().array() <= 1.0).all());
  CHECK((r.dilation().array() <= std::ldexp(1.0, p.j_max)).all());

  Index total = 0;
  Index cursor = 0;
  for (int j = 0; j <= p.j_max; ++j) {
    const IndexRange s = r.level(j);
    CHECK(s.begin == cursor);
    cursor = s.end;
    total += s.size();
    for (Index n = s.begin; n < s.end; ++n) {
      const double d = r.dilation()[n];
      if (j == 0) {
        CHECK(d <= 1.0);
      } else {
        CHECK(d > std::ldexp(1.0, j - 1));
        CHECK(d <= std::ldexp(1.0, j));
      }
    }
  }
  CHECK(total == r.size());
}

TEST_CASE("sampling is bit-reproducible and extends without perturbing lower levels") {
  const Realization a = sample_realization(make_params(0.5, 0.5, 42, 10));
  const Realization b = sample_realization(make_params(0.5, 0.5, 42, 10));
  CHECK(a.b() == b.b());
  CHECK(a.c() == b.c());
  CHECK(a.x() == b.x());

  const Realization wide = sample_realization(make_params(0.5, 0.5, 42, 14));
  const Index n = a.size();
  REQUIRE(wide.size() >= n);
  CHECK(wide.b().head(n) == a.b());
  CHECK(wide.x().head(n) == a.x());
  CHECK(wide.c().head(n) == a.c());
}

TEST_CASE("total count is Poisson with mean 2^(eta jmax)") {
  const int seeds = 500;
  const ModelParams base = make_params(0.5, 0.5, 1, 10);
  Eigen::VectorXd totals(seeds);
  for (int s = 0; s < seeds; ++s) {
    ModelParams p = base;
    p.seed = static_cast<std::uint64_t>(s + 1);
    totals[s] = static_cast<double>(sample_realization(p).size());
  }
  const double lambda = std::exp2(0.5 * 10);
  const double mean = totals.mean();
  CHECK(std::abs(mean - lambda) <= 3.0 * std::sqrt(lambda / seeds));
}
