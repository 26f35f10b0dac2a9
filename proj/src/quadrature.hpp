#pragma once

#include <array>
#include <cmath>
#include <numbers>

namespace pulsefield::detail {

template <int N>
struct GaussLegendre {
  std::array<double, N> nodes{};
  std::array<double, N> weights{};

  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      double dp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= N; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = N * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      nodes[static_cast<std::size_t>(i)] = x;
      weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
  }

  /// int_a^b f using `panels` equal panels.
  template <typename Fn>
  double integrate(Fn&& f, double a, double b, int panels) const {
    const double width = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = a + (p + 0.5) * width;
      const double half = 0.5 * width;
      double sum = 0.0;
      for (int i = 0; i < N; ++i) {
        sum += weights[static_cast<std::size_t>(i)] * f(mid + half * nodes[static_cast<std::size_t>(i)]);
      }
      total += half * sum;
    }
    return total;
  }
};

inline const GaussLegendre<16>& gauss16() {
  static const GaussLegendre<16> rule;
  return rule;
}

}  // namespace pulsefield::detail
