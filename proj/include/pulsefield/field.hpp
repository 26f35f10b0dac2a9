#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/point_process.hpp"
#include "pulsefield/pulse.hpp"

#include <Eigen/Core>

#include <memory>

namespace pulsefield {

/**
 * A field sampled at x_i = i 2^-grid_bits, i = 0..2^grid_bits. Signals
 * produced by evaluate_field keep a reference to their realization;
 * synthetic signals (test functions) have none.
 */
struct Signal {
  int grid_bits = 0;
  Eigen::VectorXd values;
  LevelRange j_range{};
  /// Heuristic bound on the discarded tail; metadata only, never added to values.
  double tail_estimate = 0.0;
  std::shared_ptr<const Realization> source;

  [[nodiscard]] Index size() const noexcept { return values.size(); }
  [[nodiscard]] double step() const noexcept { return std::ldexp(1.0, -grid_bits); }
  [[nodiscard]] double position(Index i) const noexcept {
    return std::ldexp(static_cast<double>(i), -grid_bits);
  }

  /// Samples f on the grid.
  template <typename Fn>
  [[nodiscard]] static Signal sample(int grid_bits, Fn&& f) {
    Signal out;
    out.grid_bits = grid_bits;
    const Index n = (Index{1} << grid_bits) + 1;
    out.values.resize(n);
    for (Index i = 0; i < n; ++i) out.values[i] = f(std::ldexp(static_cast<double>(i), -grid_bits));
    return out;
  }

  /// Wraps explicit values; values.size() must be 2^grid_bits + 1.
  [[nodiscard]] static Signal from_values(int grid_bits, Eigen::VectorXd values);
};

/**
 * F restricted to the levels in j_range, on the 2^grid_bits grid. Each
 * grid point accumulates c_n^-alpha psi(b_n^{1/eta}(x_i - x_n)) over the
 * pulses whose support contains it, in ascending n, so the result is
 * bit-identical to evaluate_field_direct and independent of threading.
 */
[[nodiscard]] Signal evaluate_field(std::shared_ptr<const Realization> real, int grid_bits,
                                    LevelRange j_range);
/// All materialized levels.
[[nodiscard]] Signal evaluate_field(std::shared_ptr<const Realization> real, int grid_bits);

/// Plain ascending loop over every pulse; the reference path.
[[nodiscard]] double evaluate_field_direct(const Realization& real, double x);

/// sup|psi| * sum_{j > j_trunc} j^2 2^{-alpha eta j (1 - eps_j)}, requires j_trunc >= 2.
[[nodiscard]] double tail_estimate(const ModelParams& params, int j_trunc);

/// sum_n c_n^-alpha b_n^{1/eta}: Lipschitz constant of the truncated field over Lip(psi).
[[nodiscard]] double field_lipschitz_sum(const Realization& real);

}  // namespace pulsefield
