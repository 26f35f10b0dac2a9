#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/field.hpp"
#include "pulsefield/point_process.hpp"
#include "pulsefield/regression.hpp"

#include <Eigen/Core>

#include <optional>
#include <string_view>
#include <vector>

namespace pulsefield {

/// phi(u) = (1 - u^2)^3 - (6/7)(1 - u^2)^2 on [-1, 1], zero outside.
template <typename Scalar>
[[nodiscard]] inline Scalar analyzing_wavelet(Scalar u) noexcept {
  const Scalar v = Scalar(1) - u * u;
  if (!(v > Scalar(0))) return Scalar(0);
  return v * v * (v - Scalar(6) / Scalar(7));
}

[[nodiscard]] double analyzing_wavelet_eval(double u);

/**
 * The analyzing wavelet: C^1, supported on [-1, 1], zero mean. Its
 * overlap with the pulse profile must not vanish for the matched-scale
 * coefficient to detect isolated pulses; check() verifies both facts.
 */
struct AnalyzingWavelet {
  enum class Kind { c1_bump_diff };
  Kind kind = Kind::c1_bump_diff;

  [[nodiscard]] double operator()(double u) const noexcept { return analyzing_wavelet(u); }
  /// int_{-1}^{1} phi(u) psi(u) du for a pulse profile.
  [[nodiscard]] static double pulse_overlap(PulseKind pulse);
  /// Throws DomainError if int phi != 0 or int phi psi == 0 numerically.
  static void check(PulseKind pulse);
};

enum class CwtMethod { signal_quadrature, pulse_sum };
[[nodiscard]] std::string_view to_string(CwtMethod method) noexcept;

/// Coefficients at one scale s = 2^-m on the lattice t = k s / 4 with [t - s, t + s] in [0, 1].
struct CwtScale {
  int m = 0;
  double s = 1.0;
  Eigen::VectorXd t;
  Eigen::VectorXd w;
};

struct CwtGrid {
  std::vector<CwtScale> scales;  // m ascending, so s strictly decreasing
  CwtMethod method = CwtMethod::signal_quadrature;
  /// Grid samples per unit of u (signal path) or Gauss nodes per panel (pulse path).
  int quadrature_order = 0;
};

/// Lattice positions of scale 2^-m.
[[nodiscard]] Eigen::VectorXd cwt_positions(int m);

/**
 * d_n(s, t) = s^{-1/2} int psi_n(x) phi((x - t)/s) dx by composite
 * Gauss-Legendre over the support intersection, split at the pulse centre;
 * exactly 0 for disjoint supports.
 */
[[nodiscard]] double pulse_coefficient(const Realization& real, Index n, double s, double t);

/// sum_n c_n^-alpha d_n(s, t) over pulses in j_range meeting [t - s, t + s], ascending n.
[[nodiscard]] double cwt_pulse_sum(const Realization& real, double s, double t, LevelRange j_range);

/**
 * W(s, t) for s = 2^-m, m = m_lo..m_hi, by trapezoid quadrature on the
 * signal grid. The sampled wavelet is projected onto exact discrete zero
 * mean with a smooth (1 - u^2)^2 correction, so constants map to 0 up to
 * rounding. Requires m_hi <= grid_bits - 4.
 */
[[nodiscard]] CwtGrid cwt_signal_grid(const Signal& signal, const AnalyzingWavelet& wavelet,
                                      int m_lo, int m_hi);

/// Same lattice as cwt_signal_grid, each coefficient from cwt_pulse_sum.
[[nodiscard]] CwtGrid cwt_pulse_grid(const Realization& real, int m_lo, int m_hi,
                                     LevelRange j_range);

/// Per scale, sup over the lattice of |W(s, .)|.
[[nodiscard]] std::vector<ScaleValue> lattice_sup(const CwtGrid& grid);

struct UniformFit {
  double h_uniform = 0.0;
  PowerFit fit;
};

/**
 * Slope of log2 sup_t |W(s, t)| against log2 s, minus 1/2. With log_power
 * set, |log2 s|^log_power is divided out first (2 + alpha in simulations).
 * Needs at least 5 scales.
 */
[[nodiscard]] UniformFit uniform_decay_fit(const CwtGrid& grid,
                                           std::optional<double> log_power = std::nullopt);

}  // namespace pulsefield
