#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/params.hpp"

#include <cmath>

namespace pulsefield {

/// Hat pulse max(0, 1 - |u|).
template <typename Scalar>
[[nodiscard]] inline Scalar hat_pulse(Scalar u) noexcept {
  using std::abs;
  const Scalar v = Scalar(1) - abs(u);
  return v > Scalar(0) ? v : Scalar(0);
}

/// Smooth bump exp(1 - 1/(1 - u^2)) on (-1, 1), zero outside; psi(0) = 1.
template <typename Scalar>
[[nodiscard]] inline Scalar smooth_bump_pulse(Scalar u) noexcept {
  using std::exp;
  const Scalar w = Scalar(1) - u * u;
  return w > Scalar(0) ? exp(Scalar(1) - Scalar(1) / w) : Scalar(0);
}

/// Pulse profile without the NaN check (hot path).
template <typename Scalar>
[[nodiscard]] inline Scalar pulse_value(PulseKind kind, Scalar u) noexcept {
  return kind == PulseKind::hat ? hat_pulse(u) : smooth_bump_pulse(u);
}

/// Pulse profile psi(u); throws DomainError on NaN.
[[nodiscard]] double pulse_eval(PulseKind kind, double u);

/// Lipschitz constant and sup-norm of a pulse profile.
struct Pulse {
  PulseKind kind = PulseKind::hat;
  double lipschitz_constant = 1.0;
  double sup_norm = 1.0;

  [[nodiscard]] static Pulse of(PulseKind kind) noexcept;
  [[nodiscard]] double operator()(double u) const { return pulse_eval(kind, u); }
};

}  // namespace pulsefield
