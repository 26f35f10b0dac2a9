#include "pulsefield/pulse.hpp"

namespace pulsefield {

double pulse_eval(PulseKind kind, double u) {
  if (std::isnan(u)) throw DomainError("pulse_eval: NaN argument");
  return pulse_value(kind, u);
}

Pulse Pulse::of(PulseKind kind) noexcept {
  // max |psi'| of the bump is attained at |u| ~ 0.7598.
  if (kind == PulseKind::smooth_bump) return {kind, 2.1703570857103387, 1.0};
  return {kind, 1.0, 1.0};
}

}  // namespace pulsefield
