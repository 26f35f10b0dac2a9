#include "pulsefield/params.hpp"

#include <cmath>
#include <sstream>

namespace pulsefield {

std::string_view to_string(PulseKind kind) noexcept {
  return kind == PulseKind::hat ? "hat" : "smooth_bump";
}

PulseKind parse_pulse_kind(std::string_view text) {
  if (text == "hat") return PulseKind::hat;
  if (text == "smooth_bump") return PulseKind::smooth_bump;
  throw ParameterError("pulse must be 'hat' or 'smooth_bump', got '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void reject(const std::string& constraint, double value) {
  std::ostringstream out;
  out.precision(17);
  out << constraint << " (got " << value << ")";
  throw ParameterError(out.str());
}

}  // namespace

void ModelParams::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) reject("alpha must lie in (0,1)", alpha);
  if (!(eta > 0.0 && eta < 1.0)) reject("eta must lie in (0,1)", eta);
  if (!(gamma >= 1.0 && gamma <= 1.0 / eta)) reject("gamma must lie in [1, 1/eta]", gamma);
  const double p0_floor = (3.0 + 3.0 * alpha) / (1.0 - alpha * eta);
  if (p0 <= 0 || !(static_cast<double>(p0) > p0_floor)) {
    std::ostringstream out;
    out.precision(17);
    out << "p0 must exceed (3+3*alpha)/(1-alpha*eta) = " << p0_floor;
    reject(out.str(), p0);
  }
  if (j_max < 1 || j_max > 60) reject("jmax must lie in [1, 60]", j_max);
  if (grid_bits < j_max + 2) reject("grid-bits must be at least jmax + 2", grid_bits);
  if (grid_bits > 28) reject("grid-bits must be at most 28", grid_bits);
}

IsolationConstants default_p0_gamma(double alpha, double eta) {
  const double bound = (3.0 + 3.0 * alpha) / (1.0 - alpha * eta);
  return {static_cast<int>(std::floor(bound)) + 1, 1.0};
}

ModelParams make_params(double alpha, double eta, std::uint64_t seed, int j_max,
                        std::optional<int> grid_bits, PulseKind pulse, std::optional<int> p0,
                        std::optional<double> gamma) {
  ModelParams params;
  params.alpha = alpha;
  params.eta = eta;
  params.seed = seed;
  params.j_max = j_max;
  params.grid_bits = grid_bits.value_or(j_max + 2);
  params.pulse = pulse;
  if (alpha > 0.0 && alpha < 1.0 && eta > 0.0 && eta < 1.0) {
    const auto defaults = default_p0_gamma(alpha, eta);
    params.p0 = p0.value_or(defaults.p0);
    params.gamma = gamma.value_or(defaults.gamma);
  } else {
    params.p0 = p0.value_or(1);
    params.gamma = gamma.value_or(1.0);
  }
  params.validate();
  return params;
}

}  // namespace pulsefield
