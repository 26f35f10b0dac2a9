#pragma once

#include "pulsefield/common.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pulsefield {

enum class PulseKind { hat, smooth_bump };

[[nodiscard]] std::string_view to_string(PulseKind kind) noexcept;
/// Parses "hat" or "smooth_bump"; throws ParameterError otherwise.
[[nodiscard]] PulseKind parse_pulse_kind(std::string_view text);

/**
 * Model constants of the pulse sum
 *
 *   F(x) = sum_n C_n^{-alpha} psi(B_n^{1/eta} (x - X_n)).
 *
 * alpha is the regularity and eta the lacunarity; p0 and gamma size the
 * level window used for pulse isolation. Levels 0..j_max are materialized
 * and fields are sampled at resolution 2^-grid_bits.
 */
struct ModelParams {
  double alpha = 0.5;
  double eta = 0.5;
  PulseKind pulse = PulseKind::hat;
  double gamma = 1.0;
  int p0 = 7;
  std::uint64_t seed = 1;
  int j_max = 10;
  int grid_bits = 12;

  /// Throws ParameterError naming the first violated constraint.
  void validate() const;

  /// alpha * eta, the uniform regularity exponent.
  [[nodiscard]] double alpha_eta() const noexcept { return alpha * eta; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct IsolationConstants {
  int p0;
  double gamma;
};

/// Smallest integer p0 strictly above (3 + 3 alpha) / (1 - alpha eta), with gamma = 1.
[[nodiscard]] IsolationConstants default_p0_gamma(double alpha, double eta);

/// Builds validated parameters; p0 and gamma default to default_p0_gamma.
[[nodiscard]] ModelParams make_params(double alpha, double eta, std::uint64_t seed, int j_max,
                                      std::optional<int> grid_bits = std::nullopt,
                                      PulseKind pulse = PulseKind::hat,
                                      std::optional<int> p0 = std::nullopt,
                                      std::optional<double> gamma = std::nullopt);

}  // namespace pulsefield
