#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/field.hpp"
#include "pulsefield/io.hpp"
#include "pulsefield/params.hpp"
#include "pulsefield/regularity.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace pulsefield {

enum class Comparison {
  two_sided,  ///< |statistic - target| <= tolerance
  at_most,    ///< statistic <= target + tolerance
  at_least,   ///< statistic >= target - tolerance
};

[[nodiscard]] std::string_view to_string(Comparison comparison) noexcept;

struct Check {
  std::string name;
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::two_sided;
  bool pass = false;

  [[nodiscard]] static Check make(std::string name, double statistic, double target,
                                  double tolerance, Comparison comparison);
};

/**
 * Outcome of one experiment. statistic/target/tolerance mirror the first
 * check; pass holds when every check passes. details is a per-level or
 * per-seed table and flags carry caveats such as "low power".
 */
struct VerificationReport {
  std::string name;
  ModelParams params;
  std::vector<std::uint64_t> seeds;
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  Comparison comparison = Comparison::two_sided;
  bool pass = false;
  std::vector<Check> checks;
  CsvTable details;
  std::vector<std::string> flags;

  [[nodiscard]] const Check& check(std::string_view name) const;
  [[nodiscard]] nlohmann::json to_json() const;
  [[nodiscard]] std::string to_text() const;
};

[[nodiscard]] std::vector<std::uint64_t> default_seeds();

/// N_j over trials seeds params.seed, params.seed + 1, ... for j = 4..j_max.
[[nodiscard]] VerificationReport verify_level_counts(const ModelParams& params, int trials);

/// M_j = max_overlap_on_grid(j, r = 0) for j = 6..j_max, seed-averaged M_j / j^2.
[[nodiscard]] VerificationReport verify_overlap_bound(const ModelParams& params,
                                                      const std::vector<std::uint64_t>& seeds,
                                                      int grid_bits);

/// Isolated-ball (delta = 1) and covering_eq51 unions over levels 2..j_max.
[[nodiscard]] VerificationReport verify_coverage(const ModelParams& params,
                                                 const std::vector<std::uint64_t>& seeds);

struct UniformFits {
  PowerFit modulus;
  UniformFit cwt;
  PowerFit modulus_log;
  UniformFit cwt_log;
  /// Some fit reached 0.9: the signal looks Lipschitz on the window.
  bool smooth = false;
};

inline constexpr std::string_view kSmoothFlag = "smooth signal: exponent fits not applicable";

/// Modulus and wavelet fits over window, raw and with |log2 s|^{2 + alpha} divided out.
[[nodiscard]] UniformFits uniform_regularity_fits(const Signal& signal, double alpha, ScaleWindow window);

/// Seed-averaged raw uniform exponents against alpha eta.
[[nodiscard]] VerificationReport verify_uniform_regularity(const ModelParams& params,
                                                           const std::vector<std::uint64_t>& seeds);

/**
 * Scales resolved by a truncated field: 2^-3 down to 2^-floor(eta j_max),
 * and no finer than 2^-(grid_bits - 4). Below 2^{-eta j_max} the pulses
 * that set the typical exponent are missing.
 */
[[nodiscard]] ScaleWindow truncation_window(const ModelParams& params);

struct SpectrumOptions {
  int stride_bits = 12;
  int points = 200;
  std::optional<ScaleWindow> window;  // truncation_window when unset
};

/// Median exponent at uniform points, box-counted spectrum and its monotonicity.
[[nodiscard]] VerificationReport verify_spectrum(const ModelParams& params,
                                                 const std::vector<std::uint64_t>& seeds,
                                                 const SpectrumOptions& options = {});

/// Median of pointwise_exponent at points uniform on the grid, drawn from the "points" stream.
/// Spectrum checks on precomputed per-seed estimates and median exponents.
[[nodiscard]] VerificationReport assess_spectrum(const ModelParams& params, const std::vector<std::uint64_t>& seeds,
                                                 const std::vector<SpectrumEstimate>& spectra,
                                                 const std::vector<double>& medians, ScaleWindow window);

[[nodiscard]] double median_exponent_at_random_points(const Signal& signal, std::uint64_t seed,
                                                      int points, ScaleWindow window);

}  // namespace pulsefield
