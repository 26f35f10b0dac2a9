#pragma once

#include "pulsefield/experiments.hpp"
#include "pulsefield/geometry.hpp"
#include "pulsefield/params.hpp"
#include "pulsefield/regularity.hpp"
#include "pulsefield/wavelet.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pulsefield::cli {

enum class Command { simulate, field, cwt, holder, spectrum, coverage, verify, theory };
enum class OutputFormat { csv, json };

enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kUsage = 2, kIo = 3 };

/// Bad command line; code is kUsage, or kOk for --help.
class UsageError : public std::runtime_error {
 public:
  UsageError(const std::string& message, int code) : std::runtime_error(message), code_(code) {}
  [[nodiscard]] int code() const noexcept { return code_; }

 private:
  int code_;
};

struct RunConfig {
  Command command = Command::theory;
  ModelParams params;
  bool jmax_given = false;
  bool grid_bits_given = false;
  std::optional<std::string> out;
  OutputFormat format = OutputFormat::csv;

  // field, cwt --method pulse
  std::optional<int> j_lo, j_hi;
  // cwt
  int m_lo = 1;
  std::optional<int> m_hi;
  CwtMethod cwt_method = CwtMethod::signal_quadrature;
  // holder, spectrum
  int stride_bits = 12;
  std::optional<int> k_lo, k_hi;
  EstimatorMethod estimator = EstimatorMethod::oscillation;
  std::optional<double> x0;
  std::optional<double> bin_width;
  std::optional<int> box_k_lo, box_k_hi;
  // coverage
  CoverageVariant variant = CoverageVariant::g_delta;
  double delta = 1.0;
  int cover_j_lo = 2;
  std::optional<int> cover_j_hi;
  // verify
  std::string suite = "all";
  int trials = 500;
  std::vector<std::uint64_t> seeds;
  // theory
  double H = 0.0;
};

/// Parses argv (argv[0] is the program name). Throws UsageError.
[[nodiscard]] RunConfig parse_config(const std::vector<std::string>& argv);

/// Runs one command; returns an ExitCode. Errors are reported on err.
[[nodiscard]] int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_config + run_command with the exit-code contract.
[[nodiscard]] int main_entry(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace pulsefield::cli
