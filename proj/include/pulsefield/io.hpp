#pragma once

#include "pulsefield/common.hpp"
#include "pulsefield/field.hpp"
#include "pulsefield/geometry.hpp"
#include "pulsefield/params.hpp"
#include "pulsefield/point_process.hpp"
#include "pulsefield/regularity.hpp"
#include "pulsefield/wavelet.hpp"

#include <Eigen/Core>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace pulsefield {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

/// Numeric table; rows.cols() == header.size().
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd rows;
};

/// Shortest text with 17 significant digits; round-trips every double.
[[nodiscard]] std::string format_double(double value);

/// Header line plus one LF-terminated line per row.
[[nodiscard]] std::string to_csv(const CsvTable& table);
[[nodiscard]] CsvTable parse_csv(std::string_view text);

/// Writes to a temporary sibling and renames over path; throws IoError naming the path.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);
void write_csv(const CsvTable& table, const std::filesystem::path& path);
void write_json(const nlohmann::json& value, const std::filesystem::path& path);
[[nodiscard]] CsvTable read_csv(const std::filesystem::path& path);

[[nodiscard]] nlohmann::json to_json(const ModelParams& params);
[[nodiscard]] ModelParams params_from_json(const nlohmann::json& value);

/// n,c,b,x
[[nodiscard]] CsvTable realization_table(const Realization& real);
[[nodiscard]] nlohmann::json realization_metadata(const Realization& real);
/// x,F
[[nodiscard]] CsvTable signal_table(const Signal& signal);
[[nodiscard]] nlohmann::json signal_metadata(const Signal& signal);
/// j,ball_count,covered_fraction
[[nodiscard]] CsvTable coverage_table(const CoverageReport& report);
[[nodiscard]] nlohmann::json coverage_summary(const CoverageReport& report);
/// m,t,W
[[nodiscard]] CsvTable cwt_table(const CwtGrid& grid);
[[nodiscard]] nlohmann::json cwt_metadata(const CwtGrid& grid);
/// x,h,r2
[[nodiscard]] CsvTable exponent_field_table(const ExponentField& field);
/// H,dim_est,dim_theory,count
[[nodiscard]] CsvTable spectrum_table(const SpectrumEstimate& spectrum);

}  // namespace pulsefield
