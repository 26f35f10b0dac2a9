#include "pulsefield/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace pulsefield {

namespace fs = std::filesystem;

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string to_csv(const CsvTable& table) {
  if (table.rows.rows() > 0 && table.rows.cols() != static_cast<Index>(table.header.size())) {
    throw DomainError("csv table: column count does not match header");
  }
  std::string out;
  out.reserve(static_cast<std::size_t>(table.rows.size()) * 24 + 64);
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  char buf[64];
  for (Index r = 0; r < table.rows.rows(); ++r) {
    for (Index c = 0; c < table.rows.cols(); ++c) {
      if (c) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof buf, table.rows(r, c), std::chars_format::general, 17);
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::vector<std::vector<double>> rows;
  bool first = true;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty()) continue;
    std::vector<std::string_view> cells;
    for (std::size_t start = 0;;) {
      const auto comma = line.find(',', start);
      cells.push_back(line.substr(start, comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (first) {
      for (auto cell : cells) table.header.emplace_back(cell);
      first = false;
      continue;
    }
    if (cells.size() != table.header.size()) throw DomainError("csv: ragged row");
    std::vector<double> row;
    for (auto cell : cells) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        throw DomainError("csv: cannot parse '" + std::string(cell) + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  table.rows.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      table.rows(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
    }
  }
  return table;
}

void write_text_atomic(const fs::path& path, std::string_view content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string() + " (temporary " + tmp.string() + ")");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw IoError("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw IoError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

void write_csv(const CsvTable& table, const fs::path& path) { write_text_atomic(path, to_csv(table)); }

void write_json(const nlohmann::json& value, const fs::path& path) {
  write_text_atomic(path, value.dump(2) + "\n");
}

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"alpha", p.alpha},   {"eta", p.eta},     {"pulse", std::string(to_string(p.pulse))},
          {"gamma", p.gamma},   {"p0", p.p0},       {"seed", p.seed},
          {"j_max", p.j_max},   {"grid_bits", p.grid_bits}};
}

ModelParams params_from_json(const nlohmann::json& v) {
  ModelParams p;
  p.alpha = v.at("alpha").get<double>();
  p.eta = v.at("eta").get<double>();
  p.pulse = parse_pulse_kind(v.at("pulse").get<std::string>());
  p.gamma = v.at("gamma").get<double>();
  p.p0 = v.at("p0").get<int>();
  p.seed = v.at("seed").get<std::uint64_t>();
  p.j_max = v.at("j_max").get<int>();
  p.grid_bits = v.at("grid_bits").get<int>();
  p.validate();
  return p;
}

CsvTable realization_table(const Realization& real) {
  CsvTable t{{"n", "c", "b", "x"}, Eigen::MatrixXd(real.size(), 4)};
  for (Index n = 0; n < real.size(); ++n) {
    t.rows.row(n) << static_cast<double>(n), real.c()[n], real.b()[n], real.x()[n];
  }
  return t;
}

nlohmann::json realization_metadata(const Realization& real) {
  nlohmann::json levels = nlohmann::json::array();
  for (int j = 0; j <= real.j_max(); ++j) levels.push_back(real.level(j).size());
  return {{"version", std::string(kArtifactVersion)}, {"params", to_json(real.params())}, {"pulses", real.size()},
          {"level_counts", levels}};
}

CsvTable signal_table(const Signal& signal) {
  CsvTable t{{"x", "F"}, Eigen::MatrixXd(signal.size(), 2)};
  for (Index i = 0; i < signal.size(); ++i) t.rows.row(i) << signal.position(i), signal.values[i];
  return t;
}

nlohmann::json signal_metadata(const Signal& signal) {
  nlohmann::json out = {{"version", std::string(kArtifactVersion)},
                        {"grid_bits", signal.grid_bits},
                        {"j_range", {signal.j_range.lo, signal.j_range.hi}},
                        {"tail_estimate", signal.tail_estimate}};
  if (signal.source) out["params"] = to_json(signal.source->params());
  return out;
}

CsvTable coverage_table(const CoverageReport& report) {
  CsvTable t{{"j", "ball_count", "covered_fraction"},
             Eigen::MatrixXd(static_cast<Index>(report.per_level.size()), 3)};
  for (std::size_t i = 0; i < report.per_level.size(); ++i) {
    const auto& l = report.per_level[i];
    t.rows.row(static_cast<Index>(i)) << l.j, static_cast<double>(l.ball_count), l.covered_fraction;
  }
  return t;
}

nlohmann::json coverage_summary(const CoverageReport& report) {
  return {{"version", std::string(kArtifactVersion)},
          {"variant", std::string(to_string(report.variant))},
          {"delta", report.delta},
          {"grid_bits", report.grid_bits},
          {"cumulative_fraction", report.cumulative_fraction}};
}

CsvTable cwt_table(const CwtGrid& grid) {
  Index rows = 0;
  for (const auto& s : grid.scales) rows += s.t.size();
  CsvTable t{{"m", "t", "W"}, Eigen::MatrixXd(rows, 3)};
  Index r = 0;
  for (const auto& s : grid.scales) {
    for (Index k = 0; k < s.t.size(); ++k) t.rows.row(r++) << s.m, s.t[k], s.w[k];
  }
  return t;
}

nlohmann::json cwt_metadata(const CwtGrid& grid) {
  return {{"version", std::string(kArtifactVersion)},
          {"wavelet", "c1_bump_diff"},
          {"method", std::string(to_string(grid.method))},
          {"quadrature_order", grid.quadrature_order}};
}

CsvTable exponent_field_table(const ExponentField& field) {
  CsvTable t{{"x", "h", "r2"}, Eigen::MatrixXd(field.size(), 3)};
  t.rows << field.positions, field.h_est, field.r_squared;
  return t;
}

CsvTable spectrum_table(const SpectrumEstimate& s) {
  const Index n = s.bin_centers.size();
  CsvTable t{{"H", "dim_est", "dim_theory", "count"}, Eigen::MatrixXd(n, 4)};
  for (Index i = 0; i < n; ++i) {
    t.rows.row(i) << s.bin_centers[i], s.dims[i], s.theory[i], static_cast<double>(s.counts[static_cast<std::size_t>(i)]);
  }
  return t;
}

}  // namespace pulsefield
