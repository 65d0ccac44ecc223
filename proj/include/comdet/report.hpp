#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "comdet/io.hpp"
#include "comdet/louvain.hpp"

namespace comdet {

inline constexpr const char* kReportCsvHeader = "pass,iterations,q,local_ms,agg_ms,vertices";
inline constexpr const char* kSweepCsvHeader =
    "tolerance,decline,threads,final_q,passes,total_iterations,wall_time_ms";

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::vector<std::vector<std::string>> read_csv(std::istream& in,
                                                      const std::string& header) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != header)
    throw ParseError(ParseErrorKind::malformed_header, 1, "expected '" + header + "'");
  const std::size_t columns = split_csv(header).size();
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells.size() != columns)
      throw ParseError(ParseErrorKind::malformed_entry, lineno, "wrong column count");
    rows.push_back(std::move(cells));
  }
  return rows;
}

template <typename T>
T csv_field(const std::string& cell, std::size_t lineno) {
  T v{};
  if (!parse_number(std::string_view(cell), v))
    throw ParseError(ParseErrorKind::malformed_entry, lineno, "bad value '" + cell + "'");
  return v;
}

}  // namespace detail

// Per-pass rows; doubles are written in shortest round-trip form.
inline void write_report_csv(std::ostream& out, const Report& r) {
  out << kReportCsvHeader << '\n';
  for (const PassRecord& p : r.passes)
    out << p.pass << ',' << p.iterations << ',' << detail::format_double(p.q) << ','
        << detail::format_double(p.local_ms) << ',' << detail::format_double(p.agg_ms)
        << ',' << p.vertices << '\n';
}

inline std::vector<PassRecord> parse_report_csv(std::istream& in) {
  std::vector<PassRecord> out;
  std::size_t lineno = 1;
  for (const auto& row : detail::read_csv(in, kReportCsvHeader)) {
    ++lineno;
    PassRecord p;
    p.pass = detail::csv_field<std::size_t>(row[0], lineno);
    p.iterations = detail::csv_field<std::size_t>(row[1], lineno);
    p.q = detail::csv_field<double>(row[2], lineno);
    p.local_ms = detail::csv_field<double>(row[3], lineno);
    p.agg_ms = detail::csv_field<double>(row[4], lineno);
    p.vertices = detail::csv_field<std::size_t>(row[5], lineno);
    out.push_back(std::move(p));
  }
  return out;
}

inline nlohmann::json to_json(const PassRecord& p) {
  return {{"pass", p.pass},
          {"iterations", p.iterations},
          {"q", p.q},
          {"local_ms", p.local_ms},
          {"agg_ms", p.agg_ms},
          {"vertices", p.vertices},
          {"moves", p.moves},
          {"iteration_cap_hit", p.iteration_cap_hit},
          {"conflicts", p.conflicts},
          {"max_sigma_drift", p.max_sigma_drift}};
}

inline nlohmann::json to_json(const Report& r) {
  nlohmann::json passes = nlohmann::json::array();
  for (const PassRecord& p : r.passes) passes.push_back(to_json(p));
  return {{"passes", passes},
          {"total_passes", r.total_passes},
          {"total_iterations", r.total_iterations},
          {"final_q", r.final_q},
          {"wall_ms", r.wall_ms},
          {"threads", r.threads},
          {"pass_cap_hit", r.pass_cap_hit}};
}

inline Report report_from_json(const nlohmann::json& j) {
  Report r;
  for (const auto& jp : j.at("passes")) {
    PassRecord p;
    jp.at("pass").get_to(p.pass);
    jp.at("iterations").get_to(p.iterations);
    jp.at("q").get_to(p.q);
    jp.at("local_ms").get_to(p.local_ms);
    jp.at("agg_ms").get_to(p.agg_ms);
    jp.at("vertices").get_to(p.vertices);
    jp.at("moves").get_to(p.moves);
    jp.at("iteration_cap_hit").get_to(p.iteration_cap_hit);
    jp.at("conflicts").get_to(p.conflicts);
    jp.at("max_sigma_drift").get_to(p.max_sigma_drift);
    r.passes.push_back(std::move(p));
  }
  j.at("total_passes").get_to(r.total_passes);
  j.at("total_iterations").get_to(r.total_iterations);
  j.at("final_q").get_to(r.final_q);
  j.at("wall_ms").get_to(r.wall_ms);
  j.at("threads").get_to(r.threads);
  j.at("pass_cap_hit").get_to(r.pass_cap_hit);
  return r;
}

inline void write_report_json(std::ostream& out, const Report& r) {
  out << to_json(r).dump(2) << '\n';
}

inline Report parse_report_json(std::istream& in) {
  try {
    return report_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseErrorKind::malformed_entry, 0, e.what());
  }
}

// Flat sweep summary; one row per grid cell.
struct SweepSummary {
  double tolerance = 0.0;
  double decline = 0.0;
  std::size_t threads = 1;
  double final_q = 0.0;
  std::size_t passes = 0;
  std::size_t total_iterations = 0;
  double wall_time_ms = 0.0;

  friend bool operator==(const SweepSummary&, const SweepSummary&) = default;
};

inline SweepSummary summarize(const SweepRow& row) {
  return {row.tolerance,          row.decline,
          row.threads,            row.report.final_q,
          row.report.total_passes, row.report.total_iterations,
          row.report.wall_ms};
}

inline void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    const SweepSummary s = summarize(row);
    out << detail::format_double(s.tolerance) << ',' << detail::format_double(s.decline)
        << ',' << s.threads << ',' << detail::format_double(s.final_q) << ','
        << s.passes << ',' << s.total_iterations << ','
        << detail::format_double(s.wall_time_ms) << '\n';
  }
}

inline std::vector<SweepSummary> parse_sweep_csv(std::istream& in) {
  std::vector<SweepSummary> out;
  std::size_t lineno = 1;
  for (const auto& row : detail::read_csv(in, kSweepCsvHeader)) {
    ++lineno;
    SweepSummary s;
    s.tolerance = detail::csv_field<double>(row[0], lineno);
    s.decline = detail::csv_field<double>(row[1], lineno);
    s.threads = detail::csv_field<std::size_t>(row[2], lineno);
    s.final_q = detail::csv_field<double>(row[3], lineno);
    s.passes = detail::csv_field<std::size_t>(row[4], lineno);
    s.total_iterations = detail::csv_field<std::size_t>(row[5], lineno);
    s.wall_time_ms = detail::csv_field<double>(row[6], lineno);
    out.push_back(s);
  }
  return out;
}

inline void write_sweep_json(std::ostream& out, const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& row : rows) {
    const SweepSummary s = summarize(row);
    arr.push_back({{"tolerance", s.tolerance},
                   {"decline", s.decline},
                   {"threads", s.threads},
                   {"final_q", s.final_q},
                   {"passes", s.passes},
                   {"total_iterations", s.total_iterations},
                   {"wall_time_ms", s.wall_time_ms}});
  }
  out << arr.dump(2) << '\n';
}

}  // namespace comdet
