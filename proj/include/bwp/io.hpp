#pragma once

#include "bwp/config.hpp"
#include "bwp/engine.hpp"
#include "bwp/trace.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

namespace bwp::io {

inline constexpr std::string_view kScenarioVersion = "bwp-scenario/1";
inline constexpr std::string_view kTraceFormat = "bwp-trace/1";
inline constexpr std::string_view kMetricsFormat = "bwp-metrics/1";
inline constexpr std::string_view kReportFormat = "bwp-validation/1";

/// Malformed or unreadable input document.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ScenarioDocument {
  std::string version;
  Scenario scenario;
  bool has_horizon = false;
};

ScenarioDocument parse_scenario(const nlohmann::json& doc);
ScenarioDocument load_scenario(const std::filesystem::path& path);

CellConfig parse_cell(const nlohmann::json& j);
UeCapability parse_capability(const nlohmann::json& j);

using Reports = std::map<std::string, ValidationReport>;

nlohmann::ordered_json report_to_json(const Reports& reports);
/// One line per finding, "cell: Severity CODE at location: message".
std::string report_to_text(const Reports& reports);

nlohmann::ordered_json record_to_json(const TraceRecord& rec);
TraceRecord record_from_json(const nlohmann::json& j);

/// Header line followed by one record per line.
void write_trace(std::ostream& os, const Trace& trace);
Trace read_trace(std::istream& is);

nlohmann::ordered_json metrics_to_json(const RunMetrics& metrics);

/// Integer when whole, otherwise the exact dyadic double.
nlohmann::ordered_json rational_to_json(const Rational& r);

}  // namespace bwp::io
