// bwpsim: validate BWP configurations, run switching scenarios, and look up
// switch delays.
//
// Exit status: 0 success, 1 domain error, 2 parse or I/O error.

#include "bwp/engine.hpp"
#include "bwp/io.hpp"
#include "bwp/switch_delay.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitParse = 2;

int cmd_validate(const std::string& path)
{
  bwp::io::ScenarioDocument doc;
  try {
    doc = bwp::io::load_scenario(path);
  } catch (const bwp::io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }

  bwp::io::Reports reports;
  bool ok = true;
  for (const auto& cell : doc.scenario.cells) {
    auto report = bwp::validate(cell, doc.scenario.capability);
    ok = ok && !report.has_errors();
    reports.emplace(cell.id, std::move(report));
  }
  std::cerr << bwp::io::report_to_text(reports);
  std::cout << bwp::io::report_to_json(reports).dump(2) << '\n';
  return ok ? kExitOk : kExitDomain;
}

int cmd_run(const std::string& path, const std::string& trace_path, const std::string& metrics_path)
{
  bwp::io::ScenarioDocument doc;
  try {
    doc = bwp::io::load_scenario(path);
  } catch (const bwp::io::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  if (!doc.has_horizon) {
    std::cerr << "error: " << path << ": scenario has no horizon_ms\n";
    return kExitParse;
  }

  bwp::RunResult result;
  try {
    result = bwp::run(doc.scenario);
  } catch (const bwp::ScenarioError& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    if (!e.reports().empty()) {
      std::cerr << bwp::io::report_to_text(e.reports());
    }
    return kExitDomain;
  }

  if (trace_path.empty()) {
    bwp::io::write_trace(std::cout, result.trace);
  } else {
    std::ofstream out(trace_path);
    bwp::io::write_trace(out, result.trace);
    if (!out) {
      std::cerr << "error: cannot write " << trace_path << '\n';
      return kExitParse;
    }
  }

  if (!metrics_path.empty()) {
    std::ofstream out(metrics_path);
    out << bwp::io::metrics_to_json(result.metrics).dump(2) << '\n';
    if (!out) {
      std::cerr << "error: cannot write " << metrics_path << '\n';
      return kExitParse;
    }
  }
  for (const auto& m : result.metrics.cells) {
    int switches = 0;
    for (const auto& [cause, n] : m.switch_count) {
      switches += n;
    }
    std::cerr << m.cell << ": " << switches << " switches, " << m.rejected_event_count
              << " rejected events, proxy " << bwp::to_double(m.bandwidth_time_proxy) << " RB*ms\n";
  }
  return kExitOk;
}

int cmd_delay(int from_khz, int to_khz, const std::string& type_text)
{
  const auto type = bwp::parse_delay_type(type_text);
  if (!type) {
    std::cerr << "error: delay type must be type1 or type2\n";
    return kExitParse;
  }
  const auto from = bwp::Numerology::from_scs_khz(from_khz);
  const auto to = bwp::Numerology::from_scs_khz(to_khz);
  if (!from || !to) {
    std::cerr << "error: unsupported subcarrier spacing\n";
    return kExitDomain;
  }
  try {
    const auto spec = bwp::switch_delay(*from, *to, *type);
    std::cout << spec.slots << " slots = " << bwp::to_decimal(spec.duration_ms) << " ms\n";
  } catch (const bwp::UnsupportedScs& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"5G NR bandwidth-part configuration validator and switching simulator"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Validate the cells of a scenario document");
  validate->add_option("file", validate_path, "Scenario document")->required();

  std::string run_path;
  std::string trace_path;
  std::string metrics_path;
  auto* run = app.add_subcommand("run", "Run a scenario and write its trace");
  run->add_option("file", run_path, "Scenario document")->required();
  run->add_option("--trace", trace_path, "Trace output (JSON lines); standard output when omitted");
  run->add_option("--metrics", metrics_path, "Metrics output (JSON)");

  int scs_from = 0;
  int scs_to = 0;
  std::string delay_type;
  auto* delay = app.add_subcommand("delay", "Print the BWP switch delay between two subcarrier spacings");
  delay->add_option("scs-from", scs_from, "Source SCS in kHz")->required();
  delay->add_option("scs-to", scs_to, "Target SCS in kHz")->required();
  delay->add_option("type", delay_type, "type1 or type2")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (*validate) {
    return cmd_validate(validate_path);
  }
  if (*run) {
    return cmd_run(run_path, trace_path, metrics_path);
  }
  return cmd_delay(scs_from, scs_to, delay_type);
}
