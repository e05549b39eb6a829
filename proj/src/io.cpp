#include "bwp/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bwp::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what)
{
  throw ParseError(where + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& where)
{
  if (!j.is_object()) {
    fail(where, "expected an object");
  }
  const auto it = j.find(key);
  if (it == j.end()) {
    fail(where, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

const json* optional_member(const json& j, const char* key)
{
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::int64_t as_int(const json& j, const std::string& where)
{
  if (!j.is_number_integer()) {
    fail(where, "expected an integer");
  }
  return j.get<std::int64_t>();
}

double as_number(const json& j, const std::string& where)
{
  if (!j.is_number()) {
    fail(where, "expected a number");
  }
  return j.get<double>();
}

bool as_bool(const json& j, const std::string& where)
{
  if (!j.is_boolean()) {
    fail(where, "expected true or false");
  }
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& where)
{
  if (!j.is_string()) {
    fail(where, "expected a string");
  }
  return j.get<std::string>();
}

BwpId as_id(const json& j, const std::string& where)
{
  return BwpId{static_cast<int>(as_int(j, where))};
}

std::optional<BwpId> optional_id(const json& j, const char* key, const std::string& where)
{
  if (const json* v = optional_member(j, key)) {
    return as_id(*v, where + "." + key);
  }
  return std::nullopt;
}

template <typename Enum, std::size_t N>
Enum as_enum(const json& j, const std::string& where, const std::pair<std::string_view, Enum> (&table)[N])
{
  const std::string text = as_string(j, where);
  for (const auto& [name, value] : table) {
    if (text == name) {
      return value;
    }
  }
  fail(where, "unknown value \"" + text + "\"");
}

constexpr std::pair<std::string_view, CellRole> kRoles[] = {
    {"PCell", CellRole::PCell}, {"PSCell", CellRole::PSCell}, {"SCell", CellRole::SCell}};
constexpr std::pair<std::string_view, Duplex> kDuplex[] = {{"FDD", Duplex::FDD}, {"TDD", Duplex::TDD}};
constexpr std::pair<std::string_view, FrequencyRange> kRanges[] = {{"FR1", FrequencyRange::FR1},
                                                                   {"FR2", FrequencyRange::FR2}};
constexpr std::pair<std::string_view, CyclicPrefix> kPrefixes[] = {{"Normal", CyclicPrefix::Normal},
                                                                   {"Extended", CyclicPrefix::Extended}};
constexpr std::pair<std::string_view, UplinkWaveform> kWaveforms[] = {{"CP-OFDM", UplinkWaveform::CpOfdm},
                                                                      {"DFT-s-OFDM", UplinkWaveform::DftSOfdm}};
constexpr std::pair<std::string_view, SwitchDelayType> kDelayTypes[] = {{"Type1", SwitchDelayType::Type1},
                                                                        {"Type2", SwitchDelayType::Type2}};
constexpr std::pair<std::string_view, Direction> kDirections[] = {{"DL", Direction::Downlink},
                                                                  {"UL", Direction::Uplink}};

Numerology parse_numerology(const json& j, const std::string& where)
{
  if (const json* mu = optional_member(j, "mu")) {
    const auto value = as_int(*mu, where + ".mu");
    if (value < 0 || value > Numerology::kMaxMu) {
      fail(where + ".mu", "numerology must be within [0,4]");
    }
    return Numerology(static_cast<int>(value));
  }
  const auto scs = as_int(member(j, "scs_khz", where), where + ".scs_khz");
  const auto n = Numerology::from_scs_khz(static_cast<int>(scs));
  if (!n) {
    fail(where + ".scs_khz", "subcarrier spacing must be 15, 30, 60, 120 or 240 kHz");
  }
  return *n;
}

BwpGeometry parse_geometry(const json& j, const std::string& where)
{
  BwpGeometry g;
  g.start_rb = as_int(member(j, "start_rb", where), where + ".start_rb");
  g.n_rbs = static_cast<int>(as_int(member(j, "n_rbs", where), where + ".n_rbs"));
  g.numerology = parse_numerology(j, where);
  if (const json* cp = optional_member(j, "cyclic_prefix")) {
    g.cyclic_prefix = as_enum(*cp, where + ".cyclic_prefix", kPrefixes);
  }
  return g;
}

// Either an absolute span or an RB allocation relative to Point A.
HzSpan parse_span(const json& j, std::int64_t point_a_hz, const std::string& where)
{
  if (!j.is_object()) {
    fail(where, "expected an object");
  }
  if (j.contains("low_hz")) {
    return {as_int(member(j, "low_hz", where), where + ".low_hz"),
            as_int(member(j, "high_hz", where), where + ".high_hz")};
  }
  return bwp_span(point_a_hz, parse_geometry(j, where));
}

OpaqueParams parse_params(const json& j, const char* key)
{
  if (const json* p = optional_member(j, key)) {
    return *p;
  }
  return OpaqueParams::object();
}

BwpConfig parse_bwp(const json& j, const std::string& where)
{
  BwpConfig b;
  b.id = as_id(member(j, "id", where), where + ".id");
  const json& common = member(j, "common", where);
  b.common.geometry = parse_geometry(member(common, "geometry", where + ".common"), where + ".common.geometry");
  b.common.link_params = parse_params(common, "link_params");
  if (const json* d = optional_member(j, "dedicated")) {
    if (!d->is_object()) {
      fail(where + ".dedicated", "expected an object");
    }
    BwpDedicated ded;
    ded.link_params = parse_params(*d, "link_params");
    if (const json* w = optional_member(*d, "uplink_waveform")) {
      ded.uplink_waveform = as_enum(*w, where + ".dedicated.uplink_waveform", kWaveforms);
    }
    b.dedicated = std::move(ded);
  }
  return b;
}

std::vector<BwpConfig> parse_bwp_list(const json& j, const char* key, const std::string& where, bool required)
{
  std::vector<BwpConfig> out;
  const json* list = required ? &member(j, key, where) : optional_member(j, key);
  if (list == nullptr) {
    return out;
  }
  if (!list->is_array()) {
    fail(where + "." + key, "expected an array");
  }
  for (std::size_t i = 0; i < list->size(); ++i) {
    out.push_back(parse_bwp((*list)[i], where + "." + key + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Millis parse_time(const json& j, const std::string& where)
{
  const double v = as_number(j, where);
  try {
    return dyadic_from_double(v);
  } catch (const std::domain_error&) {
    // Not representable on any sub-millisecond dyadic grid; keep a coarse
    // value that the engine's alignment check will reject.
    return Millis(static_cast<std::int64_t>(v * 1000000.0), 1000000);
  }
}

SimEvent parse_event(const json& j, const std::string& where, const std::string& default_cell)
{
  SimEvent e;
  e.at_ms = parse_time(member(j, "at_ms", where), where + ".at_ms");
  if (const json* c = optional_member(j, "cell")) {
    e.cell = as_string(*c, where + ".cell");
  } else if (!default_cell.empty()) {
    e.cell = default_cell;
  } else {
    fail(where, "missing field \"cell\" in a multi-cell scenario");
  }

  const std::string kind = as_string(member(j, "kind", where), where + ".kind");
  if (kind == "RrcReconfig") {
    e.body = RrcReconfigEvent{optional_id(j, "first_active_dl", where), optional_id(j, "first_active_ul", where)};
  } else if (kind == "ScellActivate") {
    e.body = ScellActivateEvent{};
  } else if (kind == "RachStart") {
    e.body = RachStartEvent{};
  } else if (kind == "RachComplete") {
    e.body = RachCompleteEvent{};
  } else if (kind == "DataDlAssignment") {
    e.body = DataEvent{Direction::Downlink};
  } else if (kind == "DataUlGrant") {
    e.body = DataEvent{Direction::Uplink};
  } else if (kind == "Dci") {
    const std::string fmt_text = as_string(member(j, "format", where), where + ".format");
    const auto fmt = parse_dci_format(fmt_text);
    if (!fmt) {
      fail(where + ".format", "unknown DCI format \"" + fmt_text + "\"");
    }
    if (const json* dir = optional_member(j, "direction")) {
      const std::string d = as_string(*dir, where + ".direction");
      if (d != to_string(direction_of(*fmt))) {
        fail(where + ".direction", "DCI " + fmt_text + " cannot carry a " + d);
      }
    }
    std::optional<BitString> bits;
    if (const json* b = optional_member(j, "bwp_indicator_bits")) {
      try {
        bits = BitString::parse(as_string(*b, where + ".bwp_indicator_bits"));
      } catch (const std::invalid_argument& ex) {
        fail(where + ".bwp_indicator_bits", ex.what());
      }
    }
    try {
      e.body = DciEvent::make(*fmt, bits);
    } catch (const DciError& ex) {
      fail(where, ex.what());
    }
  } else {
    fail(where + ".kind", "unknown event kind \"" + kind + "\"");
  }
  return e;
}

std::string id_key(int id)
{
  return std::to_string(id);
}

ordered_json id_or_null(const std::optional<BwpId>& id)
{
  return id ? ordered_json(id->value) : ordered_json(nullptr);
}

std::optional<BwpId> id_from(const json& j, const char* key, const std::string& where)
{
  return optional_id(j, key, where);
}

SwitchCause cause_from(const json& j, const std::string& where)
{
  const std::string text = as_string(member(j, "cause", where), where + ".cause");
  const auto c = parse_switch_cause(text);
  if (!c) {
    fail(where + ".cause", "unknown switch cause \"" + text + "\"");
  }
  return *c;
}

}  // namespace

CellConfig parse_cell(const json& j)
{
  CellConfig c;
  const std::string where = "cell";
  c.id = as_string(member(j, "id", where), where + ".id");
  const std::string here = "cells[" + c.id + "]";
  c.role = as_enum(member(j, "cell_role", here), here + ".cell_role", kRoles);
  c.duplex = as_enum(member(j, "duplex", here), here + ".duplex", kDuplex);
  c.fr = as_enum(member(j, "fr", here), here + ".fr", kRanges);
  c.point_a_hz = as_int(member(j, "point_a_hz", here), here + ".point_a_hz");
  c.channel_bandwidth_mhz = as_number(member(j, "channel_bandwidth_mhz", here), here + ".channel_bandwidth_mhz");
  c.coreset0_span = parse_span(member(j, "coreset0_span", here), c.point_a_hz, here + ".coreset0_span");
  c.ssb_span = parse_span(member(j, "ssb_span", here), c.point_a_hz, here + ".ssb_span");
  c.dl_bwps = parse_bwp_list(j, "dl_bwps", here, true);
  c.ul_bwps = parse_bwp_list(j, "ul_bwps", here, false);
  c.first_active_dl = optional_id(j, "first_active_dl", here);
  c.first_active_ul = optional_id(j, "first_active_ul", here);
  c.default_dl_bwp = optional_id(j, "default_dl_bwp", here);
  if (const json* t = optional_member(j, "inactivity_timer_ms")) {
    c.inactivity_timer_ms = static_cast<int>(as_int(*t, here + ".inactivity_timer_ms"));
  }
  if (const json* d = optional_member(j, "rrc_processing_delay_ms")) {
    c.rrc_processing_delay_ms = static_cast<int>(as_int(*d, here + ".rrc_processing_delay_ms"));
  }
  if (const json* p = optional_member(j, "prach_configured_on")) {
    if (!p->is_array()) {
      fail(here + ".prach_configured_on", "expected an array");
    }
    c.prach_configured_on.clear();
    for (const auto& id : *p) {
      c.prach_configured_on.insert(as_id(id, here + ".prach_configured_on"));
    }
  }
  return c;
}

UeCapability parse_capability(const json& j)
{
  const std::string where = "capability";
  UeCapability cap;
  cap.max_rrc_bwps = static_cast<int>(as_int(member(j, "max_rrc_bwps", where), where + ".max_rrc_bwps"));
  if (const json* v = optional_member(j, "mixed_numerology_bwps")) {
    cap.mixed_numerology_bwps = as_bool(*v, where + ".mixed_numerology_bwps");
  }
  if (const json* v = optional_member(j, "supports_no_bandwidth_restriction")) {
    cap.supports_no_bandwidth_restriction = as_bool(*v, where + ".supports_no_bandwidth_restriction");
  }
  if (const json* v = optional_member(j, "switch_delay_type")) {
    cap.switch_delay_type = as_enum(*v, where + ".switch_delay_type", kDelayTypes);
  }
  return cap;
}

ScenarioDocument parse_scenario(const json& doc)
{
  ScenarioDocument out;
  out.version = as_string(member(doc, "version", "document"), "document.version");
  if (out.version != kScenarioVersion) {
    fail("document.version", "unsupported version \"" + out.version + "\"");
  }

  const json& cells = member(doc, "cells", "document");
  if (!cells.is_array() || cells.empty()) {
    fail("document.cells", "expected a non-empty array");
  }
  for (const auto& c : cells) {
    out.scenario.cells.push_back(parse_cell(c));
  }
  out.scenario.capability = parse_capability(member(doc, "capability", "document"));

  if (const json* h = optional_member(doc, "horizon_ms")) {
    out.scenario.horizon_ms = parse_time(*h, "document.horizon_ms");
    out.has_horizon = true;
  }

  const std::string default_cell = out.scenario.cells.size() == 1 ? out.scenario.cells.front().id : std::string();
  if (const json* events = optional_member(doc, "events")) {
    if (!events->is_array()) {
      fail("document.events", "expected an array");
    }
    for (std::size_t i = 0; i < events->size(); ++i) {
      out.scenario.events.push_back(
          parse_event((*events)[i], "events[" + std::to_string(i) + "]", default_cell));
    }
  }
  return out;
}

ScenarioDocument load_scenario(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return parse_scenario(doc);
}

ordered_json report_to_json(const Reports& reports)
{
  ordered_json out;
  out["report_format"] = kReportFormat;
  bool valid = true;
  ordered_json cells = ordered_json::array();
  for (const auto& [cell, report] : reports) {
    valid = valid && !report.has_errors();
    ordered_json findings = ordered_json::array();
    for (const auto& f : report.findings) {
      findings.push_back({{"rule_code", f.rule_code},
                          {"severity", to_string(f.severity)},
                          {"message", f.message},
                          {"location", f.location}});
    }
    cells.push_back({{"cell", cell}, {"valid", !report.has_errors()}, {"findings", std::move(findings)}});
  }
  out["valid"] = valid;
  out["cells"] = std::move(cells);
  return out;
}

std::string report_to_text(const Reports& reports)
{
  std::ostringstream os;
  for (const auto& [cell, report] : reports) {
    if (report.findings.empty()) {
      os << cell << ": ok\n";
    }
    for (const auto& f : report.findings) {
      os << cell << ": " << to_string(f.severity) << ' ' << f.rule_code << " at " << f.location << ": " << f.message
         << '\n';
    }
  }
  return os.str();
}

ordered_json rational_to_json(const Rational& r)
{
  if (r.denominator() == 1) {
    return ordered_json(r.numerator());
  }
  return ordered_json(to_double(r));
}

ordered_json record_to_json(const TraceRecord& rec)
{
  ordered_json j;
  j["at_ms"] = rational_to_json(rec.at_ms);
  j["cell"] = rec.cell;
  j["record"] = record_name(rec.body);
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, RunStart>) {
          j["active_dl"] = r.active_dl.value;
          j["active_ul"] = id_or_null(r.active_ul);
          j["default_dl"] = r.default_dl.value;
          ordered_json widths = ordered_json::object();
          for (const auto& [id, rbs] : r.dl_rbs) {
            widths[id_key(id)] = rbs;
          }
          j["dl_rbs"] = std::move(widths);
        } else if constexpr (std::is_same_v<T, StateChange>) {
          j["old_dl"] = r.old_dl.value;
          j["old_ul"] = id_or_null(r.old_ul);
          j["new_dl"] = r.new_dl.value;
          j["new_ul"] = id_or_null(r.new_ul);
          j["cause"] = to_string(r.cause);
        } else if constexpr (std::is_same_v<T, WindowOpen>) {
          j["cause"] = to_string(r.cause);
          j["end_ms"] = rational_to_json(r.end_ms);
          j["target_dl"] = id_or_null(r.target_dl);
          j["target_ul"] = id_or_null(r.target_ul);
          j["delay_type"] = to_string(r.delay.delay_type);
          j["scs_khz"] = scs_khz(r.delay.governing);
          j["slots"] = r.delay.slots;
          j["switch_delay_ms"] = rational_to_json(r.delay.duration_ms);
          j["processing_ms"] = rational_to_json(r.processing_ms);
        } else if constexpr (std::is_same_v<T, WindowClose>) {
          j["cause"] = to_string(r.cause);
        } else if constexpr (std::is_same_v<T, TimerStart> || std::is_same_v<T, TimerRestart>) {
          j["value_ms"] = rational_to_json(r.value_ms);
        } else if constexpr (std::is_same_v<T, EventRejected>) {
          j["event"] = r.event;
          j["reason"] = r.reason;
          j["detail"] = r.detail;
        } else if constexpr (std::is_same_v<T, DataServed>) {
          j["direction"] = to_string(r.direction);
          j["bwp"] = r.bwp.value;
          j["n_rbs"] = r.n_rbs;
        }
      },
      rec.body);
  return j;
}

TraceRecord record_from_json(const json& j)
{
  const std::string where = "trace record";
  TraceRecord rec;
  rec.at_ms = parse_time(member(j, "at_ms", where), where + ".at_ms");
  rec.cell = as_string(member(j, "cell", where), where + ".cell");
  const std::string kind = as_string(member(j, "record", where), where + ".record");

  if (kind == "RunStart") {
    RunStart r;
    r.active_dl = as_id(member(j, "active_dl", where), where);
    r.active_ul = id_from(j, "active_ul", where);
    r.default_dl = as_id(member(j, "default_dl", where), where);
    for (const auto& [key, value] : member(j, "dl_rbs", where).items()) {
      try {
        r.dl_rbs[std::stoi(key)] = static_cast<int>(as_int(value, where + ".dl_rbs"));
      } catch (const std::logic_error&) {
        fail(where + ".dl_rbs", "bad BWP id \"" + key + "\"");
      }
    }
    rec.body = std::move(r);
  } else if (kind == "StateChange") {
    rec.body = StateChange{as_id(member(j, "old_dl", where), where), id_from(j, "old_ul", where),
                           as_id(member(j, "new_dl", where), where), id_from(j, "new_ul", where),
                           cause_from(j, where)};
  } else if (kind == "WindowOpen") {
    WindowOpen w;
    w.cause = cause_from(j, where);
    w.end_ms = parse_time(member(j, "end_ms", where), where + ".end_ms");
    w.target_dl = id_from(j, "target_dl", where);
    w.target_ul = id_from(j, "target_ul", where);
    w.delay.delay_type = as_enum(member(j, "delay_type", where), where + ".delay_type", kDelayTypes);
    const auto n = Numerology::from_scs_khz(static_cast<int>(as_int(member(j, "scs_khz", where), where)));
    if (!n) {
      fail(where + ".scs_khz", "unknown subcarrier spacing");
    }
    w.delay.governing = *n;
    w.delay.slots = static_cast<int>(as_int(member(j, "slots", where), where + ".slots"));
    w.delay.duration_ms = parse_time(member(j, "switch_delay_ms", where), where + ".switch_delay_ms");
    w.processing_ms = parse_time(member(j, "processing_ms", where), where + ".processing_ms");
    rec.body = w;
  } else if (kind == "WindowClose") {
    rec.body = WindowClose{cause_from(j, where)};
  } else if (kind == "TimerStart") {
    rec.body = TimerStart{parse_time(member(j, "value_ms", where), where + ".value_ms")};
  } else if (kind == "TimerRestart") {
    rec.body = TimerRestart{parse_time(member(j, "value_ms", where), where + ".value_ms")};
  } else if (kind == "TimerExpiry") {
    rec.body = TimerExpiry{};
  } else if (kind == "EventRejected") {
    rec.body = EventRejected{as_string(member(j, "event", where), where), as_string(member(j, "reason", where), where),
                             as_string(member(j, "detail", where), where)};
  } else if (kind == "DataServed") {
    rec.body = DataServed{as_enum(member(j, "direction", where), where + ".direction", kDirections),
                          as_id(member(j, "bwp", where), where),
                          static_cast<int>(as_int(member(j, "n_rbs", where), where + ".n_rbs"))};
  } else if (kind == "RunEnd") {
    rec.body = RunEnd{};
  } else {
    fail(where + ".record", "unknown record type \"" + kind + "\"");
  }
  return rec;
}

void write_trace(std::ostream& os, const Trace& trace)
{
  ordered_json header;
  header["trace_format"] = kTraceFormat;
  os << header.dump() << '\n';
  for (const auto& rec : trace) {
    os << record_to_json(rec).dump() << '\n';
  }
}

Trace read_trace(std::istream& is)
{
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError("trace line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!header_seen) {
      if (!j.is_object() || j.value("trace_format", std::string()) != kTraceFormat) {
        throw ParseError("trace line 1: missing \"trace_format\": \"" + std::string(kTraceFormat) + "\" header");
      }
      header_seen = true;
      continue;
    }
    trace.push_back(record_from_json(j));
  }
  if (!header_seen) {
    throw ParseError("empty trace");
  }
  return trace;
}

ordered_json metrics_to_json(const RunMetrics& metrics)
{
  ordered_json out;
  out["metrics_format"] = kMetricsFormat;
  out["total_time_ms"] = rational_to_json(metrics.total_time_ms);
  out["bandwidth_time_proxy_note"] =
      "RB*ms integral of the active DL BWP width; an artifact-defined stand-in, not a power model";
  ordered_json cells = ordered_json::array();
  for (const auto& m : metrics.cells) {
    ordered_json c;
    c["cell"] = m.cell;
    ordered_json counts = ordered_json::object();
    for (const auto& [cause, n] : m.switch_count) {
      counts[std::string(to_string(cause))] = n;
    }
    c["switch_count"] = std::move(counts);
    c["rejected_event_count"] = m.rejected_event_count;
    c["data_served_count"] = m.data_served_count;
    c["bandwidth_time_proxy_rb_ms"] = rational_to_json(m.bandwidth_time_proxy);
    c["time_on_default_ms"] = rational_to_json(m.time_on_default_ms);
    ordered_json per_bwp = ordered_json::object();
    for (const auto& [id, t] : m.time_on_dl_bwp_ms) {
      per_bwp[id_key(id)] = rational_to_json(t);
    }
    c["time_on_dl_bwp_ms"] = std::move(per_bwp);
    cells.push_back(std::move(c));
  }
  out["cells"] = std::move(cells);
  return out;
}

}  // namespace bwp::io
