#include "bwp/io.hpp"

#include "builders.hpp"
#include "doctest.h"
#include "generators.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace bwp;
using nlohmann::json;

namespace {

const std::string kFixtures = BWP_FIXTURE_DIR;

json minimal_doc()
{
  return json::parse(R"({
    "version": "bwp-scenario/1",
    "capability": {"max_rrc_bwps": 4},
    "horizon_ms": 10,
    "cells": [{
      "id": "c",
      "cell_role": "PCell",
      "duplex": "FDD",
      "fr": "FR1",
      "point_a_hz": 3400000000,
      "channel_bandwidth_mhz": 20,
      "coreset0_span": {"start_rb": 0, "n_rbs": 24, "mu": 1},
      "ssb_span": {"low_hz": 3400720000, "high_hz": 3407920000},
      "dl_bwps": [{"id": 0, "common": {"geometry": {"start_rb": 0, "n_rbs": 51, "scs_khz": 30}}}]
    }],
    "events": [{"at_ms": 1.5, "kind": "RachStart"}]
  })");
}

std::string parse_error_of(const json& doc)
{
  try {
    io::parse_scenario(doc);
  } catch (const io::ParseError& e) {
    return e.what();
  }
  return "";
}

Trace round_trip(const Trace& t)
{
  std::stringstream ss;
  io::write_trace(ss, t);
  return io::read_trace(ss);
}

}  // namespace

TEST_CASE("minimal document")
{
  const auto doc = io::parse_scenario(minimal_doc());
  REQUIRE(doc.scenario.cells.size() == 1);
  const auto& c = doc.scenario.cells.front();
  CHECK(c.coreset0_span == bwp_span(3'400'000'000, test::geom(0, 24, 1)));
  CHECK(c.ssb_span == HzSpan{3'400'720'000, 3'407'920'000});
  CHECK(c.ul_bwps.empty());
  CHECK(c.rrc_processing_delay_ms == 10);
  CHECK(c.prach_configured_on == std::set<BwpId>{kInitialBwp});
  CHECK_FALSE(c.dl_bwps[0].rrc_configured());
  CHECK(doc.scenario.capability.switch_delay_type == SwitchDelayType::Type1);
  CHECK(doc.has_horizon);
  REQUIRE(doc.scenario.events.size() == 1);
  // A single-cell document may omit the event's cell.
  CHECK(doc.scenario.events[0].cell == "c");
  CHECK(doc.scenario.events[0].at_ms == Millis(3, 2));
}

TEST_CASE("fixtures load")
{
  const auto fdd = io::load_scenario(kFixtures + "/fdd_adaptation.json");
  const auto& c = fdd.scenario.cells.front();
  CHECK(c.dl_bwps.size() == 3);
  CHECK(c.dl_bwps[1].geometry().n_rbs == 270);
  CHECK(c.dl_bwps[0].common.link_params.at("pdcch") == "coreset0-only");
  CHECK(c.default_dl_bwp == BwpId{2});
  CHECK(validate(c, fdd.scenario.capability).findings.empty());

  const auto tdd = io::load_scenario(kFixtures + "/tdd_fr2.json");
  CHECK(tdd.scenario.cells.front().fr == FrequencyRange::FR2);
  CHECK(tdd.scenario.capability.switch_delay_type == SwitchDelayType::Type2);
  CHECK(tdd.scenario.cells.front().ul_bwps[1].dedicated->uplink_waveform == UplinkWaveform::DftSOfdm);
}

TEST_CASE("invalid corpus reports the expected rule")
{
  std::ifstream in(kFixtures + "/invalid_expected.json");
  const json expected = json::parse(in);
  int checked = 0;
  for (const auto& [file, code] : expected.items()) {
    CAPTURE(file);
    const auto doc = io::load_scenario(kFixtures + "/invalid/" + file);
    bool found = false;
    for (const auto& cell : doc.scenario.cells) {
      const auto r = validate(cell, doc.scenario.capability);
      CHECK(r.has_errors());
      found = found || r.count(code.get<std::string>()) > 0;
    }
    CHECK(found);
    ++checked;
  }
  CHECK(checked == 9);
  CHECK_THROWS_AS(io::load_scenario(kFixtures + "/invalid/truncated.json"), io::ParseError);
}

TEST_CASE("parse errors name the offending field")
{
  auto doc = minimal_doc();
  doc["version"] = "bwp-scenario/9";
  CHECK(parse_error_of(doc).find("version") != std::string::npos);

  doc = minimal_doc();
  doc["cells"][0].erase("duplex");
  CHECK(parse_error_of(doc).find("duplex") != std::string::npos);

  doc = minimal_doc();
  doc["cells"][0]["dl_bwps"][0]["common"]["geometry"]["scs_khz"] = 45;
  CHECK(parse_error_of(doc).find("scs_khz") != std::string::npos);

  doc = minimal_doc();
  doc["cells"][0]["fr"] = "FR3";
  CHECK(parse_error_of(doc).find("FR3") != std::string::npos);

  doc = minimal_doc();
  doc["events"][0] = json{{"at_ms", 1}, {"kind", "Dci"}, {"format", "1_0"}, {"bwp_indicator_bits", "1"}};
  CHECK_FALSE(parse_error_of(doc).empty());

  doc = minimal_doc();
  doc["events"][0] = json{{"at_ms", 1}, {"kind", "Dci"}, {"format", "1_1"}, {"bwp_indicator_bits", "x"}};
  CHECK(parse_error_of(doc).find("bwp_indicator_bits") != std::string::npos);

  doc = minimal_doc();
  doc["events"][0] = json{{"at_ms", 1}, {"kind", "Dci"}, {"format", "1_1"}, {"direction", "UlGrant"}};
  CHECK(parse_error_of(doc).find("direction") != std::string::npos);

  doc = minimal_doc();
  doc["events"][0]["kind"] = "Paging";
  CHECK(parse_error_of(doc).find("Paging") != std::string::npos);

  doc = minimal_doc();
  doc["cells"].push_back(doc["cells"][0]);
  doc["cells"][1]["id"] = "d";
  CHECK(parse_error_of(doc).find("cell") != std::string::npos);

  doc = minimal_doc();
  doc["cells"] = json::array();
  CHECK_FALSE(parse_error_of(doc).empty());

  CHECK_THROWS_AS(io::load_scenario(kFixtures + "/does-not-exist.json"), io::ParseError);
}

TEST_CASE("off-grid times survive parsing and are caught by the engine")
{
  auto doc = minimal_doc();
  doc["events"][0]["at_ms"] = 0.3;
  const auto parsed = io::parse_scenario(doc);
  CHECK(parsed.scenario.events[0].at_ms == Millis(3, 10));
  CHECK_THROWS_AS(run(parsed.scenario), ScenarioError);
}

TEST_CASE("rational_to_json")
{
  CHECK(io::rational_to_json(Millis(3)).dump() == "3");
  CHECK(io::rational_to_json(Millis(9, 4)).dump() == "2.25");
  CHECK(io::rational_to_json(Millis(1, 8)).dump() == "0.125");
}

TEST_CASE("every record type round-trips")
{
  const SwitchDelaySpec d{SwitchDelayType::Type2, Numerology(3), 18, Millis(9, 4)};
  const Trace t = {
      {Millis(0), "a", RunStart{BwpId{0}, std::nullopt, BwpId{2}, {{0, 24}, {2, 52}}}},
      {Millis(1, 2), "a", WindowOpen{SwitchCause::Dci, Millis(11, 4), BwpId{2}, std::nullopt, d, Millis(0)}},
      {Millis(11, 4), "a", WindowClose{SwitchCause::Dci}},
      {Millis(11, 4), "a", StateChange{BwpId{0}, std::nullopt, BwpId{2}, std::nullopt, SwitchCause::Dci}},
      {Millis(3), "a", TimerStart{Millis(8)}},
      {Millis(4), "a", TimerRestart{Millis(8)}},
      {Millis(12), "a", TimerExpiry{}},
      {Millis(13), "a", EventRejected{"Dci", "InvalidCodepoint", "codepoint 11"}},
      {Millis(14), "a", DataServed{Direction::Uplink, BwpId{1}, 66}},
      {Millis(20), "a", RunEnd{}},
  };
  CHECK(round_trip(t) == t);

  const auto j = io::record_to_json(t[1]);
  CHECK(j.at("end_ms") == 2.75);
  CHECK(j.at("target_ul").is_null());
  CHECK(j.at("slots") == 18);
  CHECK(io::record_from_json(json::parse(j.dump())) == t[1]);
}

TEST_CASE("trace reader rejects bad input")
{
  std::stringstream empty;
  CHECK_THROWS_AS(io::read_trace(empty), io::ParseError);

  std::stringstream no_header(R"({"at_ms":0,"cell":"a","record":"RunEnd"})"
                              "\n");
  CHECK_THROWS_AS(io::read_trace(no_header), io::ParseError);

  std::stringstream bad_record("{\"trace_format\":\"bwp-trace/1\"}\n{\"at_ms\":0,\"cell\":\"a\",\"record\":\"Nope\"}\n");
  CHECK_THROWS_AS(io::read_trace(bad_record), io::ParseError);

  std::stringstream bad_json("{\"trace_format\":\"bwp-trace/1\"}\n{\"at_ms\":\n");
  CHECK_THROWS_AS(io::read_trace(bad_json), io::ParseError);
}

TEST_CASE("golden traces parse and replay")
{
  for (const char* name : {"fdd_adaptation", "tdd_fr2", "quiescent"}) {
    CAPTURE(name);
    std::ifstream in(std::string(BWP_GOLDEN_DIR) + "/" + name + ".trace.jsonl");
    REQUIRE(in.good());
    const Trace t = io::read_trace(in);
    const auto doc = io::load_scenario(kFixtures + "/" + name + ".json");
    CHECK(t == run(doc.scenario).trace);
    CHECK(replay_metrics(t) == run(doc.scenario).metrics);
  }
}

TEST_CASE("metrics document")
{
  const auto r = run(io::load_scenario(kFixtures + "/fdd_adaptation.json").scenario);
  const auto j = io::metrics_to_json(r.metrics);
  CHECK(j.at("metrics_format") == "bwp-metrics/1");
  CHECK(j.at("total_time_ms") == 700);
  CHECK(j.dump().find("proxy") != std::string::npos);
}

TEST_CASE("validation report document")
{
  auto c = test::fdd_cell();
  c.inactivity_timer_ms = 1;
  io::Reports reports;
  reports.emplace(c.id, validate(c, test::cap()));
  const auto j = io::report_to_json(reports);
  CHECK(j.at("report_format") == "bwp-validation/1");
  CHECK(j.at("valid") == false);
  CHECK(j.at("cells")[0].at("findings")[0].at("rule_code") == "TIMER-RANGE");
  CHECK(io::report_to_text(reports).find("pcell: Error TIMER-RANGE at inactivity_timer_ms") == 0);
}

TEST_CASE("property: random traces round-trip")
{
  test::Rng rng(0x10'0001);
  for (int i = 0; i < 200; ++i) {
    auto g = test::random_cell(rng);
    const int horizon = test::uniform(rng, 10, 120);
    const auto r = run(test::scenario(g.cell, g.capability,
                                      test::random_events(rng, g.cell, horizon, test::uniform(rng, 0, 30)),
                                      Millis(horizon)));
    REQUIRE(round_trip(r.trace) == r.trace);
  }
}
