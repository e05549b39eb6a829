// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Reuses the property-test generators and invariant checkers.

#include "bwp/engine.hpp"
#include "bwp/io.hpp"

#include "builders.hpp"
#include "generators.hpp"
#include "invariants.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace bwp;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what)
  {
    if (!ok && pass) {
      pass = false;
      detail = what;
    }
  }
};

std::string ms(const Millis& t)
{
  return to_decimal(t);
}

const std::vector<int> kScs = {15, 30, 60, 120};
const std::vector<SwitchDelayType> kTypes = {SwitchDelayType::Type1, SwitchDelayType::Type2};

int mu_of(int scs)
{
  return scs == 15 ? 0 : scs == 30 ? 1 : scs == 60 ? 2 : 3;
}

// DCI switch #0 -> #1 on a single-numerology cell must commit exactly one
// table delay after the DCI.
Outcome delay_table_conformance()
{
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int checked = 0;
  for (int scs : kScs) {
    for (auto type : kTypes) {
      auto cell = test::single_scs_cell(mu_of(scs));
      const Millis at(1);
      const auto bits = encode_indicator(BwpId{1}, IndicatorContext::for_bwps(cell.dl_bwps));
      const auto r = run(test::scenario(cell, test::cap(type),
                                        {test::at(at, "cell", DciEvent::make(DciFormat::Fmt1_1, bits))}, Millis(10)));
      const TraceRecord* change = nullptr;
      for (const auto& rec : r.trace) {
        if (std::holds_alternative<StateChange>(rec.body)) {
          change = &rec;
        }
      }
      std::ostringstream where;
      where << scs << " kHz " << to_string(type);
      const Millis expected = at + test::oracle_delay_ms(scs, type);
      o.require(change != nullptr, where.str() + ": no switch");
      if (change != nullptr) {
        o.require(change->at_ms == expected,
                  where.str() + ": committed at " + ms(change->at_ms) + " ms, expected " + ms(expected));
        o.require(std::get<StateChange>(change->body).new_dl == BwpId{1}, where.str() + ": wrong target");
      }
      ++checked;
    }
  }
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
  if (o.pass) {
    o.detail = std::to_string(checked) + " pairs exact, " + std::to_string(static_cast<int>(elapsed * 1000)) + " ms";
  }
  return o;
}

Outcome smaller_scs_rule()
{
  Outcome o;
  int checked = 0;
  for (int a : kScs) {
    for (int b : kScs) {
      if (a == b) {
        continue;
      }
      for (auto type : kTypes) {
        const auto d = switch_delay(Numerology(mu_of(a)), Numerology(mu_of(b)), type);
        const int smaller = std::min(a, b);
        std::ostringstream where;
        where << a << "->" << b << " kHz " << to_string(type);
        o.require(d.slots == test::oracle_slots(smaller, type), where.str() + ": slot count");
        o.require(d.duration_ms == test::oracle_delay_ms(smaller, type), where.str() + ": duration");
        o.require(scs_khz(d.governing) == smaller, where.str() + ": governing SCS");
        ++checked;
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(checked) + " cases";
  }
  return o;
}

Outcome indicator_codec()
{
  Outcome o;
  int cases = 0;
  for (int n = 0; n <= 4; ++n) {
    const auto ctx = IndicatorContext::of(n);
    for (BwpId id : addressable_ids(ctx)) {
      const auto bits = encode_indicator(id, ctx);
      o.require(bits.size() == indicator_bitwidth(ctx), "width mismatch at n=" + std::to_string(n));
      o.require(decode_indicator(bits, ctx) == id, "round trip failed at n=" + std::to_string(n));
      ++cases;
    }
  }
  o.require(cases <= 20, "too many addressable ids");

  auto code_of = [](const std::function<void()>& f) -> std::optional<DciErrorCode> {
    try {
      f();
    } catch (const DciError& e) {
      return e.code();
    }
    return std::nullopt;
  };
  o.require(code_of([] { decode_indicator(BitString::parse("11"), IndicatorContext::of(2)); }) ==
                DciErrorCode::InvalidCodepoint,
            "codepoint 11 with two BWPs decoded");
  o.require(code_of([] { encode_indicator(BwpId{0}, IndicatorContext::of(4)); }) ==
                DciErrorCode::Unaddressable,
            "BWP #0 encoded with four BWPs");
  if (o.pass) {
    o.detail = std::to_string(cases) + " round trips, both error cases raised";
  }
  return o;
}

Outcome fdd_golden()
{
  Outcome o;
  const auto doc = io::load_scenario(std::string(BWP_FIXTURE_DIR) + "/fdd_adaptation.json");
  const auto r = run(doc.scenario);
  std::ostringstream fresh;
  io::write_trace(fresh, r.trace);
  std::ifstream in(std::string(BWP_GOLDEN_DIR) + "/fdd_adaptation.trace.jsonl", std::ios::binary);
  std::ostringstream golden;
  golden << in.rdbuf();
  o.require(!golden.str().empty(), "golden trace missing");
  o.require(fresh.str() == golden.str(), "trace differs from the golden file");

  std::vector<StateChange> changes;
  for (const auto& rec : r.trace) {
    if (const auto* sc = std::get_if<StateChange>(&rec.body)) {
      changes.push_back(*sc);
    }
  }
  const auto& cell = doc.scenario.cells.front();
  auto width = [&](BwpId id) { return cell.find(Direction::Downlink, id)->geometry().n_rbs; };
  o.require(changes.size() == 2, "expected two state changes, got " + std::to_string(changes.size()));
  if (changes.size() == 2) {
    o.require(changes[0].cause == SwitchCause::RrcReconfig && changes[0].new_dl == BwpId{1} &&
                  changes[0].new_ul == BwpId{1} && width(BwpId{1}) == 270,
              "first change is not RRC to #1/#1 (270 RBs)");
    o.require(changes[1].cause == SwitchCause::TimerExpiry && changes[1].new_dl == BwpId{2} &&
                  changes[1].new_ul == BwpId{1} && width(BwpId{2}) == 52,
              "second change is not expiry to DL #2 (52 RBs) with UL #1");
  }
  if (o.pass) {
    o.detail = "byte-identical, RRC -> #1/#1 then expiry -> DL #2, UL #1";
  }
  return o;
}

Outcome counting_rule()
{
  Outcome o;
  auto with_dl = [](bool option2, int max_id) {
    auto c = test::fdd_cell();
    c.dl_bwps = {test::make_bwp(0, 0, 24, 1, option2)};
    for (int i = 1; i <= max_id; ++i) {
      c.dl_bwps.push_back(test::make_bwp(i, 0, 52));
    }
    return validate(c, test::cap()).count(rule::kBwpCount);
  };
  o.require(with_dl(false, 4) == 0, "Option 1 with ids 0..4 rejected");
  o.require(with_dl(true, 3) == 0, "Option 2 with ids 0..3 rejected");
  o.require(with_dl(false, 5) == 1, "Option 1 with one extra BWP: BWP-COUNT count " + std::to_string(with_dl(false, 5)));
  o.require(with_dl(true, 4) == 1, "Option 2 with one extra BWP: BWP-COUNT count " + std::to_string(with_dl(true, 4)));
  if (o.pass) {
    o.detail = "limits accepted, one extra gives exactly one BWP-COUNT in both modes";
  }
  return o;
}

Outcome timer_properties()
{
  Outcome o;
  int sequences = 0;
  int expiries = 0;
  for (int i = 0; i < 1000; ++i) {
    test::Rng rng(0xac6'0000 + i);
    auto g = test::random_cell(rng);
    g.cell.inactivity_timer_ms = test::uniform(rng, 2, 40);
    const int horizon = test::uniform(rng, 20, 200);
    const auto events = test::random_events(rng, g.cell, horizon, test::uniform(rng, 1, 50));
    const auto s = test::scenario(g.cell, g.capability, events, Millis(horizon));
    auto v = test::check_scenario(s);
    const auto t = test::check_transitions(g.cell, g.capability, events, Millis(horizon));
    v.insert(v.end(), t.begin(), t.end());
    o.require(v.empty(), v.empty() ? "" : "seed " + std::to_string(i) + ": " + v.front());
    expiries += test::count_records<TimerExpiry>(run(s).trace);
    ++sequences;
  }
  o.require(expiries > 100, "too few expiries exercised");

  test::Rng rng(0xac6'1000);
  for (int i = 0; i < 1000; ++i) {
    const int t = test::uniform(rng, -10, 3000);
    const bool flagged = validate(test::fdd_cell(t), test::cap()).count(rule::kTimerRange) > 0;
    o.require(flagged == (t < 2 || t > 2560), "timer " + std::to_string(t) + " ms misclassified");
  }

  // FR2: a 2 ms timer armed at commit expires on the fourth 0.5 ms tick.
  auto cell = test::fr2_cell(2);
  const auto r = run(test::scenario(cell, test::cap(), {test::at(Millis(0), "fr2", RrcReconfigEvent{BwpId{1}, BwpId{1}})}, Millis(30)));
  std::optional<Millis> armed;
  std::optional<Millis> expired;
  for (const auto& rec : r.trace) {
    if (std::holds_alternative<TimerStart>(rec.body) && !armed) {
      armed = rec.at_ms;
    }
    if (std::holds_alternative<TimerExpiry>(rec.body) && !expired) {
      expired = rec.at_ms;
    }
  }
  o.require(armed && expired, "FR2 timer did not run");
  int ticks = 0;
  if (armed && expired) {
    for (Millis g(0); g <= *expired; g += Millis(1, 2)) {
      ticks += g > *armed ? 1 : 0;
    }
    o.require(ticks == 4, "FR2 2 ms timer expired after " + std::to_string(ticks) + " ticks");
  }
  if (o.pass) {
    std::ostringstream os;
    os << sequences << " sequences, " << expiries << " expiries on default, FR2 armed " << ms(*armed)
       << " ms expired " << ms(*expired) << " ms (" << ticks << " ticks)";
    o.detail = os.str();
  }
  return o;
}

Outcome invariant_suite()
{
  Outcome o;
  int scenarios = 0;
  int fallback = 0;
  int data = 0;
  auto absorb = [&](test::Violations v, const std::string& where) {
    o.require(v.empty(), v.empty() ? "" : where + ": " + v.front());
  };
  for (int i = 0; i < 1000; ++i) {
    test::Rng rng(0xac7'0000 + i);
    auto g = test::random_cell(rng);
    const int horizon = test::uniform(rng, 20, 250);
    const auto events = test::random_events(rng, g.cell, horizon, test::uniform(rng, 0, 60));
    for (const auto& e : events) {
      const auto* d = std::get_if<DciEvent>(&e.body);
      fallback += d != nullptr && d->is_fallback() ? 1 : 0;
      data += std::holds_alternative<DataEvent>(e.body) ? 1 : 0;
    }
    const auto s = test::scenario(g.cell, g.capability, events, Millis(horizon));
    absorb(test::check_scenario(s), "seed " + std::to_string(i));
    absorb(test::check_transitions(g.cell, g.capability, events, Millis(horizon)), "seed " + std::to_string(i));
    ++scenarios;
  }
  for (int i = 0; i < 200; ++i) {
    test::Rng rng(0xac7'1000 + i);
    Scenario s;
    const int horizon = test::uniform(rng, 20, 150);
    for (int k = 0; k < test::uniform(rng, 2, 3); ++k) {
      auto g = test::random_cell(rng, "c" + std::to_string(k));
      auto events = test::random_events(rng, g.cell, horizon, test::uniform(rng, 0, 30));
      s.events.insert(s.events.end(), events.begin(), events.end());
      s.cells.push_back(g.cell);
      s.capability = g.capability;
    }
    s.horizon_ms = Millis(horizon);
    absorb(test::check_scenario(s), "multi-cell seed " + std::to_string(i));
    ++scenarios;
  }
  o.require(fallback > 100 && data > 1000, "generator did not exercise fallback DCI and data");
  if (o.pass) {
    std::ostringstream os;
    os << scenarios << " scenarios, " << fallback << " fallback DCIs, " << data << " data events, 0 violations";
    o.detail = os.str();
  }
  return o;
}

Outcome adaptation_direction()
{
  Outcome o;
  std::vector<SimEvent> events{test::at(Millis(0), "pcell", RrcReconfigEvent{BwpId{1}, BwpId{1}})};
  const int burst_start = 21;  // first instant on the 270 RB BWP
  for (int t = burst_start; t < burst_start + 100; ++t) {
    events.push_back(test::at(Millis(t), "pcell", DataEvent{Direction::Downlink}));
  }
  const Millis horizon(burst_start + 100 + 500);

  const auto with = run(test::scenario(test::fdd_cell(20), test::cap(), events, horizon));
  const auto without = run(test::scenario(test::fdd_cell(std::nullopt), test::cap(), events, horizon));
  const auto p_with = replay_metrics(with.trace).cells.front().bandwidth_time_proxy;
  const auto p_without = replay_metrics(without.trace).cells.front().bandwidth_time_proxy;
  o.require(p_with < p_without, "proxy with timer " + ms(p_with) + " not below " + ms(p_without));
  if (o.pass) {
    o.detail = "proxy " + ms(p_with) + " < " + ms(p_without) + " RB*ms";
  }
  return o;
}

Outcome rach_switching()
{
  Outcome o;
  auto active_after = [](CellConfig cell, EventBody activate) {
    const std::string id = cell.id;
    cell.first_active_dl = BwpId{2};
    cell.first_active_ul = BwpId{2};
    const auto r = run(test::scenario(cell, test::cap(),
                                      {test::at(Millis(0), id, std::move(activate)),
                                       test::at(Millis(20), id, RachStartEvent{})},
                                      Millis(40)));
    std::vector<StateChange> changes;
    for (const auto& rec : r.trace) {
      if (const auto* sc = std::get_if<StateChange>(&rec.body)) {
        changes.push_back(*sc);
      }
    }
    return changes;
  };

  auto spcell = test::fdd_cell();
  const auto sp = active_after(spcell, RrcReconfigEvent{BwpId{2}, BwpId{2}});
  o.require(sp.size() == 2, "SpCell: expected two switches");
  if (sp.size() == 2) {
    o.require(sp[0].new_dl == BwpId{2} && sp[0].new_ul == BwpId{2}, "SpCell: not on #2/#2 before random access");
    o.require(sp[1].cause == SwitchCause::RachInitiated && sp[1].new_dl == BwpId{0} && sp[1].new_ul == BwpId{0},
              "SpCell: random access did not move to #0/#0");
  }

  auto scell = test::fdd_cell();
  scell.id = "scell";
  scell.role = CellRole::SCell;
  const auto sc = active_after(scell, ScellActivateEvent{});
  o.require(sc.size() == 2, "SCell: expected two switches");
  if (sc.size() == 2) {
    o.require(sc[1].cause == SwitchCause::RachInitiated && sc[1].new_dl == BwpId{2} && sc[1].new_ul == BwpId{0},
              "SCell: random access changed DL or missed UL #0");
  }
  if (o.pass) {
    o.detail = "SpCell #2/#2 -> #0/#0, SCell DL stays #2 with UL -> #0";
  }
  return o;
}

}  // namespace

int main()
{
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"AC1 switch delay table conformance", delay_table_conformance},
      {"AC2 smaller SCS governs the delay", smaller_scs_rule},
      {"AC3 BWP indicator codec", indicator_codec},
      {"AC4 FDD golden scenario", fdd_golden},
      {"AC5 BWP counting rule", counting_rule},
      {"AC6 inactivity timer properties", timer_properties},
      {"AC7 invariant suite", invariant_suite},
      {"AC8 adaptation lowers the bandwidth-time proxy", adaptation_direction},
      {"AC9 random access switching", rach_switching},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << '\n';
    failed += o.pass ? 0 : 1;
  }
  std::cout << (9 - failed) << "/9 criteria passed\n";
  return failed == 0 ? 0 : 1;
}
