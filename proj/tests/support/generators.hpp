#pragma once

// Random generators for property tests. Every cell produced by random_cell()
// passes validate() against the capability returned alongside it.

#include "builders.hpp"

#include "bwp/dci.hpp"

#include <stdexcept>

namespace bwp::test {

struct GeneratedCell {
  CellConfig cell;
  UeCapability capability;
};

inline int max_rbs_for(int mu)
{
  switch (mu) {
    case 0:
      return 275;
    case 1:
      return 270;
    case 2:
      return 135;
    default:
      return 264;
  }
}

inline GeneratedCell random_cell(Rng& rng, const std::string& id = "cell")
{
  GeneratedCell g;
  CellConfig& c = g.cell;
  c.id = id;
  c.role = coin(rng, 0.3) ? CellRole::SCell : (coin(rng, 0.8) ? CellRole::PCell : CellRole::PSCell);
  c.duplex = coin(rng) ? Duplex::TDD : Duplex::FDD;
  c.fr = coin(rng, 0.25) ? FrequencyRange::FR2 : FrequencyRange::FR1;
  const int mu = c.fr == FrequencyRange::FR2 ? 3 : uniform(rng, 0, 2);
  c.point_a_hz = c.fr == FrequencyRange::FR2 ? kPointAFr2 : kPointA;
  c.channel_bandwidth_mhz = c.fr == FrequencyRange::FR2 ? 400.0 : 100.0;
  c.coreset0_span = bwp_span(c.point_a_hz, geom(0, 24, mu));
  c.ssb_span = bwp_span(c.point_a_hz, geom(2, 20, mu));
  c.rrc_processing_delay_ms = uniform(rng, 5, 20);

  const bool option2 = coin(rng);
  const int extra = uniform(rng, 0, option2 ? 3 : 4);
  const bool with_ul = !(c.role == CellRole::SCell && coin(rng, 0.3));

  // All DL BWPs start at RB 0 so they include SSB and CORESET#0.
  c.dl_bwps.push_back(make_bwp(0, 0, 24, mu, option2));
  for (int i = 1; i <= extra; ++i) {
    c.dl_bwps.push_back(make_bwp(i, 0, uniform(rng, 24, max_rbs_for(mu)), mu));
  }
  if (with_ul) {
    if (c.duplex == Duplex::TDD) {
      c.ul_bwps = c.dl_bwps;
    } else {
      c.ul_bwps.push_back(make_bwp(0, 0, 24, mu, option2));
      for (int i = 1; i <= extra; ++i) {
        const int n = uniform(rng, 1, max_rbs_for(mu) - 10);
        c.ul_bwps.push_back(make_bwp(i, uniform(rng, 0, 10), n, mu));
      }
    }
  }

  auto any_id = [&] { return BwpId{uniform(rng, 0, extra)}; };
  if (c.role == CellRole::SCell || coin(rng, 0.8)) {
    c.first_active_dl = any_id();
  }
  if (with_ul && coin(rng, 0.8)) {
    c.first_active_ul = c.duplex == Duplex::TDD && c.first_active_dl ? *c.first_active_dl : any_id();
  }
  if (coin(rng, 0.7)) {
    c.default_dl_bwp = any_id();
  }
  if (coin(rng, 0.85)) {
    c.inactivity_timer_ms = coin(rng, 0.9) ? uniform(rng, 2, 40) : uniform(rng, 2, 2560);
  }
  if (with_ul) {
    for (int i = 1; i <= extra; ++i) {
      if (coin(rng, 0.3)) {
        c.prach_configured_on.insert(BwpId{i});
      }
    }
  } else {
    c.prach_configured_on.clear();
  }

  g.capability.switch_delay_type = coin(rng) ? SwitchDelayType::Type1 : SwitchDelayType::Type2;

  const auto report = validate(c, g.capability);
  if (report.has_errors()) {
    throw std::logic_error("generator produced an invalid cell: " + report.findings.front().rule_code);
  }
  return g;
}

inline BitString random_bits(Rng& rng, int width)
{
  std::vector<bool> bits;
  for (int i = 0; i < width; ++i) {
    bits.push_back(coin(rng));
  }
  return BitString(bits);
}

// A random DCI. Non-fallback indicators usually have the right width for the
// cell, occasionally not, so decode errors are exercised as well.
inline DciEvent random_dci(Rng& rng, const CellConfig& cell)
{
  const DciFormat f = static_cast<DciFormat>(uniform(rng, 0, 3));
  const DciEvent probe = DciEvent::make(f);
  if (probe.is_fallback()) {
    return probe;
  }
  const Direction d = link_direction(probe.direction());
  const auto& list = cell.bwps(d);
  int width = list.empty() ? 0 : indicator_bitwidth(IndicatorContext::for_bwps(list));
  if (coin(rng, 0.05)) {
    width = uniform(rng, 0, 2);
  }
  return DciEvent::make(f, random_bits(rng, width));
}

// Events on the cell's tick grid over [0, horizon).
inline std::vector<SimEvent> random_events(Rng& rng, const CellConfig& cell, int horizon_ms, int count)
{
  const int steps_per_ms = cell.fr == FrequencyRange::FR2 ? 2 : 1;
  std::vector<SimEvent> events;
  for (int i = 0; i < count; ++i) {
    const Millis t(uniform(rng, 0, horizon_ms * steps_per_ms - 1), steps_per_ms);
    const int kind = uniform(rng, 0, 99);
    EventBody body;
    if (kind < 5) {
      RrcReconfigEvent e;
      if (coin(rng, 0.7)) {
        e.first_active_dl = cell.first_active_dl;
        e.first_active_ul = cell.has_uplink() ? cell.first_active_ul : std::nullopt;
      }
      body = e;
    } else if (kind < 8) {
      body = ScellActivateEvent{};
    } else if (kind < 13) {
      body = RachStartEvent{};
    } else if (kind < 18) {
      body = RachCompleteEvent{};
    } else if (kind < 55) {
      body = random_dci(rng, cell);
    } else {
      body = DataEvent{coin(rng, 0.7) ? Direction::Downlink : Direction::Uplink};
    }
    events.push_back(SimEvent{t, cell.id, body});
  }
  return events;
}

}  // namespace bwp::test
