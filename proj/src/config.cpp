#include "bwp/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace bwp {

namespace {

class ReportBuilder {
public:
  void error(std::string_view code, std::string message, std::string location)
  {
    add(code, Severity::Error, std::move(message), std::move(location));
  }
  void warning(std::string_view code, std::string message, std::string location)
  {
    add(code, Severity::Warning, std::move(message), std::move(location));
  }
  ValidationReport take() { return std::move(report_); }

private:
  void add(std::string_view code, Severity sev, std::string message, std::string location)
  {
    report_.findings.push_back({std::string(code), sev, std::move(message), std::move(location)});
  }

  ValidationReport report_;
};

std::string bwp_location(Direction d, std::size_t index)
{
  std::ostringstream os;
  os << (d == Direction::Downlink ? "dl_bwps" : "ul_bwps") << '[' << index << ']';
  return os.str();
}

std::string id_text(BwpId id)
{
  return "BWP #" + std::to_string(id.value);
}

void check_direction(const CellConfig& cfg, const UeCapability& cap, const ValidationOptions& opts,
                     Direction d, ReportBuilder& out)
{
  const auto& list = cfg.bwps(d);
  const std::string dir{to_string(d)};
  const std::string list_name = d == Direction::Downlink ? "dl_bwps" : "ul_bwps";

  if (d == Direction::Downlink || !list.empty()) {
    if (cfg.find(d, kInitialBwp) == nullptr) {
      out.error(rule::kInitialMissing, dir + " BWP list has no initial BWP #0", list_name);
    }
  }

  const HzSpan channel = cfg.channel_span();
  std::set<BwpId> seen;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const BwpConfig& b = list[i];
    const BwpGeometry& g = b.geometry();
    const std::string loc = bwp_location(d, i);

    if (!b.id.in_range()) {
      out.error(rule::kIdRange, dir + " BWP id " + std::to_string(b.id.value) + " outside [0,4]",
                loc + ".id");
    }
    if (!seen.insert(b.id).second) {
      out.error(rule::kDuplicateId, dir + " " + id_text(b.id) + " configured more than once",
                loc + ".id");
    }
    if (!b.id.is_initial() && !b.dedicated) {
      out.error(rule::kDedicatedMissing,
                dir + " " + id_text(b.id) + " is non-initial but has no dedicated parameters",
                loc + ".dedicated");
    }
    const bool rb_ok = rb_count_valid(g);
    if (!rb_ok) {
      out.error(rule::kRbCount,
                dir + " " + id_text(b.id) + " has " + std::to_string(g.n_rbs) +
                    " RBs at start " + std::to_string(g.start_rb) + "; need 1..275 RBs, start >= 0",
                loc + ".common.geometry");
    }
    if (!cyclic_prefix_valid(g)) {
      out.error(rule::kCyclicPrefix,
                dir + " " + id_text(b.id) + " uses extended cyclic prefix at " +
                    std::to_string(scs_khz(g.numerology)) + " kHz; only 60 kHz allows it",
                loc + ".common.geometry.cyclic_prefix");
    }
    if (rb_ok && !contains(channel, bwp_span(cfg.point_a_hz, g))) {
      out.error(rule::kOutsideChannel,
                dir + " " + id_text(b.id) + " extends beyond the channel bandwidth",
                loc + ".common.geometry");
    }
    if (rb_ok && g.n_rbs < opts.min_rbg_rbs) {
      out.warning(rule::kRbgFloor,
                  dir + " " + id_text(b.id) + " is narrower than the " +
                      std::to_string(opts.min_rbg_rbs) + "-RB RBG/PRG floor",
                  loc + ".common.geometry.n_rbs");
    }
    if (d == Direction::Downlink && b.dedicated && b.dedicated->uplink_waveform) {
      out.warning(rule::kWaveformOnDownlink,
                  "uplink waveform set on downlink " + id_text(b.id) + "; ignored",
                  loc + ".dedicated.uplink_waveform");
    }
  }

  const int limit = std::min(cap.max_rrc_bwps, kMaxRrcConfiguredBwps);
  const int count = rrc_configured_count(list);
  if (count > limit) {
    out.error(rule::kBwpCount,
              std::to_string(count) + " RRC-configured " + dir + " BWPs exceed the limit of " +
                  std::to_string(limit),
              list_name);
  }
}

void check_reference(const CellConfig& cfg, Direction d, const std::optional<BwpId>& ref,
                     std::string_view field, ReportBuilder& out)
{
  if (ref && cfg.find(d, *ref) == nullptr) {
    out.error(rule::kUnknownRef,
              std::string(field) + " names unconfigured " + std::string(to_string(d)) + " " +
                  id_text(*ref),
              std::string(field));
  }
}

}  // namespace

const BwpConfig* CellConfig::find(Direction d, BwpId id) const
{
  const auto& list = bwps(d);
  const auto it = std::find_if(list.begin(), list.end(), [id](const BwpConfig& b) { return b.id == id; });
  return it == list.end() ? nullptr : &*it;
}

HzSpan CellConfig::channel_span() const
{
  const auto width = static_cast<std::int64_t>(std::llround(channel_bandwidth_mhz * 1e6));
  return {point_a_hz, point_a_hz + width};
}

bool ValidationReport::has_errors() const
{
  return error_count() > 0;
}

std::size_t ValidationReport::count(std::string_view rule_code) const
{
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                [&](const Finding& f) { return f.rule_code == rule_code; }));
}

std::size_t ValidationReport::error_count() const
{
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                [](const Finding& f) { return f.severity == Severity::Error; }));
}

int rrc_configured_count(const std::vector<BwpConfig>& bwps)
{
  return static_cast<int>(std::count_if(bwps.begin(), bwps.end(),
                                        [](const BwpConfig& b) { return b.rrc_configured(); }));
}

int rrc_configured_count_excluding_initial(const std::vector<BwpConfig>& bwps)
{
  return static_cast<int>(std::count_if(bwps.begin(), bwps.end(), [](const BwpConfig& b) {
    return b.rrc_configured() && !b.id.is_initial();
  }));
}

ValidationReport validate(const CellConfig& cfg, const UeCapability& cap, const ValidationOptions& opts)
{
  ReportBuilder out;

  if (cap.max_rrc_bwps != 1 && cap.max_rrc_bwps != 2 && cap.max_rrc_bwps != 4) {
    out.error(rule::kCapability, "max_rrc_bwps must be 1, 2 or 4", "capability.max_rrc_bwps");
  }
  if (cap.mixed_numerology_bwps && cap.max_rrc_bwps != 4) {
    out.error(rule::kCapability, "mixed-numerology support implies max_rrc_bwps = 4",
              "capability.mixed_numerology_bwps");
  }

  if (!(cfg.channel_bandwidth_mhz >= 5.0 && cfg.channel_bandwidth_mhz <= 400.0)) {
    std::ostringstream os;
    os << "channel bandwidth " << cfg.channel_bandwidth_mhz << " MHz outside [5,400] MHz";
    out.error(rule::kChannelBandwidth, os.str(), "channel_bandwidth_mhz");
  }

  const FrequencyClass fc = classify_frequency(static_cast<double>(cfg.point_a_hz) / 1e6);
  const FrequencyClass expected = cfg.fr == FrequencyRange::FR1 ? FrequencyClass::FR1 : FrequencyClass::FR2;
  if (fc != expected) {
    out.error(rule::kFrequencyRange,
              "Point A lies in " + std::string(to_string(fc)) + " but the cell is declared " +
                  std::string(to_string(cfg.fr)),
              "point_a_hz");
  }

  if (cfg.rrc_processing_delay_ms < kMinRrcProcessingMs || cfg.rrc_processing_delay_ms > kMaxRrcProcessingMs) {
    out.error(rule::kRrcDelayRange,
              "RRC processing delay " + std::to_string(cfg.rrc_processing_delay_ms) + " ms outside [5,80] ms",
              "rrc_processing_delay_ms");
  }
  if (cfg.inactivity_timer_ms &&
      (*cfg.inactivity_timer_ms < kMinInactivityTimerMs || *cfg.inactivity_timer_ms > kMaxInactivityTimerMs)) {
    out.error(rule::kTimerRange,
              "inactivity timer " + std::to_string(*cfg.inactivity_timer_ms) + " ms outside [2,2560] ms",
              "inactivity_timer_ms");
  }

  check_direction(cfg, cap, opts, Direction::Downlink, out);
  check_direction(cfg, cap, opts, Direction::Uplink, out);

  if (!cap.mixed_numerology_bwps) {
    std::set<int> mus;
    for (Direction d : {Direction::Downlink, Direction::Uplink}) {
      for (const auto& b : cfg.bwps(d)) {
        if (b.rrc_configured()) {
          mus.insert(b.geometry().numerology.mu());
        }
      }
    }
    if (mus.size() > 1) {
      out.error(rule::kMixedNumerology,
                "RRC-configured BWPs use " + std::to_string(mus.size()) +
                    " numerologies but the UE supports a single one",
                "dl_bwps,ul_bwps");
    }
  }

  if (cfg.duplex == Duplex::TDD && cfg.has_uplink()) {
    std::set<BwpId> dl_ids;
    std::set<BwpId> ul_ids;
    for (const auto& b : cfg.dl_bwps) {
      dl_ids.insert(b.id);
    }
    for (const auto& b : cfg.ul_bwps) {
      ul_ids.insert(b.id);
    }
    if (dl_ids != ul_ids) {
      out.error(rule::kTddUnpaired, "unpaired spectrum requires identical DL and UL BWP index sets",
                "dl_bwps,ul_bwps");
    }
    for (std::size_t i = 0; i < cfg.dl_bwps.size(); ++i) {
      const auto& dl = cfg.dl_bwps[i];
      const BwpConfig* ul = cfg.find(Direction::Uplink, dl.id);
      if (ul != nullptr && !tdd_pair_compatible(cfg.point_a_hz, dl.geometry(), ul->geometry())) {
        out.error(rule::kTddCenter, "DL and UL " + id_text(dl.id) + " do not share a center frequency",
                  bwp_location(Direction::Downlink, i));
      }
    }
    if (cfg.first_active_dl && cfg.first_active_ul && *cfg.first_active_dl != *cfg.first_active_ul) {
      out.error(rule::kTddUnpaired, "unpaired spectrum requires the same first active DL and UL index",
                "first_active_ul");
    }
  }

  check_reference(cfg, Direction::Downlink, cfg.default_dl_bwp, "default_dl_bwp", out);
  check_reference(cfg, Direction::Downlink, cfg.first_active_dl, "first_active_dl", out);
  check_reference(cfg, Direction::Uplink, cfg.first_active_ul, "first_active_ul", out);
  for (BwpId id : cfg.prach_configured_on) {
    check_reference(cfg, Direction::Uplink, id, "prach_configured_on", out);
  }

  if (cfg.role == CellRole::SCell && !cfg.first_active_dl) {
    out.error(rule::kScellFirstActive, "an SCell must configure a first active DL BWP", "first_active_dl");
  }

  if (const BwpConfig* initial = cfg.find(Direction::Downlink, kInitialBwp);
      initial != nullptr && rb_count_valid(initial->geometry())) {
    if (!cfg.coreset0_span.valid() ||
        !contains(bwp_span(cfg.point_a_hz, initial->geometry()), cfg.coreset0_span)) {
      out.error(rule::kCoreset0Contain, "initial DL BWP does not contain CORESET#0", "dl_bwps");
    }
  }

  if (!cap.supports_no_bandwidth_restriction) {
    for (std::size_t i = 0; i < cfg.dl_bwps.size(); ++i) {
      const auto& b = cfg.dl_bwps[i];
      if (!rb_count_valid(b.geometry())) {
        continue;
      }
      const HzSpan span = bwp_span(cfg.point_a_hz, b.geometry());
      if (!contains(span, cfg.ssb_span)) {
        out.error(rule::kBandwidthRestriction, "DL " + id_text(b.id) + " does not include the SSB bandwidth",
                  bwp_location(Direction::Downlink, i));
      }
      if (cfg.is_spcell() && !contains(span, cfg.coreset0_span)) {
        out.error(rule::kBandwidthRestriction, "DL " + id_text(b.id) + " does not include the CORESET#0 bandwidth",
                  bwp_location(Direction::Downlink, i));
      }
    }
  }

  return out.take();
}

BwpId effective_default_dl(const CellConfig& cfg)
{
  return cfg.default_dl_bwp.value_or(kInitialBwp);
}

bool dci_switch_available(const CellConfig& cfg, BwpId active, Direction d)
{
  if (!active.is_initial()) {
    return true;
  }
  const BwpConfig* b = cfg.find(d, active);
  return b != nullptr && b->rrc_configured();
}

std::string_view to_string(Direction d)
{
  return d == Direction::Downlink ? "DL" : "UL";
}

std::string_view to_string(CellRole r)
{
  switch (r) {
    case CellRole::PCell:
      return "PCell";
    case CellRole::PSCell:
      return "PSCell";
    case CellRole::SCell:
      return "SCell";
  }
  return "?";
}

std::string_view to_string(Duplex d)
{
  return d == Duplex::FDD ? "FDD" : "TDD";
}

std::string_view to_string(SwitchDelayType t)
{
  return t == SwitchDelayType::Type1 ? "Type1" : "Type2";
}

std::string_view to_string(Severity s)
{
  return s == Severity::Error ? "Error" : "Warning";
}

std::string_view to_string(UplinkWaveform w)
{
  return w == UplinkWaveform::CpOfdm ? "CP-OFDM" : "DFT-s-OFDM";
}

}  // namespace bwp
