#pragma once

#include "bwp/grid.hpp"

#include "json.hpp"

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bwp {

/// BWP index. Index 0 is reserved for the initial BWP. Values outside [0, 4]
/// are representable so that the validator can report them.
struct BwpId {
  int value = 0;

  static constexpr int kMax = 4;

  constexpr bool is_initial() const { return value == 0; }
  constexpr bool in_range() const { return value >= 0 && value <= kMax; }

  friend constexpr auto operator<=>(BwpId, BwpId) = default;
};

inline constexpr BwpId kInitialBwp{0};

enum class Direction { Downlink, Uplink };
enum class CellRole { PCell, PSCell, SCell };
enum class Duplex { FDD, TDD };
enum class UplinkWaveform { CpOfdm, DftSOfdm };
enum class SwitchDelayType { Type1, Type2 };

/// Cell- or UE-specific per-channel parameters. Stored and echoed, never
/// interpreted.
using OpaqueParams = nlohmann::json;

struct BwpCommon {
  BwpGeometry geometry;
  OpaqueParams link_params = OpaqueParams::object();
};

struct BwpDedicated {
  OpaqueParams link_params = OpaqueParams::object();
  std::optional<UplinkWaveform> uplink_waveform;
};

/// One configured BWP. A BWP #0 without dedicated parameters is configured
/// by "Option 1" (cell-specific only); with them, by "Option 2".
struct BwpConfig {
  BwpId id;
  BwpCommon common;
  std::optional<BwpDedicated> dedicated;

  bool rrc_configured() const { return dedicated.has_value(); }
  const BwpGeometry& geometry() const { return common.geometry; }
};

struct CellConfig {
  std::string id = "cell0";
  CellRole role = CellRole::PCell;
  Duplex duplex = Duplex::FDD;
  FrequencyRange fr = FrequencyRange::FR1;
  std::int64_t point_a_hz = 0;
  double channel_bandwidth_mhz = 100.0;
  HzSpan coreset0_span;
  HzSpan ssb_span;
  std::vector<BwpConfig> dl_bwps;
  std::vector<BwpConfig> ul_bwps;
  std::optional<BwpId> first_active_dl;
  std::optional<BwpId> first_active_ul;
  std::optional<BwpId> default_dl_bwp;
  std::optional<int> inactivity_timer_ms;
  int rrc_processing_delay_ms = 10;
  std::set<BwpId> prach_configured_on{kInitialBwp};

  const std::vector<BwpConfig>& bwps(Direction d) const
  {
    return d == Direction::Downlink ? dl_bwps : ul_bwps;
  }
  const BwpConfig* find(Direction d, BwpId id) const;
  bool has_uplink() const { return !ul_bwps.empty(); }
  bool is_spcell() const { return role != CellRole::SCell; }
  HzSpan channel_span() const;
};

struct UeCapability {
  int max_rrc_bwps = 4;  // one of {1, 2, 4}
  bool mixed_numerology_bwps = false;
  bool supports_no_bandwidth_restriction = false;
  SwitchDelayType switch_delay_type = SwitchDelayType::Type1;
};

enum class Severity { Error, Warning };

struct Finding {
  std::string rule_code;
  Severity severity = Severity::Error;
  std::string message;
  std::string location;

  friend bool operator==(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;

  bool has_errors() const;
  std::size_t count(std::string_view rule_code) const;
  std::size_t error_count() const;
};

struct ValidationOptions {
  // RBG/PRG floor; BWPs narrower than this draw a Warning.
  int min_rbg_rbs = 2;
};

/// Rule codes emitted by validate().
namespace rule {
inline constexpr std::string_view kChannelBandwidth = "CHANNEL-BW";
inline constexpr std::string_view kFrequencyRange = "FR-MISMATCH";
inline constexpr std::string_view kInitialMissing = "INITIAL-MISSING";
inline constexpr std::string_view kIdRange = "BWP-ID-RANGE";
inline constexpr std::string_view kDuplicateId = "DUPLICATE-ID";
inline constexpr std::string_view kDedicatedMissing = "DEDICATED-MISSING";
inline constexpr std::string_view kRbCount = "NRB-RANGE";
inline constexpr std::string_view kCyclicPrefix = "CP-NUMEROLOGY";
inline constexpr std::string_view kOutsideChannel = "BWP-OUTSIDE-CHANNEL";
inline constexpr std::string_view kTddCenter = "TDD-CENTER";
inline constexpr std::string_view kTddUnpaired = "TDD-UNPAIRED";
inline constexpr std::string_view kTimerRange = "TIMER-RANGE";
inline constexpr std::string_view kRrcDelayRange = "RRC-DELAY-RANGE";
inline constexpr std::string_view kUnknownRef = "UNKNOWN-BWP-REF";
inline constexpr std::string_view kScellFirstActive = "SCELL-FIRST-ACTIVE";
inline constexpr std::string_view kBwpCount = "BWP-COUNT";
inline constexpr std::string_view kMixedNumerology = "MIXED-NUMEROLOGY";
inline constexpr std::string_view kCoreset0Contain = "CORESET0-CONTAIN";
inline constexpr std::string_view kBandwidthRestriction = "BW-RESTRICTION";
inline constexpr std::string_view kCapability = "CAPABILITY-INVALID";
inline constexpr std::string_view kRbgFloor = "RBG-FLOOR";
inline constexpr std::string_view kWaveformOnDownlink = "WAVEFORM-ON-DL";
}  // namespace rule

inline constexpr int kMaxRrcConfiguredBwps = 4;
inline constexpr int kMinInactivityTimerMs = 2;
inline constexpr int kMaxInactivityTimerMs = 2560;
inline constexpr int kMinRrcProcessingMs = 5;
inline constexpr int kMaxRrcProcessingMs = 80;

/// Number of BWPs carrying dedicated parameters. An Option 1 BWP #0 does not
/// count; an Option 2 BWP #0 does.
int rrc_configured_count(const std::vector<BwpConfig>& bwps);

/// Number of RRC-configured BWPs other than the initial one; sizes the DCI
/// BWP indicator field.
int rrc_configured_count_excluding_initial(const std::vector<BwpConfig>& bwps);

ValidationReport validate(const CellConfig& cfg, const UeCapability& cap,
                          const ValidationOptions& opts = {});

BwpId effective_default_dl(const CellConfig& cfg);

/// False only while an Option 1 BWP #0 is active in the given direction:
/// there the UE monitors fallback DCI formats only.
bool dci_switch_available(const CellConfig& cfg, BwpId active, Direction d = Direction::Downlink);

std::string_view to_string(Direction d);
std::string_view to_string(CellRole r);
std::string_view to_string(Duplex d);
std::string_view to_string(SwitchDelayType t);
std::string_view to_string(Severity s);
std::string_view to_string(UplinkWaveform w);

}  // namespace bwp
