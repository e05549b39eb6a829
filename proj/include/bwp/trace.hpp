#pragma once

#include "bwp/config.hpp"
#include "bwp/rational.hpp"
#include "bwp/switch_delay.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bwp {

/// First record of every cell. Carries what replay needs to integrate the
/// active DL bandwidth without the configuration.
struct RunStart {
  BwpId active_dl;
  std::optional<BwpId> active_ul;
  BwpId default_dl;
  std::map<int, int> dl_rbs;  // BWP id -> width in RBs

  friend bool operator==(const RunStart&, const RunStart&) = default;
};

struct StateChange {
  BwpId old_dl;
  std::optional<BwpId> old_ul;
  BwpId new_dl;
  std::optional<BwpId> new_ul;
  SwitchCause cause = SwitchCause::RrcReconfig;

  friend bool operator==(const StateChange&, const StateChange&) = default;
};

struct WindowOpen {
  SwitchCause cause = SwitchCause::RrcReconfig;
  Millis end_ms{0};
  std::optional<BwpId> target_dl;
  std::optional<BwpId> target_ul;
  SwitchDelaySpec delay;
  Millis processing_ms{0};  // RRC procedure delay preceding the switch itself

  friend bool operator==(const WindowOpen&, const WindowOpen&) = default;
};

struct WindowClose {
  SwitchCause cause = SwitchCause::RrcReconfig;

  friend bool operator==(const WindowClose&, const WindowClose&) = default;
};

struct TimerStart {
  Millis value_ms{0};
  friend bool operator==(const TimerStart&, const TimerStart&) = default;
};

struct TimerRestart {
  Millis value_ms{0};
  friend bool operator==(const TimerRestart&, const TimerRestart&) = default;
};

struct TimerExpiry {
  friend bool operator==(const TimerExpiry&, const TimerExpiry&) = default;
};

struct EventRejected {
  std::string event;
  std::string reason;
  std::string detail;

  friend bool operator==(const EventRejected&, const EventRejected&) = default;
};

struct DataServed {
  Direction direction = Direction::Downlink;
  BwpId bwp;
  int n_rbs = 0;

  friend bool operator==(const DataServed&, const DataServed&) = default;
};

/// Last record of every cell, stamped at the horizon.
struct RunEnd {
  friend bool operator==(const RunEnd&, const RunEnd&) = default;
};

using RecordBody = std::variant<RunStart, StateChange, WindowOpen, WindowClose, TimerStart, TimerRestart,
                                TimerExpiry, EventRejected, DataServed, RunEnd>;

struct TraceRecord {
  Millis at_ms{0};
  std::string cell;
  RecordBody body;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

using Trace = std::vector<TraceRecord>;

std::string_view record_name(const RecordBody& body);

}  // namespace bwp
