#pragma once

#include "bwp/config.hpp"
#include "bwp/dci.hpp"
#include "bwp/fsm.hpp"
#include "bwp/trace.hpp"

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace bwp {

struct RrcReconfigEvent {
  std::optional<BwpId> first_active_dl;
  std::optional<BwpId> first_active_ul;
  friend bool operator==(const RrcReconfigEvent&, const RrcReconfigEvent&) = default;
};
struct ScellActivateEvent {
  friend bool operator==(const ScellActivateEvent&, const ScellActivateEvent&) = default;
};
struct RachStartEvent {
  friend bool operator==(const RachStartEvent&, const RachStartEvent&) = default;
};
struct RachCompleteEvent {
  friend bool operator==(const RachCompleteEvent&, const RachCompleteEvent&) = default;
};
struct DataEvent {
  Direction direction = Direction::Downlink;
  friend bool operator==(const DataEvent&, const DataEvent&) = default;
};

using EventBody =
    std::variant<RrcReconfigEvent, ScellActivateEvent, DciEvent, RachStartEvent, RachCompleteEvent, DataEvent>;

struct SimEvent {
  Millis at_ms{0};
  std::string cell;
  EventBody body;
};

std::string_view event_name(const EventBody& body);

struct Scenario {
  std::vector<CellConfig> cells;
  UeCapability capability;
  std::vector<SimEvent> events;
  Millis horizon_ms{0};
};

struct CellMetrics {
  std::string cell;
  std::map<SwitchCause, int> switch_count;
  int rejected_event_count = 0;
  int data_served_count = 0;
  // Sum over time of the active DL BWP width: RB * ms. A bandwidth-time
  // stand-in for UE power, not a power model.
  Rational bandwidth_time_proxy{0};
  Millis time_on_default_ms{0};
  std::map<int, Millis> time_on_dl_bwp_ms;

  friend bool operator==(const CellMetrics&, const CellMetrics&) = default;
};

struct RunMetrics {
  Millis total_time_ms{0};
  std::vector<CellMetrics> cells;

  const CellMetrics& cell(const std::string& id) const;
  friend bool operator==(const RunMetrics&, const RunMetrics&) = default;
};

struct RunResult {
  Trace trace;
  RunMetrics metrics;
};

enum class ScenarioErrorCode { ScenarioInvalid, EventMisaligned, UnknownCell, DuplicateCell, HorizonInvalid };

std::string_view to_string(ScenarioErrorCode c);

class ScenarioError : public std::runtime_error {
public:
  ScenarioError(ScenarioErrorCode code, const std::string& what,
                std::map<std::string, ValidationReport> reports = {})
      : std::runtime_error(what), code_(code), reports_(std::move(reports))
  {}
  ScenarioErrorCode code() const { return code_; }
  /// Per-cell validation reports (ScenarioInvalid only).
  const std::map<std::string, ValidationReport>& reports() const { return reports_; }

private:
  ScenarioErrorCode code_;
  std::map<std::string, ValidationReport> reports_;
};

class MalformedTrace : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Called after every processed instant and every delivered event.
using StateObserver = std::function<void(Millis now, const std::string& cell, const BwpStateMachine& fsm)>;

/// Runs the scenario to its horizon. Every cell ticks on its own grid (1 ms
/// FR1, 0.5 ms FR2); switch windows additionally close at their exact end.
/// Within one instant: ticks and window commits, then RRC, RACH, DCI and
/// data events, each group in input order.
RunResult run(const Scenario& scenario, const StateObserver& observer = {});

/// Recomputes the run metrics from a trace alone.
RunMetrics replay_metrics(const Trace& trace);

}  // namespace bwp
