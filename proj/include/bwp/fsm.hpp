#pragma once

#include "bwp/config.hpp"
#include "bwp/dci.hpp"
#include "bwp/switch_delay.hpp"
#include "bwp/trace.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bwp {

struct SwitchWindow {
  Millis start_ms{0};
  Millis end_ms{0};
  std::optional<BwpId> target_dl;
  std::optional<BwpId> target_ul;
  SwitchCause cause = SwitchCause::RrcReconfig;
  SwitchDelaySpec delay;
  Millis processing_ms{0};
  // A DCI-triggered switch (re)starts the inactivity timer on reception; the
  // commit then leaves the running timer alone.
  bool timer_set_on_receipt = false;

  friend bool operator==(const SwitchWindow&, const SwitchWindow&) = default;
};

/// Runtime BWP state of one serving cell.
struct BwpState {
  BwpId active_dl;
  std::optional<BwpId> active_ul;
  std::optional<Millis> timer_remaining_ms;
  std::optional<SwitchWindow> switch_window;
  bool rach_in_progress = false;

  friend bool operator==(const BwpState&, const BwpState&) = default;
};

enum class FsmErrorCode {
  DciDuringSwitchWindow,
  DataDuringSwitchWindow,
  EventDuringSwitchWindow,
  NonFallbackOnOption1Initial,
  InvalidCodepoint,
  LengthMismatch,
  InvalidTarget,
  NotInRach,
  RachInProgress,
  NoUplink,
  NotAnScell,
  UnsupportedScs,
};

std::string_view to_string(FsmErrorCode c);

/// A rejected input. The machine state is untouched when this is thrown.
class FsmError : public std::runtime_error {
public:
  FsmError(FsmErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  FsmErrorCode code() const { return code_; }

private:
  FsmErrorCode code_;
};

/// Records produced by one transition, all stamped with the transition time.
using Outputs = std::vector<RecordBody>;

/// UE-side BWP state machine for one serving cell.
///
/// Transitions either complete and return their records, or throw FsmError
/// without modifying the state. Time is supplied by the caller; on_tick()
/// must be called on every subframe (FR1) or half-subframe (FR2) boundary,
/// and close_due_window() at any instant a switch window may end between
/// ticks.
class BwpStateMachine {
public:
  /// The configuration must already have passed validate().
  BwpStateMachine(CellConfig cfg, UeCapability cap);

  const BwpState& state() const { return state_; }
  const CellConfig& config() const { return cfg_; }
  const UeCapability& capability() const { return cap_; }

  /// Timer decrement granularity: 1 ms on FR1, 0.5 ms on FR2.
  Millis tick_ms() const;
  bool in_switch_window() const { return state_.switch_window.has_value(); }

  /// Activates the first active DL/UL BWPs carried by a reconfiguration.
  /// Without either id there is no switch.
  Outputs on_rrc_reconfig(Millis now, std::optional<BwpId> first_active_dl, std::optional<BwpId> first_active_ul);
  /// Same, using the first active ids stored in the cell configuration.
  Outputs on_rrc_reconfig(Millis now);
  Outputs on_scell_activation(Millis now);
  Outputs on_dci(Millis now, const DciEvent& dci);
  Outputs on_tick(Millis now);
  Outputs close_due_window(Millis now);
  Outputs on_rach_start(Millis now);
  Outputs on_rach_complete(Millis now);
  /// Scheduled data on the active BWP. Counts as a decoded DL assignment or UL
  /// grant for the timer restart rules.
  Outputs on_data(Millis now, Direction d);

  BwpId default_dl() const { return default_dl_; }
  int active_dl_rbs() const;

private:
  void reject_if_in_window(FsmErrorCode code) const;
  const BwpConfig& require(Direction d, BwpId id) const;
  bool timer_may_run() const;
  void arm_timer(Outputs& out);
  void restart_for_scheduling(DciDirection d, Outputs& out);
  std::optional<SwitchWindow> plan_window(Millis now, std::optional<BwpId> target_dl, std::optional<BwpId> target_ul,
                           SwitchCause cause, Millis processing_ms) const;
  void open(SwitchWindow w, Outputs& out);
  void commit(Millis now, Outputs& out);
  void expire(Millis now, Outputs& out);

  CellConfig cfg_;
  UeCapability cap_;
  BwpId default_dl_;
  BwpState state_;
};

}  // namespace bwp
