#include "bwp/fsm.hpp"

namespace bwp {

namespace {

std::string id_text(BwpId id)
{
  return "BWP #" + std::to_string(id.value);
}

FsmErrorCode from_dci_error(DciErrorCode c)
{
  return c == DciErrorCode::LengthMismatch ? FsmErrorCode::LengthMismatch : FsmErrorCode::InvalidCodepoint;
}

}  // namespace

std::string_view to_string(FsmErrorCode c)
{
  switch (c) {
    case FsmErrorCode::DciDuringSwitchWindow:
      return "DciDuringSwitchWindow";
    case FsmErrorCode::DataDuringSwitchWindow:
      return "DataDuringSwitchWindow";
    case FsmErrorCode::EventDuringSwitchWindow:
      return "EventDuringSwitchWindow";
    case FsmErrorCode::NonFallbackOnOption1Initial:
      return "NonFallbackOnOption1Initial";
    case FsmErrorCode::InvalidCodepoint:
      return "InvalidCodepoint";
    case FsmErrorCode::LengthMismatch:
      return "LengthMismatch";
    case FsmErrorCode::InvalidTarget:
      return "InvalidTarget";
    case FsmErrorCode::NotInRach:
      return "NotInRach";
    case FsmErrorCode::RachInProgress:
      return "RachInProgress";
    case FsmErrorCode::NoUplink:
      return "NoUplink";
    case FsmErrorCode::NotAnScell:
      return "NotAnScell";
    case FsmErrorCode::UnsupportedScs:
      return "UnsupportedScs";
  }
  return "?";
}

BwpStateMachine::BwpStateMachine(CellConfig cfg, UeCapability cap)
    : cfg_(std::move(cfg)), cap_(cap), default_dl_(effective_default_dl(cfg_))
{
  state_.active_dl = kInitialBwp;
  if (cfg_.has_uplink()) {
    state_.active_ul = kInitialBwp;
  }
}

Millis BwpStateMachine::tick_ms() const
{
  return cfg_.fr == FrequencyRange::FR1 ? Millis(1) : Millis(1, 2);
}

int BwpStateMachine::active_dl_rbs() const
{
  return require(Direction::Downlink, state_.active_dl).geometry().n_rbs;
}

void BwpStateMachine::reject_if_in_window(FsmErrorCode code) const
{
  if (state_.switch_window) {
    throw FsmError(code, "switch window open until " + to_decimal(state_.switch_window->end_ms) + " ms");
  }
}

const BwpConfig& BwpStateMachine::require(Direction d, BwpId id) const
{
  const BwpConfig* b = cfg_.find(d, id);
  if (b == nullptr) {
    throw FsmError(FsmErrorCode::InvalidTarget,
                   std::string(to_string(d)) + " " + id_text(id) + " is not configured");
  }
  return *b;
}

bool BwpStateMachine::timer_may_run() const
{
  return cfg_.inactivity_timer_ms.has_value() && !state_.rach_in_progress && state_.active_dl != default_dl_;
}

void BwpStateMachine::arm_timer(Outputs& out)
{
  if (!timer_may_run()) {
    return;
  }
  const bool running = state_.timer_remaining_ms.has_value();
  const Millis value(*cfg_.inactivity_timer_ms);
  state_.timer_remaining_ms = value;
  if (running) {
    out.emplace_back(TimerRestart{value});
  } else {
    out.emplace_back(TimerStart{value});
  }
}

void BwpStateMachine::restart_for_scheduling(DciDirection d, Outputs& out)
{
  // Paired spectrum: only DL assignments restart. Unpaired: both do.
  if (cfg_.duplex == Duplex::FDD && d == DciDirection::UlGrant) {
    return;
  }
  arm_timer(out);
}

std::optional<SwitchWindow> BwpStateMachine::plan_window(Millis now, std::optional<BwpId> target_dl,
                                                         std::optional<BwpId> target_ul, SwitchCause cause,
                                                         Millis processing_ms) const
{
  std::optional<SwitchDelaySpec> governing;
  auto consider = [&](Direction d, BwpId from, BwpId to) {
    const auto& from_g = require(d, from).geometry();
    const auto& to_g = require(d, to).geometry();
    SwitchDelaySpec spec;
    try {
      spec = switch_delay(from_g, to_g, cap_.switch_delay_type);
    } catch (const UnsupportedScs& e) {
      throw FsmError(FsmErrorCode::UnsupportedScs, e.what());
    }
    if (!governing || spec.duration_ms > governing->duration_ms) {
      governing = spec;
    }
  };

  const bool dl_changes = target_dl && *target_dl != state_.active_dl;
  const bool ul_changes = target_ul && state_.active_ul && *target_ul != *state_.active_ul;
  if (dl_changes) {
    consider(Direction::Downlink, state_.active_dl, *target_dl);
  }
  if (ul_changes) {
    consider(Direction::Uplink, *state_.active_ul, *target_ul);
  }
  if (!governing) {
    return std::nullopt;
  }

  SwitchWindow w;
  w.start_ms = now;
  w.cause = cause;
  w.delay = *governing;
  w.processing_ms = processing_ms;
  w.end_ms = now + processing_ms + governing->duration_ms;
  if (cfg_.duplex == Duplex::TDD) {
    // Linked pair: the window always names both targets.
    w.target_dl = target_dl;
    w.target_ul = cfg_.has_uplink() ? target_ul : std::nullopt;
  } else {
    w.target_dl = dl_changes ? target_dl : std::nullopt;
    w.target_ul = ul_changes ? target_ul : std::nullopt;
  }
  return w;
}

void BwpStateMachine::open(SwitchWindow w, Outputs& out)
{
  out.emplace_back(WindowOpen{w.cause, w.end_ms, w.target_dl, w.target_ul, w.delay, w.processing_ms});
  state_.switch_window = std::move(w);
}

void BwpStateMachine::commit(Millis now, Outputs& out)
{
  const SwitchWindow w = *state_.switch_window;
  state_.switch_window.reset();

  const BwpId old_dl = state_.active_dl;
  const auto old_ul = state_.active_ul;
  if (w.target_dl) {
    state_.active_dl = *w.target_dl;
  }
  if (w.target_ul && state_.active_ul) {
    state_.active_ul = *w.target_ul;
  }
  out.emplace_back(WindowClose{w.cause});
  out.emplace_back(StateChange{old_dl, old_ul, state_.active_dl, state_.active_ul, w.cause});

  if (state_.active_dl == default_dl_) {
    state_.timer_remaining_ms.reset();
  } else if (state_.active_dl != old_dl && !(w.cause == SwitchCause::Dci && w.timer_set_on_receipt)) {
    arm_timer(out);
  }

  // Expiry that fell inside the window fires now.
  if (state_.timer_remaining_ms && *state_.timer_remaining_ms <= Millis(0)) {
    expire(now, out);
  }
}

void BwpStateMachine::expire(Millis now, Outputs& out)
{
  out.emplace_back(TimerExpiry{});
  state_.timer_remaining_ms.reset();
  const std::optional<BwpId> target_ul =
      cfg_.duplex == Duplex::TDD && cfg_.has_uplink() ? std::optional<BwpId>(default_dl_) : std::nullopt;
  if (auto w = plan_window(now, default_dl_, target_ul, SwitchCause::TimerExpiry, Millis(0))) {
    open(std::move(*w), out);
  }
}

Outputs BwpStateMachine::on_rrc_reconfig(Millis now, std::optional<BwpId> first_dl, std::optional<BwpId> first_ul)
{
  reject_if_in_window(FsmErrorCode::EventDuringSwitchWindow);
  if (cfg_.duplex == Duplex::TDD && cfg_.has_uplink()) {
    if (first_dl && !first_ul) {
      first_ul = first_dl;
    } else if (first_ul && !first_dl) {
      first_dl = first_ul;
    } else if (first_dl && first_ul && *first_dl != *first_ul) {
      throw FsmError(FsmErrorCode::InvalidTarget, "unpaired spectrum needs equal first active DL/UL ids");
    }
  }
  if (first_dl) {
    require(Direction::Downlink, *first_dl);
  }
  if (first_ul) {
    if (!cfg_.has_uplink()) {
      throw FsmError(FsmErrorCode::InvalidTarget, "first active UL BWP given for a cell without uplink");
    }
    require(Direction::Uplink, *first_ul);
  }

  Outputs out;
  if (auto w = plan_window(now, first_dl, first_ul, SwitchCause::RrcReconfig, Millis(cfg_.rrc_processing_delay_ms))) {
    open(std::move(*w), out);
  }
  return out;
}

Outputs BwpStateMachine::on_rrc_reconfig(Millis now)
{
  return on_rrc_reconfig(now, cfg_.first_active_dl, cfg_.has_uplink() ? cfg_.first_active_ul : std::nullopt);
}

Outputs BwpStateMachine::on_scell_activation(Millis now)
{
  if (cfg_.role != CellRole::SCell) {
    throw FsmError(FsmErrorCode::NotAnScell, "activation event for a " + std::string(to_string(cfg_.role)));
  }
  reject_if_in_window(FsmErrorCode::EventDuringSwitchWindow);

  std::optional<BwpId> dl = cfg_.first_active_dl;
  std::optional<BwpId> ul = cfg_.has_uplink() ? cfg_.first_active_ul : std::nullopt;
  if (cfg_.duplex == Duplex::TDD && cfg_.has_uplink()) {
    ul = dl;
  }
  if (dl) {
    require(Direction::Downlink, *dl);
  }
  if (ul) {
    require(Direction::Uplink, *ul);
  }

  Outputs out;
  if (auto w = plan_window(now, dl, ul, SwitchCause::FirstActiveOnScellActivation, Millis(0))) {
    open(std::move(*w), out);
  } else if (!state_.timer_remaining_ms) {
    arm_timer(out);
  }
  return out;
}

Outputs BwpStateMachine::on_dci(Millis now, const DciEvent& dci)
{
  reject_if_in_window(FsmErrorCode::DciDuringSwitchWindow);
  const Direction dir = link_direction(dci.direction());
  if (dir == Direction::Uplink && !cfg_.has_uplink()) {
    throw FsmError(FsmErrorCode::NoUplink, "uplink grant on a cell without uplink");
  }

  Outputs out;
  if (dci.is_fallback()) {
    restart_for_scheduling(dci.direction(), out);
    return out;
  }

  const BwpId active = dir == Direction::Downlink ? state_.active_dl : *state_.active_ul;
  if (!dci_switch_available(cfg_, active, dir)) {
    throw FsmError(FsmErrorCode::NonFallbackOnOption1Initial,
                   "DCI " + std::string(to_string(dci.format())) + " cannot be received on an Option 1 initial BWP");
  }

  BwpId target;
  try {
    target = decode_indicator(*dci.indicator(), IndicatorContext::for_bwps(cfg_.bwps(dir)));
  } catch (const DciError& e) {
    throw FsmError(from_dci_error(e.code()), e.what());
  }
  require(dir, target);

  const bool tdd = cfg_.duplex == Duplex::TDD;
  if (tdd && cfg_.has_uplink()) {
    require(dir == Direction::Downlink ? Direction::Uplink : Direction::Downlink, target);
  }

  if (target == active) {
    restart_for_scheduling(dci.direction(), out);
    return out;
  }

  std::optional<BwpId> target_dl;
  std::optional<BwpId> target_ul;
  if (tdd) {
    target_dl = target;
    target_ul = cfg_.has_uplink() ? std::optional<BwpId>(target) : std::nullopt;
  } else if (dir == Direction::Downlink) {
    target_dl = target;
  } else {
    target_ul = target;
  }

  auto w = plan_window(now, target_dl, target_ul, SwitchCause::Dci, Millis(0));
  if (timer_may_run()) {
    arm_timer(out);
    w->timer_set_on_receipt = true;
  }
  open(std::move(*w), out);
  return out;
}

Outputs BwpStateMachine::on_tick(Millis now)
{
  Outputs out;
  auto& timer = state_.timer_remaining_ms;
  if (timer && !state_.rach_in_progress && *timer > Millis(0)) {
    *timer -= tick_ms();
    if (*timer < Millis(0)) {
      *timer = Millis(0);
    }
    if (*timer == Millis(0) && !state_.switch_window) {
      expire(now, out);
    }
  }
  Outputs closed = close_due_window(now);
  out.insert(out.end(), closed.begin(), closed.end());
  return out;
}

Outputs BwpStateMachine::close_due_window(Millis now)
{
  Outputs out;
  if (state_.switch_window && state_.switch_window->end_ms <= now) {
    commit(now, out);
  }
  return out;
}

Outputs BwpStateMachine::on_rach_start(Millis now)
{
  reject_if_in_window(FsmErrorCode::EventDuringSwitchWindow);
  if (state_.rach_in_progress) {
    throw FsmError(FsmErrorCode::RachInProgress, "random access already in progress");
  }
  if (!cfg_.has_uplink()) {
    throw FsmError(FsmErrorCode::NoUplink, "random access on a cell without uplink");
  }

  const BwpId ul_now = *state_.active_ul;
  const BwpId target_ul = cfg_.prach_configured_on.contains(ul_now) ? ul_now : kInitialBwp;
  // SpCell and unpaired spectrum: DL follows the UL index.
  const bool dl_follows = cfg_.is_spcell() || cfg_.duplex == Duplex::TDD;
  const BwpId target_dl = dl_follows ? target_ul : state_.active_dl;
  auto w = plan_window(now, target_dl, target_ul, SwitchCause::RachInitiated, Millis(0));

  state_.rach_in_progress = true;
  state_.timer_remaining_ms.reset();
  Outputs out;
  if (w) {
    open(std::move(*w), out);
  }
  return out;
}

Outputs BwpStateMachine::on_rach_complete(Millis)
{
  reject_if_in_window(FsmErrorCode::EventDuringSwitchWindow);
  if (!state_.rach_in_progress) {
    throw FsmError(FsmErrorCode::NotInRach, "random access completion without a start");
  }
  state_.rach_in_progress = false;
  Outputs out;
  arm_timer(out);
  return out;
}

Outputs BwpStateMachine::on_data(Millis, Direction d)
{
  reject_if_in_window(FsmErrorCode::DataDuringSwitchWindow);
  if (d == Direction::Uplink && !cfg_.has_uplink()) {
    throw FsmError(FsmErrorCode::NoUplink, "uplink data on a cell without uplink");
  }
  Outputs out;
  restart_for_scheduling(d == Direction::Downlink ? DciDirection::DlAssignment : DciDirection::UlGrant, out);
  const BwpId active = d == Direction::Downlink ? state_.active_dl : *state_.active_ul;
  out.emplace_back(DataServed{d, active, require(d, active).geometry().n_rbs});
  return out;
}

}  // namespace bwp
