#include "bwp/engine.hpp"

#include <algorithm>

namespace bwp {

namespace {

constexpr SwitchCause kAllCauses[] = {SwitchCause::RrcReconfig, SwitchCause::FirstActiveOnScellActivation,
                                      SwitchCause::Dci, SwitchCause::TimerExpiry, SwitchCause::RachInitiated};

int event_priority(const EventBody& body)
{
  if (std::holds_alternative<RrcReconfigEvent>(body) || std::holds_alternative<ScellActivateEvent>(body)) {
    return 0;
  }
  if (std::holds_alternative<RachStartEvent>(body) || std::holds_alternative<RachCompleteEvent>(body)) {
    return 1;
  }
  if (std::holds_alternative<DciEvent>(body)) {
    return 2;
  }
  return 3;
}

bool on_grid(Millis t, Millis step)
{
  return (t / step).denominator() == 1;
}

Millis next_grid_point(Millis t, Millis step)
{
  const Millis k = t / step;
  return Millis(k.numerator() / k.denominator() + 1) * step;
}

CellMetrics empty_metrics(const std::string& cell)
{
  CellMetrics m;
  m.cell = cell;
  for (SwitchCause c : kAllCauses) {
    m.switch_count[c] = 0;
  }
  return m;
}

struct CellRun {
  BwpStateMachine fsm;
  CellMetrics metrics;
};

class Simulation {
public:
  Simulation(const Scenario& s, const StateObserver& observer) : scenario_(s), observer_(observer) {}

  RunResult execute()
  {
    check();
    for (const auto& cfg : scenario_.cells) {
      cells_.push_back({BwpStateMachine(cfg, scenario_.capability), empty_metrics(cfg.id)});
    }
    order_events();

    for (auto& c : cells_) {
      RunStart start{c.fsm.state().active_dl, c.fsm.state().active_ul, c.fsm.default_dl(), {}};
      for (const auto& b : c.fsm.config().dl_bwps) {
        start.dl_rbs[b.id.value] = b.geometry().n_rbs;
      }
      emit(Millis(0), c, start);
    }

    Millis now(0);
    std::size_t next_event = 0;
    while (true) {
      process_instant(now);
      while (next_event < events_.size() && events_[next_event]->at_ms == now) {
        deliver(*events_[next_event]);
        ++next_event;
      }

      std::optional<Millis> next;
      auto consider = [&](Millis t) {
        if (t > now && (!next || t < *next)) {
          next = t;
        }
      };
      for (const auto& c : cells_) {
        consider(next_grid_point(now, c.fsm.tick_ms()));
        if (const auto& w = c.fsm.state().switch_window) {
          consider(w->end_ms);
        }
      }
      if (next_event < events_.size()) {
        consider(events_[next_event]->at_ms);
      }
      if (!next || *next > scenario_.horizon_ms) {
        accumulate(now, scenario_.horizon_ms);
        break;
      }
      accumulate(now, *next);
      now = *next;
    }

    for (auto& c : cells_) {
      emit(scenario_.horizon_ms, c, RunEnd{});
    }

    RunResult result;
    result.trace = std::move(trace_);
    result.metrics.total_time_ms = scenario_.horizon_ms;
    for (auto& c : cells_) {
      result.metrics.cells.push_back(std::move(c.metrics));
    }
    return result;
  }

private:
  void check() const
  {
    if (scenario_.horizon_ms < Millis(0)) {
      throw ScenarioError(ScenarioErrorCode::HorizonInvalid, "horizon must be non-negative");
    }
    std::map<std::string, ValidationReport> failing;
    std::map<std::string, const CellConfig*> by_id;
    for (const auto& cfg : scenario_.cells) {
      if (!by_id.emplace(cfg.id, &cfg).second) {
        throw ScenarioError(ScenarioErrorCode::DuplicateCell, "cell id \"" + cfg.id + "\" used twice");
      }
      ValidationReport report = validate(cfg, scenario_.capability);
      if (report.has_errors()) {
        failing.emplace(cfg.id, std::move(report));
      }
    }
    if (!failing.empty()) {
      throw ScenarioError(ScenarioErrorCode::ScenarioInvalid, "configuration does not validate", std::move(failing));
    }
    for (const auto& e : scenario_.events) {
      const auto it = by_id.find(e.cell);
      if (it == by_id.end()) {
        throw ScenarioError(ScenarioErrorCode::UnknownCell, "event refers to unknown cell \"" + e.cell + "\"");
      }
      const Millis step = it->second->fr == FrequencyRange::FR1 ? Millis(1) : Millis(1, 2);
      if (e.at_ms < Millis(0) || !on_grid(e.at_ms, step)) {
        throw ScenarioError(ScenarioErrorCode::EventMisaligned,
                            std::string(event_name(e.body)) + " at " + std::to_string(to_double(e.at_ms)) +
                                " ms is off the " + to_decimal(step) + " ms grid of cell \"" + e.cell + "\"");
      }
      if (e.at_ms > scenario_.horizon_ms) {
        throw ScenarioError(ScenarioErrorCode::HorizonInvalid, "event after the horizon");
      }
    }
  }

  void order_events()
  {
    for (const auto& e : scenario_.events) {
      events_.push_back(&e);
    }
    std::stable_sort(events_.begin(), events_.end(), [](const SimEvent* a, const SimEvent* b) {
      if (a->at_ms != b->at_ms) {
        return a->at_ms < b->at_ms;
      }
      return event_priority(a->body) < event_priority(b->body);
    });
  }

  CellRun& cell(const std::string& id)
  {
    return *std::find_if(cells_.begin(), cells_.end(), [&](const CellRun& c) { return c.fsm.config().id == id; });
  }

  void emit(Millis at, CellRun& c, RecordBody body)
  {
    if (const auto* sc = std::get_if<StateChange>(&body)) {
      ++c.metrics.switch_count[sc->cause];
    } else if (std::holds_alternative<EventRejected>(body)) {
      ++c.metrics.rejected_event_count;
    } else if (std::holds_alternative<DataServed>(body)) {
      ++c.metrics.data_served_count;
    }
    trace_.push_back({at, c.fsm.config().id, std::move(body)});
  }

  void emit_all(Millis at, CellRun& c, Outputs outputs)
  {
    for (auto& o : outputs) {
      emit(at, c, std::move(o));
    }
  }

  void notify(Millis now, const CellRun& c) const
  {
    if (observer_) {
      observer_(now, c.fsm.config().id, c.fsm);
    }
  }

  void process_instant(Millis now)
  {
    for (auto& c : cells_) {
      if (now > Millis(0) && on_grid(now, c.fsm.tick_ms())) {
        emit_all(now, c, c.fsm.on_tick(now));
      } else {
        emit_all(now, c, c.fsm.close_due_window(now));
      }
      notify(now, c);
    }
  }

  void deliver(const SimEvent& e)
  {
    CellRun& c = cell(e.cell);
    BwpStateMachine& fsm = c.fsm;
    const Millis now = e.at_ms;
    try {
      Outputs out = std::visit(
          [&](const auto& ev) -> Outputs {
            using T = std::decay_t<decltype(ev)>;
            if constexpr (std::is_same_v<T, RrcReconfigEvent>) {
              return fsm.on_rrc_reconfig(now, ev.first_active_dl, ev.first_active_ul);
            } else if constexpr (std::is_same_v<T, ScellActivateEvent>) {
              return fsm.on_scell_activation(now);
            } else if constexpr (std::is_same_v<T, DciEvent>) {
              return fsm.on_dci(now, ev);
            } else if constexpr (std::is_same_v<T, RachStartEvent>) {
              return fsm.on_rach_start(now);
            } else if constexpr (std::is_same_v<T, RachCompleteEvent>) {
              return fsm.on_rach_complete(now);
            } else {
              return fsm.on_data(now, ev.direction);
            }
          },
          e.body);
      emit_all(now, c, std::move(out));
    } catch (const FsmError& err) {
      emit(now, c, EventRejected{std::string(event_name(e.body)), std::string(to_string(err.code())), err.what()});
    }
    notify(now, c);
  }

  void accumulate(Millis from, Millis to)
  {
    if (to <= from) {
      return;
    }
    const Millis dt = to - from;
    for (auto& c : cells_) {
      const BwpId dl = c.fsm.state().active_dl;
      c.metrics.bandwidth_time_proxy += Rational(c.fsm.active_dl_rbs()) * dt;
      c.metrics.time_on_dl_bwp_ms[dl.value] += dt;
      if (dl == c.fsm.default_dl()) {
        c.metrics.time_on_default_ms += dt;
      }
    }
  }

  const Scenario& scenario_;
  const StateObserver& observer_;
  std::vector<CellRun> cells_;
  std::vector<const SimEvent*> events_;
  Trace trace_;
};

struct ReplayCell {
  CellMetrics metrics;
  Millis last{0};
  BwpId active_dl;
  BwpId default_dl;
  std::map<int, int> dl_rbs;
  bool ended = false;

  void advance(Millis to)
  {
    const Millis dt = to - last;
    const auto it = dl_rbs.find(active_dl.value);
    if (it == dl_rbs.end()) {
      throw MalformedTrace("active DL BWP #" + std::to_string(active_dl.value) + " has no width in RunStart");
    }
    if (dt > Millis(0)) {
      metrics.bandwidth_time_proxy += Rational(it->second) * dt;
      metrics.time_on_dl_bwp_ms[active_dl.value] += dt;
      if (active_dl == default_dl) {
        metrics.time_on_default_ms += dt;
      }
    }
    last = to;
  }
};

}  // namespace

std::string_view event_name(const EventBody& body)
{
  return std::visit(
      [](const auto& ev) -> std::string_view {
        using T = std::decay_t<decltype(ev)>;
        if constexpr (std::is_same_v<T, RrcReconfigEvent>) {
          return "RrcReconfig";
        } else if constexpr (std::is_same_v<T, ScellActivateEvent>) {
          return "ScellActivate";
        } else if constexpr (std::is_same_v<T, DciEvent>) {
          return "Dci";
        } else if constexpr (std::is_same_v<T, RachStartEvent>) {
          return "RachStart";
        } else if constexpr (std::is_same_v<T, RachCompleteEvent>) {
          return "RachComplete";
        } else {
          return ev.direction == Direction::Downlink ? "DataDlAssignment" : "DataUlGrant";
        }
      },
      body);
}

std::string_view to_string(ScenarioErrorCode c)
{
  switch (c) {
    case ScenarioErrorCode::ScenarioInvalid:
      return "ScenarioInvalid";
    case ScenarioErrorCode::EventMisaligned:
      return "EventMisaligned";
    case ScenarioErrorCode::UnknownCell:
      return "UnknownCell";
    case ScenarioErrorCode::DuplicateCell:
      return "DuplicateCell";
    case ScenarioErrorCode::HorizonInvalid:
      return "HorizonInvalid";
  }
  return "?";
}

const CellMetrics& RunMetrics::cell(const std::string& id) const
{
  const auto it = std::find_if(cells.begin(), cells.end(), [&](const CellMetrics& m) { return m.cell == id; });
  if (it == cells.end()) {
    throw std::out_of_range("no metrics for cell \"" + id + "\"");
  }
  return *it;
}

RunResult run(const Scenario& scenario, const StateObserver& observer)
{
  return Simulation(scenario, observer).execute();
}

RunMetrics replay_metrics(const Trace& trace)
{
  std::vector<ReplayCell> cells;
  auto find = [&](const std::string& id) -> ReplayCell* {
    for (auto& c : cells) {
      if (c.metrics.cell == id) {
        return &c;
      }
    }
    return nullptr;
  };

  std::optional<Millis> previous;
  std::optional<Millis> end_time;
  for (const auto& rec : trace) {
    if (previous && rec.at_ms < *previous) {
      throw MalformedTrace("record at " + to_decimal(rec.at_ms) + " ms follows one at " + to_decimal(*previous) + " ms");
    }
    previous = rec.at_ms;

    if (const auto* start = std::get_if<RunStart>(&rec.body)) {
      if (find(rec.cell) != nullptr) {
        throw MalformedTrace("second RunStart for cell \"" + rec.cell + "\"");
      }
      ReplayCell c;
      c.metrics = empty_metrics(rec.cell);
      c.last = rec.at_ms;
      c.active_dl = start->active_dl;
      c.default_dl = start->default_dl;
      c.dl_rbs = start->dl_rbs;
      cells.push_back(std::move(c));
      continue;
    }

    ReplayCell* c = find(rec.cell);
    if (c == nullptr || c->ended) {
      throw MalformedTrace(std::string(record_name(rec.body)) + " outside the run of cell \"" + rec.cell + "\"");
    }
    c->advance(rec.at_ms);

    if (const auto* sc = std::get_if<StateChange>(&rec.body)) {
      if (sc->old_dl != c->active_dl) {
        throw MalformedTrace("StateChange from DL BWP #" + std::to_string(sc->old_dl.value) + " but #" +
                             std::to_string(c->active_dl.value) + " is active");
      }
      c->active_dl = sc->new_dl;
      ++c->metrics.switch_count[sc->cause];
    } else if (std::holds_alternative<EventRejected>(rec.body)) {
      ++c->metrics.rejected_event_count;
    } else if (std::holds_alternative<DataServed>(rec.body)) {
      ++c->metrics.data_served_count;
    } else if (std::holds_alternative<RunEnd>(rec.body)) {
      if (end_time && *end_time != rec.at_ms) {
        throw MalformedTrace("cells end at different times");
      }
      end_time = rec.at_ms;
      c->ended = true;
    }
  }

  RunMetrics metrics;
  for (auto& c : cells) {
    if (!c.ended) {
      throw MalformedTrace("cell \"" + c.metrics.cell + "\" has no RunEnd");
    }
    metrics.cells.push_back(std::move(c.metrics));
  }
  metrics.total_time_ms = end_time.value_or(Millis(0));
  return metrics;
}

std::string_view record_name(const RecordBody& body)
{
  static constexpr std::string_view kNames[] = {"RunStart",   "StateChange",  "WindowOpen",  "WindowClose",
                                                "TimerStart", "TimerRestart", "TimerExpiry", "EventRejected",
                                                "DataServed", "RunEnd"};
  return kNames[body.index()];
}

}  // namespace bwp
