#include "bwp/switch_delay.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace bwp {

namespace {

// Rows: 15, 30, 60, 120 kHz. Columns: Type 1, Type 2.
constexpr std::array<std::array<int, 2>, 4> kDelaySlots{{
    {1, 3},
    {2, 5},
    {3, 9},
    {6, 18},
}};

}  // namespace

UnsupportedScs::UnsupportedScs(int scs)
    : std::invalid_argument("no BWP switch delay defined for " + std::to_string(scs) + " kHz"), scs_khz_(scs)
{}

int switch_delay_slots(Numerology n, SwitchDelayType t)
{
  if (n.mu() >= static_cast<int>(kDelaySlots.size())) {
    throw UnsupportedScs(scs_khz(n));
  }
  return kDelaySlots[static_cast<std::size_t>(n.mu())][t == SwitchDelayType::Type1 ? 0 : 1];
}

SwitchDelaySpec switch_delay(Numerology from, Numerology to, SwitchDelayType t)
{
  // Both ends must be in the table even though only the smaller SCS governs.
  switch_delay_slots(from, t);
  switch_delay_slots(to, t);

  SwitchDelaySpec spec;
  spec.delay_type = t;
  spec.governing = std::min(from, to);
  spec.slots = switch_delay_slots(spec.governing, t);
  spec.duration_ms = Millis(spec.slots) * slot_length_ms(spec.governing);
  return spec;
}

SwitchDelaySpec switch_delay(const BwpGeometry& from, const BwpGeometry& to, SwitchDelayType t)
{
  return switch_delay(from.numerology, to.numerology, t);
}

std::string_view to_string(SwitchCause c)
{
  switch (c) {
    case SwitchCause::RrcReconfig:
      return "RrcReconfig";
    case SwitchCause::FirstActiveOnScellActivation:
      return "FirstActiveOnScellActivation";
    case SwitchCause::Dci:
      return "Dci";
    case SwitchCause::TimerExpiry:
      return "TimerExpiry";
    case SwitchCause::RachInitiated:
      return "RachInitiated";
  }
  return "?";
}

std::optional<SwitchCause> parse_switch_cause(std::string_view text)
{
  for (SwitchCause c : {SwitchCause::RrcReconfig, SwitchCause::FirstActiveOnScellActivation, SwitchCause::Dci,
                        SwitchCause::TimerExpiry, SwitchCause::RachInitiated}) {
    if (text == to_string(c)) {
      return c;
    }
  }
  return std::nullopt;
}

std::optional<SwitchDelayType> parse_delay_type(std::string_view text)
{
  if (text == "Type1" || text == "type1") {
    return SwitchDelayType::Type1;
  }
  if (text == "Type2" || text == "type2") {
    return SwitchDelayType::Type2;
  }
  return std::nullopt;
}

}  // namespace bwp
