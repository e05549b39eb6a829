#pragma once

#include "bwp/config.hpp"
#include "bwp/grid.hpp"

#include <optional>
#include <stdexcept>
#include <string_view>

namespace bwp {

enum class SwitchCause { RrcReconfig, FirstActiveOnScellActivation, Dci, TimerExpiry, RachInitiated };

/// T_BWPswitchDelay for one switch. The governing numerology is the smaller
/// SCS of the two BWPs involved.
struct SwitchDelaySpec {
  SwitchDelayType delay_type = SwitchDelayType::Type1;
  Numerology governing{0};
  int slots = 0;
  Millis duration_ms{0};

  friend bool operator==(const SwitchDelaySpec&, const SwitchDelaySpec&) = default;
};

class UnsupportedScs : public std::invalid_argument {
public:
  explicit UnsupportedScs(int scs_khz);
  int scs_khz() const { return scs_khz_; }

private:
  int scs_khz_;
};

/// Switch delay in slots of the given numerology. 240 kHz has no entry and
/// throws UnsupportedScs.
int switch_delay_slots(Numerology n, SwitchDelayType t);

SwitchDelaySpec switch_delay(const BwpGeometry& from, const BwpGeometry& to, SwitchDelayType t);
SwitchDelaySpec switch_delay(Numerology from, Numerology to, SwitchDelayType t);

std::string_view to_string(SwitchCause c);
std::optional<SwitchCause> parse_switch_cause(std::string_view text);
std::optional<SwitchDelayType> parse_delay_type(std::string_view text);

}  // namespace bwp
