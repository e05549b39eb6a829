#include "bwp/grid.hpp"

#include <stdexcept>
#include <string>

namespace bwp {

Numerology::Numerology(int mu) : mu_(mu)
{
  if (mu < 0 || mu > kMaxMu) {
    throw std::invalid_argument("numerology mu out of range [0,4]: " + std::to_string(mu));
  }
}

std::optional<Numerology> Numerology::from_scs_khz(int scs)
{
  for (int mu = 0; mu <= kMaxMu; ++mu) {
    if ((15 << mu) == scs) {
      return Numerology(mu);
    }
  }
  return std::nullopt;
}

int scs_khz(Numerology n)
{
  return 15 << n.mu();
}

std::int64_t scs_hz(Numerology n)
{
  return std::int64_t{15000} << n.mu();
}

Millis slot_length_ms(Numerology n)
{
  return Millis(1, std::int64_t{1} << n.mu());
}

FrequencyRangeBounds bounds(FrequencyRange fr)
{
  switch (fr) {
    case FrequencyRange::FR1:
      return {fr, 410.0, 7125.0};
    case FrequencyRange::FR2:
      return {fr, 24250.0, 52600.0};
  }
  throw std::logic_error("unknown frequency range");
}

bool rb_count_valid(const BwpGeometry& g)
{
  return g.n_rbs >= kMinBwpRbs && g.n_rbs <= kMaxBwpRbs && g.start_rb >= 0;
}

bool cyclic_prefix_valid(const BwpGeometry& g)
{
  return g.cyclic_prefix == CyclicPrefix::Normal || g.numerology.mu() == 2;
}

HzSpan bwp_span(std::int64_t point_a_hz, const BwpGeometry& g)
{
  const std::int64_t rb_hz = kSubcarriersPerRb * scs_hz(g.numerology);
  const std::int64_t low = point_a_hz + g.start_rb * rb_hz;
  return {low, low + std::int64_t{g.n_rbs} * rb_hz};
}

Rational center_hz(std::int64_t point_a_hz, const BwpGeometry& g)
{
  const HzSpan span = bwp_span(point_a_hz, g);
  return Rational(span.low_hz + span.high_hz, 2);
}

bool contains(const HzSpan& outer, const HzSpan& inner)
{
  return outer.low_hz <= inner.low_hz && inner.high_hz <= outer.high_hz;
}

bool tdd_pair_compatible(std::int64_t point_a_hz, const BwpGeometry& dl, const BwpGeometry& ul)
{
  return center_hz(point_a_hz, dl) == center_hz(point_a_hz, ul);
}

FrequencyClass classify_frequency(double f_mhz)
{
  for (FrequencyRange fr : {FrequencyRange::FR1, FrequencyRange::FR2}) {
    const auto b = bounds(fr);
    if (f_mhz >= b.low_mhz && f_mhz <= b.high_mhz) {
      return fr == FrequencyRange::FR1 ? FrequencyClass::FR1 : FrequencyClass::FR2;
    }
  }
  return FrequencyClass::Unassigned;
}

std::string_view to_string(FrequencyRange fr)
{
  return fr == FrequencyRange::FR1 ? "FR1" : "FR2";
}

std::string_view to_string(FrequencyClass fc)
{
  switch (fc) {
    case FrequencyClass::FR1:
      return "FR1";
    case FrequencyClass::FR2:
      return "FR2";
    case FrequencyClass::Unassigned:
      return "Unassigned";
  }
  return "?";
}

std::string_view to_string(CyclicPrefix cp)
{
  return cp == CyclicPrefix::Normal ? "Normal" : "Extended";
}

}  // namespace bwp
