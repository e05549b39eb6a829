#include "bwp/dci.hpp"

namespace bwp {

namespace {

// Offset added to a codepoint to obtain the BWP id. With four non-initial
// BWPs the field cannot address BWP #0 and "00" means BWP #1.
int id_offset(IndicatorContext ctx)
{
  return ctx.n_excl_initial == 4 ? 1 : 0;
}

// Number of valid codepoints: ids 0..n for n <= 3, ids 1..4 for n = 4.
unsigned codepoint_count(IndicatorContext ctx)
{
  return ctx.n_excl_initial == 4 ? 4u : static_cast<unsigned>(ctx.n_excl_initial + 1);
}

}  // namespace

BitString BitString::parse(std::string_view text)
{
  std::vector<bool> bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string may contain only '0' and '1': \"" + std::string(text) + "\"");
    }
    bits.push_back(c == '1');
  }
  return BitString(std::move(bits));
}

BitString BitString::from_value(unsigned value, int width)
{
  std::vector<bool> bits(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) {
    bits[static_cast<std::size_t>(i)] = ((value >> (width - 1 - i)) & 1u) != 0;
  }
  return BitString(std::move(bits));
}

unsigned BitString::value() const
{
  unsigned v = 0;
  for (bool b : bits_) {
    v = (v << 1) | (b ? 1u : 0u);
  }
  return v;
}

std::string BitString::str() const
{
  std::string s;
  s.reserve(bits_.size());
  for (bool b : bits_) {
    s.push_back(b ? '1' : '0');
  }
  return s;
}

DciDirection direction_of(DciFormat f)
{
  return (f == DciFormat::Fmt1_0 || f == DciFormat::Fmt1_1) ? DciDirection::DlAssignment : DciDirection::UlGrant;
}

Direction link_direction(DciDirection d)
{
  return d == DciDirection::DlAssignment ? Direction::Downlink : Direction::Uplink;
}

DciEvent DciEvent::make(DciFormat format, std::optional<BitString> indicator)
{
  const bool fallback = format == DciFormat::Fmt0_0 || format == DciFormat::Fmt1_0;
  if (fallback && indicator) {
    throw DciError(DciErrorCode::MalformedEvent,
                   "fallback DCI format " + std::string(to_string(format)) + " carries no BWP indicator");
  }
  if (indicator && indicator->size() > 2) {
    throw DciError(DciErrorCode::MalformedEvent, "BWP indicator longer than 2 bits");
  }
  if (!fallback && !indicator) {
    indicator = BitString{};
  }
  return DciEvent(format, direction_of(format), std::move(indicator));
}

IndicatorContext IndicatorContext::of(int n)
{
  if (n < 0 || n > BwpId::kMax) {
    throw std::invalid_argument("indicator context: RRC-configured BWP count outside [0,4]");
  }
  return IndicatorContext{n};
}

IndicatorContext IndicatorContext::for_bwps(const std::vector<BwpConfig>& bwps)
{
  return of(rrc_configured_count_excluding_initial(bwps));
}

int indicator_bitwidth(IndicatorContext ctx)
{
  if (ctx.n_excl_initial == 0) {
    return 0;
  }
  return ctx.n_excl_initial == 1 ? 1 : 2;
}

BwpId decode_indicator(const BitString& bits, IndicatorContext ctx)
{
  const int width = indicator_bitwidth(ctx);
  if (bits.size() != width) {
    throw DciError(DciErrorCode::LengthMismatch, "BWP indicator has " + std::to_string(bits.size()) +
                                                     " bits, expected " + std::to_string(width));
  }
  const unsigned cp = bits.value();
  if (cp >= codepoint_count(ctx)) {
    throw DciError(DciErrorCode::InvalidCodepoint,
                   "codepoint " + bits.str() + " is reserved with " + std::to_string(ctx.n_excl_initial) +
                       " RRC-configured BWPs");
  }
  return BwpId{static_cast<int>(cp) + id_offset(ctx)};
}

BitString encode_indicator(BwpId target, IndicatorContext ctx)
{
  const int cp = target.value - id_offset(ctx);
  if (cp < 0 || static_cast<unsigned>(cp) >= codepoint_count(ctx)) {
    throw DciError(DciErrorCode::Unaddressable, "BWP #" + std::to_string(target.value) + " has no codepoint with " +
                                                    std::to_string(ctx.n_excl_initial) + " RRC-configured BWPs");
  }
  return BitString::from_value(static_cast<unsigned>(cp), indicator_bitwidth(ctx));
}

std::vector<BwpId> addressable_ids(IndicatorContext ctx)
{
  std::vector<BwpId> ids;
  for (unsigned cp = 0; cp < codepoint_count(ctx); ++cp) {
    ids.push_back(BwpId{static_cast<int>(cp) + id_offset(ctx)});
  }
  return ids;
}

std::string_view to_string(DciFormat f)
{
  switch (f) {
    case DciFormat::Fmt0_0:
      return "0_0";
    case DciFormat::Fmt0_1:
      return "0_1";
    case DciFormat::Fmt1_0:
      return "1_0";
    case DciFormat::Fmt1_1:
      return "1_1";
  }
  return "?";
}

std::string_view to_string(DciDirection d)
{
  return d == DciDirection::DlAssignment ? "DlAssignment" : "UlGrant";
}

std::string_view to_string(DciErrorCode c)
{
  switch (c) {
    case DciErrorCode::InvalidCodepoint:
      return "InvalidCodepoint";
    case DciErrorCode::LengthMismatch:
      return "LengthMismatch";
    case DciErrorCode::Unaddressable:
      return "Unaddressable";
    case DciErrorCode::MalformedEvent:
      return "MalformedEvent";
  }
  return "?";
}

std::optional<DciFormat> parse_dci_format(std::string_view text)
{
  for (DciFormat f : {DciFormat::Fmt0_0, DciFormat::Fmt0_1, DciFormat::Fmt1_0, DciFormat::Fmt1_1}) {
    if (text == to_string(f)) {
      return f;
    }
  }
  return std::nullopt;
}

}  // namespace bwp
