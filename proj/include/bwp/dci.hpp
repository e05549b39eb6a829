#pragma once

#include "bwp/config.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bwp {

enum class DciFormat { Fmt0_0, Fmt0_1, Fmt1_0, Fmt1_1 };
enum class DciDirection { DlAssignment, UlGrant };

/// MSB-first bit string, as printed in the indicator table ("10" -> {1, 0}).
class BitString {
public:
  BitString() = default;
  explicit BitString(std::vector<bool> bits) : bits_(std::move(bits)) {}

  /// Parses a string of '0'/'1' characters; throws std::invalid_argument otherwise.
  static BitString parse(std::string_view text);
  static BitString from_value(unsigned value, int width);

  int size() const { return static_cast<int>(bits_.size()); }
  bool empty() const { return bits_.empty(); }
  unsigned value() const;
  std::string str() const;

  friend bool operator==(const BitString&, const BitString&) = default;

private:
  std::vector<bool> bits_;
};

enum class DciErrorCode { InvalidCodepoint, LengthMismatch, Unaddressable, MalformedEvent };

class DciError : public std::runtime_error {
public:
  DciError(DciErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  DciErrorCode code() const { return code_; }

private:
  DciErrorCode code_;
};

/// A received DCI. Construct through make(), which enforces that fallback
/// formats carry no BWP indicator and that the direction matches the format.
class DciEvent {
public:
  static DciEvent make(DciFormat format, std::optional<BitString> indicator = std::nullopt);

  DciFormat format() const { return format_; }
  DciDirection direction() const { return direction_; }
  const std::optional<BitString>& indicator() const { return indicator_; }
  bool is_fallback() const { return format_ == DciFormat::Fmt0_0 || format_ == DciFormat::Fmt1_0; }

  friend bool operator==(const DciEvent&, const DciEvent&) = default;

private:
  DciEvent(DciFormat f, DciDirection d, std::optional<BitString> ind)
      : format_(f), direction_(d), indicator_(std::move(ind))
  {}

  DciFormat format_;
  DciDirection direction_;
  std::optional<BitString> indicator_;
};

/// RRC-configured BWPs in one direction, not counting the initial BWP.
struct IndicatorContext {
  int n_excl_initial = 0;

  /// Throws std::invalid_argument outside [0, 4].
  static IndicatorContext of(int n);
  static IndicatorContext for_bwps(const std::vector<BwpConfig>& bwps);
};

int indicator_bitwidth(IndicatorContext ctx);
BwpId decode_indicator(const BitString& bits, IndicatorContext ctx);
BitString encode_indicator(BwpId target, IndicatorContext ctx);

/// Every id that has a codepoint under ctx, in codepoint order.
std::vector<BwpId> addressable_ids(IndicatorContext ctx);

DciDirection direction_of(DciFormat f);
Direction link_direction(DciDirection d);

std::string_view to_string(DciFormat f);
std::string_view to_string(DciDirection d);
std::string_view to_string(DciErrorCode c);
std::optional<DciFormat> parse_dci_format(std::string_view text);

}  // namespace bwp
