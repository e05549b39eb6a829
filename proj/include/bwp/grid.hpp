#pragma once

#include "bwp/rational.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace bwp {

/// SCS index mu: subcarrier spacing 15 * 2^mu kHz, slot length 1 / 2^mu ms.
class Numerology {
public:
  static constexpr int kMaxMu = 4;

  /// Throws std::invalid_argument outside [0, 4].
  explicit Numerology(int mu);

  /// Inverse of scs_khz(); returns nullopt for spacings that are not 15 * 2^mu.
  static std::optional<Numerology> from_scs_khz(int scs_khz);

  int mu() const { return mu_; }

  friend bool operator==(Numerology, Numerology) = default;
  friend auto operator<=>(Numerology, Numerology) = default;

private:
  int mu_;
};

int scs_khz(Numerology n);
std::int64_t scs_hz(Numerology n);
Millis slot_length_ms(Numerology n);

enum class CyclicPrefix { Normal, Extended };

enum class FrequencyRange { FR1, FR2 };
enum class FrequencyClass { FR1, FR2, Unassigned };

struct FrequencyRangeBounds {
  FrequencyRange kind;
  double low_mhz;
  double high_mhz;
};

FrequencyRangeBounds bounds(FrequencyRange fr);

/// A BWP's placement on the common RB grid anchored at Point A. start_rb is
/// counted in RBs of the BWP's own numerology.
struct BwpGeometry {
  std::int64_t start_rb = 0;
  int n_rbs = 1;
  Numerology numerology{0};
  CyclicPrefix cyclic_prefix = CyclicPrefix::Normal;

  friend bool operator==(const BwpGeometry&, const BwpGeometry&) = default;
};

inline constexpr int kSubcarriersPerRb = 12;
inline constexpr int kMinBwpRbs = 1;
inline constexpr int kMaxBwpRbs = 275;

/// Checks the geometry invariants: RB count within [1, 275], non-negative
/// start, extended CP only at 60 kHz.
bool rb_count_valid(const BwpGeometry& g);
bool cyclic_prefix_valid(const BwpGeometry& g);

/// Closed interval of absolute frequency in integer Hz.
struct HzSpan {
  std::int64_t low_hz = 0;
  std::int64_t high_hz = 0;

  std::int64_t width_hz() const { return high_hz - low_hz; }
  bool valid() const { return low_hz < high_hz; }

  friend bool operator==(const HzSpan&, const HzSpan&) = default;
};

HzSpan bwp_span(std::int64_t point_a_hz, const BwpGeometry& g);
Rational center_hz(std::int64_t point_a_hz, const BwpGeometry& g);
bool contains(const HzSpan& outer, const HzSpan& inner);

/// Unpaired-spectrum linkage: DL and UL BWPs sharing an index must share a
/// center frequency. Compared exactly.
bool tdd_pair_compatible(std::int64_t point_a_hz, const BwpGeometry& dl, const BwpGeometry& ul);

FrequencyClass classify_frequency(double f_mhz);

std::string_view to_string(FrequencyRange fr);
std::string_view to_string(FrequencyClass fc);
std::string_view to_string(CyclicPrefix cp);

}  // namespace bwp
