#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "quicktalk/device_filter.hpp"
#include "quicktalk/time.hpp"

namespace quicktalk {

constexpr std::uint32_t kUserIdMask = 0xFFFFFF;  // 24 bits
constexpr int kFrameBits = 40;
constexpr int kDataBits = 38;                      // user id + filter

// NEC envelope timings, in simulation ticks (0.5 us).
namespace nec {
constexpr Ticks kLeadMark{18000};   // 9 ms
constexpr Ticks kLeadSpace{9000};   // 4.5 ms
constexpr Ticks kBitMark{1125};     // 562.5 us
constexpr Ticks kZeroSpace{1125};   // 562.5 us
constexpr Ticks kOneSpace{3375};    // 1687.5 us
constexpr Ticks kStopMark{1125};    // 562.5 us
constexpr double kDefaultTolerance = 0.25;
}  // namespace nec

/// The 40-bit pinpointing payload: 24-bit user id, 14-bit filter code, 2-bit
/// parity, transmitted MSB-first in that order. The filter is kept as its raw
/// code so every 38-bit data word round-trips; filter() decodes it.
class IrFrame {
 public:
  /// Throws InputError on width violations or a parity that does not match.
  IrFrame(std::uint32_t user_id, std::uint16_t filter_code, std::uint8_t parity);

  /// Reassembles a frame from its 40-bit wire word. Returns false if the
  /// parity bits do not match the data.
  static bool from_word(std::uint64_t word, IrFrame& out);

  std::uint32_t user_id() const { return user_id_; }
  std::uint16_t filter_code() const { return filter_code_; }
  std::uint8_t parity() const { return parity_; }

  /// Throws MalformedFilter if the code breaks the prefix discipline.
  DeviceTypeFilter filter() const { return decode_filter(filter_code_); }

  /// The 40-bit word as sent on the wire (bit 39 first).
  std::uint64_t word() const;
  /// 10 upper-case hex digits, MSB-first.
  std::string hex() const;

  bool operator==(const IrFrame&) const = default;

 private:
  IrFrame() = default;
  std::uint32_t user_id_ = 0;
  std::uint16_t filter_code_ = 0;
  std::uint8_t parity_ = 0;
};

/// Bit 0: even parity over data bits 0..18; bit 1: even parity over data bits
/// 19..37, where the data word is (user_id << 14) | filter_code.
std::uint8_t compute_parity(std::uint32_t user_id, std::uint16_t filter_code);

bool check_parity(const IrFrame& frame);

/// Throws InputError if user_id exceeds 24 bits or the filter is invalid.
IrFrame encode_frame(std::uint32_t user_id, const DeviceTypeFilter& filter);
/// As encode_frame but with a raw 14-bit filter code (no discipline check).
IrFrame encode_frame_raw(std::uint32_t user_id, std::uint16_t filter_code);

enum class Level : std::uint8_t { Off = 0, On = 1 };

struct PulseSegment {
  Level level;
  Ticks duration;
  bool operator==(const PulseSegment&) const = default;
};

/// Demodulated IR envelope: alternating ON/OFF segments.
struct PulseTrain {
  std::vector<PulseSegment> segments;

  Ticks total_duration() const;
  /// Strictly alternating and every duration positive.
  bool well_formed() const;
  bool operator==(const PulseTrain&) const = default;
};

/// Lead code, 40 bit symbols MSB-first, one stop mark; no repeat block.
PulseTrain frame_to_pulses(const IrFrame& frame);
/// Same envelope for an arbitrary 40-bit word, parity unchecked. Used to
/// inject corrupted payloads.
PulseTrain word_to_pulses(std::uint64_t word);

struct PartiallyDecodable {
  bool operator==(const PartiallyDecodable&) const = default;
};
struct Undetectable {
  bool operator==(const Undetectable&) const = default;
};
using DecodeResult = std::variant<IrFrame, PartiallyDecodable, Undetectable>;

inline bool is_decodable(const DecodeResult& r) { return std::holds_alternative<IrFrame>(r); }
inline bool is_partial(const DecodeResult& r) { return std::holds_alternative<PartiallyDecodable>(r); }
inline bool is_undetectable(const DecodeResult& r) { return std::holds_alternative<Undetectable>(r); }

/// Classifies a received train. Each duration may deviate from nominal by at
/// most `tolerance` (fraction of nominal). Throws InputError if tolerance is
/// outside [0, 0.5).
DecodeResult pulses_to_frame(const PulseTrain& pulses, double tolerance = nec::kDefaultTolerance);

/// Emission time of a frame; equals frame_to_pulses(frame).total_duration().
Ticks frame_duration(const IrFrame& frame);
double frame_duration_ms(const IrFrame& frame);

}  // namespace quicktalk
