#include "quicktalk/ir_codec.hpp"

#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "quicktalk/error.hpp"

namespace quicktalk {

namespace {

constexpr std::uint64_t kLowHalfMask = (std::uint64_t{1} << 19) - 1;

std::uint64_t data_word(std::uint32_t user_id, std::uint16_t filter_code) {
  return (std::uint64_t{user_id} << 14) | filter_code;
}

bool near(Ticks actual, Ticks nominal, double tolerance) {
  const double dev = std::abs(static_cast<double>(actual.count() - nominal.count()));
  return dev <= tolerance * static_cast<double>(nominal.count());
}

bool mark_ok(const PulseSegment& s, Ticks nominal, double tol) {
  return s.level == Level::On && near(s.duration, nominal, tol);
}

}  // namespace

std::uint8_t compute_parity(std::uint32_t user_id, std::uint16_t filter_code) {
  if (user_id > kUserIdMask) throw InputError("compute_parity: user_id exceeds 24 bits");
  if (filter_code > kFilterCodeMask) throw InputError("compute_parity: filter exceeds 14 bits");
  const std::uint64_t data = data_word(user_id, filter_code);
  const auto low = static_cast<unsigned>(std::popcount(data & kLowHalfMask) & 1);
  const auto high = static_cast<unsigned>(std::popcount(data >> 19) & 1);
  return static_cast<std::uint8_t>((high << 1) | low);
}

IrFrame::IrFrame(std::uint32_t user_id, std::uint16_t filter_code, std::uint8_t parity)
    : user_id_(user_id), filter_code_(filter_code), parity_(parity) {
  if (user_id > kUserIdMask) throw InputError("IrFrame: user id exceeds 24 bits");
  if (filter_code > kFilterCodeMask) throw InputError("IrFrame: filter code exceeds 14 bits");
  if (parity > 0x3) throw InputError("IrFrame: parity exceeds 2 bits");
  if (compute_parity(user_id, filter_code) != parity) throw InputError("IrFrame: parity mismatch");
}

bool IrFrame::from_word(std::uint64_t word, IrFrame& out) {
  const auto parity = static_cast<std::uint8_t>(word & 0x3);
  const auto filter = static_cast<std::uint16_t>((word >> 2) & kFilterCodeMask);
  const auto user = static_cast<std::uint32_t>((word >> 16) & kUserIdMask);
  if (compute_parity(user, filter) != parity) return false;
  out.user_id_ = user;
  out.filter_code_ = filter;
  out.parity_ = parity;
  return true;
}

std::uint64_t IrFrame::word() const { return (data_word(user_id_, filter_code_) << 2) | parity_; }

std::string IrFrame::hex() const { return fmt::format("{:010X}", word()); }

bool check_parity(const IrFrame& frame) {
  return compute_parity(frame.user_id(), frame.filter_code()) == frame.parity();
}

IrFrame encode_frame_raw(std::uint32_t user_id, std::uint16_t filter_code) {
  if (user_id > kUserIdMask) throw InputError("encode_frame: user_id exceeds 24 bits");
  if (filter_code > kFilterCodeMask) throw InputError("encode_frame: filter exceeds 14 bits");
  return IrFrame(user_id, filter_code, compute_parity(user_id, filter_code));
}

IrFrame encode_frame(std::uint32_t user_id, const DeviceTypeFilter& filter) {
  return encode_frame_raw(user_id, encode_filter(filter));
}

Ticks PulseTrain::total_duration() const {
  Ticks total{0};
  for (const auto& s : segments) total += s.duration;
  return total;
}

bool PulseTrain::well_formed() const {
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (segments[i].duration <= Ticks::zero()) return false;
    if (i > 0 && segments[i].level == segments[i - 1].level) return false;
  }
  return true;
}

PulseTrain frame_to_pulses(const IrFrame& frame) { return word_to_pulses(frame.word()); }

PulseTrain word_to_pulses(std::uint64_t word) {
  PulseTrain train;
  train.segments.reserve(2 + 2 * kFrameBits + 1);
  train.segments.push_back({Level::On, nec::kLeadMark});
  train.segments.push_back({Level::Off, nec::kLeadSpace});
  for (int bit = kFrameBits - 1; bit >= 0; --bit) {
    const bool one = (word >> bit) & 1;
    train.segments.push_back({Level::On, nec::kBitMark});
    train.segments.push_back({Level::Off, one ? nec::kOneSpace : nec::kZeroSpace});
  }
  train.segments.push_back({Level::On, nec::kStopMark});
  return train;
}

DecodeResult pulses_to_frame(const PulseTrain& pulses, double tolerance) {
  if (!(tolerance >= 0.0 && tolerance < 0.5)) throw InputError("pulses_to_frame: tolerance must lie in [0, 0.5)");
  const auto& seg = pulses.segments;
  if (seg.size() < 2 || !mark_ok(seg[0], nec::kLeadMark, tolerance) || seg[1].level != Level::Off ||
      !near(seg[1].duration, nec::kLeadSpace, tolerance)) {
    return Undetectable{};
  }
  if (seg.size() < 2 + 2 * kFrameBits + 1) return PartiallyDecodable{};

  std::uint64_t word = 0;
  for (int i = 0; i < kFrameBits; ++i) {
    const auto& mark = seg[2 + 2 * i];
    const auto& space = seg[3 + 2 * i];
    if (!mark_ok(mark, nec::kBitMark, tolerance) || space.level != Level::Off) return PartiallyDecodable{};
    std::uint64_t bit;
    if (near(space.duration, nec::kZeroSpace, tolerance)) {
      bit = 0;
    } else if (near(space.duration, nec::kOneSpace, tolerance)) {
      bit = 1;
    } else {
      return PartiallyDecodable{};
    }
    word = (word << 1) | bit;
  }
  if (!mark_ok(seg[2 + 2 * kFrameBits], nec::kStopMark, tolerance)) return PartiallyDecodable{};

  IrFrame frame = encode_frame_raw(0, 0);
  if (!IrFrame::from_word(word, frame)) return PartiallyDecodable{};
  return frame;
}

Ticks frame_duration(const IrFrame& frame) {
  const int ones = std::popcount(frame.word());
  const int zeros = kFrameBits - ones;
  return nec::kLeadMark + nec::kLeadSpace + nec::kStopMark + zeros * (nec::kBitMark + nec::kZeroSpace) +
         ones * (nec::kBitMark + nec::kOneSpace);
}

double frame_duration_ms(const IrFrame& frame) { return to_ms(frame_duration(frame)); }

}  // namespace quicktalk
