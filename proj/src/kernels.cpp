#include "quicktalk/kernels.hpp"

#include <algorithm>
#include <limits>

#include "quicktalk/random.hpp"

namespace quicktalk {

namespace {

struct FrameCheck {
  bool roundtrip_ok;
  std::int64_t ticks;
  bool duration_ok;
  std::uint64_t flips;
  std::uint64_t accepted;
};

FrameCheck check_frame(const IrFrame& frame, bool with_flips) {
  FrameCheck c{};
  const PulseTrain train = frame_to_pulses(frame);
  const DecodeResult back = pulses_to_frame(train);
  c.roundtrip_ok = is_decodable(back) && std::get<IrFrame>(back) == frame;
  c.ticks = frame_duration(frame).count();
  c.duration_ok = train.total_duration().count() == c.ticks;
  if (with_flips) {
    for (int bit = 0; bit < kFrameBits; ++bit) {
      const DecodeResult r = pulses_to_frame(word_to_pulses(frame.word() ^ (std::uint64_t{1} << bit)));
      ++c.flips;
      if (is_decodable(r)) ++c.accepted;
    }
  }
  return c;
}

}  // namespace

IrFrame sweep_frame(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t x = splitmix64(splitmix64(seed) ^ (index * 0x9E3779B97F4A7C15ULL));
  return encode_frame_raw(static_cast<std::uint32_t>(x & kUserIdMask), static_cast<std::uint16_t>((x >> 24) & 0x3FFF));
}

CodecSweepStats codec_sweep_serial(std::uint64_t seed, std::uint64_t frames, bool with_flips) {
  CodecSweepStats s;
  s.frames = frames;
  s.min_ticks = frames ? std::numeric_limits<std::int64_t>::max() : 0;
  for (std::uint64_t i = 0; i < frames; ++i) {
    const FrameCheck c = check_frame(sweep_frame(seed, i), with_flips);
    s.roundtrip_failures += c.roundtrip_ok ? 0 : 1;
    s.total_ticks += c.ticks;
    s.min_ticks = std::min(s.min_ticks, c.ticks);
    s.max_ticks = std::max(s.max_ticks, c.ticks);
    s.duration_mismatches += c.duration_ok ? 0 : 1;
    s.flips_checked += c.flips;
    s.flips_accepted += c.accepted;
  }
  return s;
}

CodecSweepStats codec_sweep_parallel(std::uint64_t seed, std::uint64_t frames, bool with_flips) {
  std::uint64_t failures = 0, mismatches = 0, flips = 0, accepted = 0;
  std::int64_t total = 0;
  std::int64_t lo = frames ? std::numeric_limits<std::int64_t>::max() : 0;
  std::int64_t hi = 0;
  const auto n = static_cast<std::int64_t>(frames);
#pragma omp parallel for schedule(static) reduction(+ : failures, mismatches, flips, accepted, total) \
    reduction(min : lo) reduction(max : hi)
  for (std::int64_t i = 0; i < n; ++i) {
    const FrameCheck c = check_frame(sweep_frame(seed, static_cast<std::uint64_t>(i)), with_flips);
    failures += c.roundtrip_ok ? 0 : 1;
    total += c.ticks;
    lo = std::min(lo, c.ticks);
    hi = std::max(hi, c.ticks);
    mismatches += c.duration_ok ? 0 : 1;
    flips += c.flips;
    accepted += c.accepted;
  }
  CodecSweepStats s;
  s.frames = frames;
  s.roundtrip_failures = failures;
  s.total_ticks = total;
  s.min_ticks = lo;
  s.max_ticks = hi;
  s.duration_mismatches = mismatches;
  s.flips_checked = flips;
  s.flips_accepted = accepted;
  return s;
}

}  // namespace quicktalk
