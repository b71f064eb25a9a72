#pragma once

#include <cstdint>

#include "quicktalk/ir_codec.hpp"

namespace quicktalk {

/// Aggregate over a sweep of pseudo-random frames. Integer fields only, so the
/// serial and parallel kernels must agree exactly.
struct CodecSweepStats {
  std::uint64_t frames = 0;
  /// encode -> pulses -> decode did not reproduce the frame.
  std::uint64_t roundtrip_failures = 0;
  /// Sum, min and max of frame_duration in ticks.
  std::int64_t total_ticks = 0;
  std::int64_t min_ticks = 0;
  std::int64_t max_ticks = 0;
  /// frame_duration disagreed with the pulse train length.
  std::uint64_t duration_mismatches = 0;
  /// Single-bit corruptions decoded (0 when flips are disabled).
  std::uint64_t flips_checked = 0;
  /// Corrupted words the decoder reported as a valid frame.
  std::uint64_t flips_accepted = 0;

  bool operator==(const CodecSweepStats&) const = default;
};

/// Frame i of a sweep: user id and raw filter code drawn from a counter-based
/// hash of (seed, i), so any index is reproducible in isolation.
IrFrame sweep_frame(std::uint64_t seed, std::uint64_t index);

/// Round trip, duration and (optionally) all 40 single-bit flips per frame.
CodecSweepStats codec_sweep_serial(std::uint64_t seed, std::uint64_t frames, bool with_flips);
CodecSweepStats codec_sweep_parallel(std::uint64_t seed, std::uint64_t frames, bool with_flips);

}  // namespace quicktalk
