#pragma once

#include <chrono>
#include <cstdint>

namespace quicktalk {

/// Simulation time unit: half a microsecond. NEC symbol timings (562.5 us,
/// 1687.5 us) are integral in this unit.
using Ticks = std::chrono::duration<std::int64_t, std::ratio<1, 2'000'000>>;

/// Absolute simulation time is measured as Ticks since the start of a run.
using SimTime = Ticks;

constexpr Ticks half_microseconds(std::int64_t n) { return Ticks{n}; }

inline double to_ms(Ticks t) { return static_cast<double>(t.count()) / 2000.0; }
inline double to_seconds(Ticks t) { return static_cast<double>(t.count()) / 2.0e6; }

// Rounds to the nearest tick.
inline Ticks from_ms(double ms) {
  const double ticks = ms * 2000.0;
  return Ticks{static_cast<std::int64_t>(ticks >= 0 ? ticks + 0.5 : ticks - 0.5)};
}
inline Ticks from_seconds(double s) { return from_ms(s * 1000.0); }

}  // namespace quicktalk
