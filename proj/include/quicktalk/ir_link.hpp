#pragma once

#include <map>
#include <string_view>

#include "quicktalk/ir_codec.hpp"
#include "quicktalk/random.hpp"

namespace quicktalk {

struct IrGeometry {
  double distance_m = 1.0;
  double tx_angle_deg = 0.0;  // transmitter off-axis
  double rx_angle_deg = 0.0;  // receiver off-axis

  /// Throws InputError on negative distance or angles outside [-180, 180].
  void validate() const;
};

enum class IrProfile { Indoor, OutdoorShaded };

std::string_view to_string(IrProfile p);

/// Decodable cone and range of the IR channel for one environment profile.
struct IrEnvironment {
  IrProfile profile = IrProfile::Indoor;
  double max_range_m = 6.0;
  /// Decodable cone half-angle (degrees) keyed by distance (meters); linear
  /// interpolation between keys, clamped at both ends.
  std::map<double, double> cone_halfangle_deg{{1.0, 25.0}, {3.0, 15.0}, {5.0, 10.0}};
  /// Share of the non-decodable mass in the ramp region that still shows a
  /// lead code.
  double partial_share = 0.5;
  /// Receiver off-axis angles up to this value do not affect decodability.
  double rx_flat_deg = 60.0;
  /// Receiver off-axis angles beyond this value are undetectable.
  double rx_cutoff_deg = 90.0;

  static IrEnvironment indoor();
  static IrEnvironment outdoor_shaded();

  double cone_halfangle(double distance_m) const;
  /// Throws ConfigError if the table is empty, not non-increasing in
  /// distance, or any knob is out of range.
  void validate() const;
};

enum class IrOutcome { Decode, Partial, Undetect };

struct OutcomeProbabilities {
  double decode = 0;
  double partial = 0;
  double undetect = 1;
};

OutcomeProbabilities outcome_probabilities(const IrGeometry& geom, const IrEnvironment& env);

IrOutcome sample_outcome(const IrGeometry& geom, const IrEnvironment& env, RandomStream& rng);

/// Realizes an outcome as concrete corruption of a clean train: Decode leaves
/// it unchanged, Partial deforms one to three bit spaces to an ambiguous
/// length, Undetect halves the lead mark.
PulseTrain apply_outcome(PulseTrain train, IrOutcome outcome, RandomStream& rng);

}  // namespace quicktalk
