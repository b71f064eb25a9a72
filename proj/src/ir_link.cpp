#include "quicktalk/ir_link.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "quicktalk/error.hpp"

namespace quicktalk {

namespace {
// Midway between the zero and one space lengths: outside the 25% window of
// both (and outside any tolerance up to 1/3).
constexpr Ticks kAmbiguousSpace{2250};
}  // namespace

void IrGeometry::validate() const {
  if (!(distance_m >= 0.0)) throw InputError("IrGeometry: distance must be non-negative");
  auto angle_ok = [](double a) { return a >= -180.0 && a <= 180.0; };
  if (!angle_ok(tx_angle_deg) || !angle_ok(rx_angle_deg)) {
    throw InputError("IrGeometry: angles must lie in [-180, 180]");
  }
}

std::string_view to_string(IrProfile p) {
  return p == IrProfile::Indoor ? "indoor" : "outdoor";
}

IrEnvironment IrEnvironment::indoor() { return IrEnvironment{}; }

IrEnvironment IrEnvironment::outdoor_shaded() {
  IrEnvironment env;
  env.profile = IrProfile::OutdoorShaded;
  env.max_range_m = 2.5;
  return env;
}

double IrEnvironment::cone_halfangle(double d) const {
  if (cone_halfangle_deg.empty()) return 0.0;
  auto hi = cone_halfangle_deg.lower_bound(d);
  if (hi == cone_halfangle_deg.begin()) return hi->second;
  if (hi == cone_halfangle_deg.end()) return std::prev(hi)->second;
  auto lo = std::prev(hi);
  const double t = (d - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

void IrEnvironment::validate() const {
  if (!(max_range_m > 0.0)) throw ConfigError("ir: max range must be positive");
  if (cone_halfangle_deg.empty()) throw ConfigError("ir: cone table is empty");
  double prev = INFINITY;
  for (const auto& [d, alpha] : cone_halfangle_deg) {
    if (d < 0.0 || !(alpha > 0.0)) throw ConfigError("ir: cone table entries must be positive");
    if (alpha > prev) throw ConfigError("ir: cone half-angle must be non-increasing in distance");
    prev = alpha;
  }
  if (!(partial_share >= 0.0 && partial_share <= 1.0)) throw ConfigError("ir: partial share must lie in [0, 1]");
  if (!(rx_flat_deg >= 0.0 && rx_flat_deg < rx_cutoff_deg && rx_cutoff_deg <= 180.0)) {
    throw ConfigError("ir: receiver angle limits must satisfy 0 <= flat < cutoff <= 180");
  }
}

OutcomeProbabilities outcome_probabilities(const IrGeometry& geom, const IrEnvironment& env) {
  const double tx = std::abs(geom.tx_angle_deg);
  const double rx = std::abs(geom.rx_angle_deg);
  const double alpha = env.cone_halfangle(geom.distance_m);
  if (geom.distance_m > env.max_range_m || tx >= 2.0 * alpha || rx > env.rx_cutoff_deg) {
    return {0.0, 0.0, 1.0};
  }

  double decode = tx <= alpha ? 1.0 : (2.0 * alpha - tx) / alpha;
  if (rx > env.rx_flat_deg) decode *= (env.rx_cutoff_deg - rx) / (env.rx_cutoff_deg - env.rx_flat_deg);

  const double rest = 1.0 - decode;
  const double partial = env.partial_share * rest;
  return {decode, partial, rest - partial};
}

IrOutcome sample_outcome(const IrGeometry& geom, const IrEnvironment& env, RandomStream& rng) {
  const auto p = outcome_probabilities(geom, env);
  const double u = rng.uniform01();
  if (u < p.decode) return IrOutcome::Decode;
  if (u < p.decode + p.partial) return IrOutcome::Partial;
  return IrOutcome::Undetect;
}

PulseTrain apply_outcome(PulseTrain train, IrOutcome outcome, RandomStream& rng) {
  switch (outcome) {
    case IrOutcome::Decode:
      break;
    case IrOutcome::Undetect:
      if (!train.segments.empty()) train.segments.front().duration /= 2;
      break;
    case IrOutcome::Partial: {
      const std::size_t bits = (train.segments.size() >= 3) ? (train.segments.size() - 3) / 2 : 0;
      if (bits == 0) break;
      const auto count = std::min<std::size_t>(1 + rng.below(3), bits);
      std::vector<std::size_t> chosen;
      while (chosen.size() < count) {
        const auto b = static_cast<std::size_t>(rng.below(bits));
        if (std::find(chosen.begin(), chosen.end(), b) == chosen.end()) chosen.push_back(b);
      }
      for (auto b : chosen) train.segments[3 + 2 * b].duration = kAmbiguousSpace;
      break;
    }
  }
  return train;
}

}  // namespace quicktalk
