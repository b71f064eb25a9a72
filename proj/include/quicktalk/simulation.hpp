#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "quicktalk/iot_device.hpp"
#include "quicktalk/scenario.hpp"
#include "quicktalk/sim_engine.hpp"

namespace quicktalk {

constexpr NodeId kApNode = 1;
constexpr NodeId kUserNode = 2;
constexpr NodeId kFirstIotNode = 10;

struct IotRunStats {
  std::string name;
  NodeId node = 0;
  std::size_t ir_triggers = 0;
  std::size_t beacons_sent = 0;
  std::size_t responses_sent = 0;
  /// Every frame the device put on the air, background replies included.
  std::size_t frames_sent = 0;
  /// QuickTalk frames only (beacons and responses).
  std::size_t quicktalk_frames_sent = 0;
  EnergyLedger energy;
};

struct RunResult {
  std::string scenario_name;
  std::uint64_t seed = 0;
  std::vector<TransactionRecord> records;
  std::size_t bg_sessions = 0;
  /// Smallest CoAP interval, 0 without sessions.
  double bg_interval_s = 0;
  std::optional<double> download_mbps;
  std::size_t coap_pairs = 0;
  std::vector<IotRunStats> iots;
  std::size_t events = 0;
  std::vector<TraceEntry> trace;
};

struct RunOptions {
  bool trace = false;
};

/// Builds the topology (AP, one user, the configured IoT devices and
/// background sessions) on a fresh engine seeded with `seed` and runs every
/// scheduled transaction to completion.
RunResult run_scenario(const Scenario& scenario, std::uint64_t seed, const RunOptions& options = {});

}  // namespace quicktalk
