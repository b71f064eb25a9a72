#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "quicktalk/sim_engine.hpp"
#include "quicktalk/wifi_medium.hpp"

namespace quicktalk {

struct CoapSessionConfig {
  NodeId ap = 0;
  NodeId iot = 0;
  Ticks interval = std::chrono::milliseconds(100);
  std::size_t request_bytes = 64;
  std::size_t response_bytes = 64;
  /// Offset of the first request from start().
  Ticks phase{0};
  /// Time the IoT node takes to answer.
  Ticks processing = std::chrono::milliseconds(3);
};

/// Periodic request/response exchange between the AP and one IoT device,
/// carried as unicast background frames at 54 Mbps on the AP channel.
class CoapSession {
 public:
  CoapSession(Engine& engine, WifiMedium& medium, CoapSessionConfig config, Channel channel, std::uint8_t tag);
  CoapSession(const CoapSession&) = delete;
  CoapSession& operator=(const CoapSession&) = delete;

  /// Issues requests at start + phase + n * interval while strictly before
  /// `until`.
  void start(SimTime until);
  void stop();

  /// Frames addressed to this session's IoT node (request side).
  bool on_iot_frame(const BroadcastFrame& frame);
  /// Frames addressed to the AP (response side).
  bool on_ap_frame(const BroadcastFrame& frame);

  const CoapSessionConfig& config() const { return config_; }
  const std::vector<SimTime>& request_times() const { return request_times_; }
  std::size_t responses_sent() const { return responses_sent_; }
  std::size_t pairs_completed() const { return pairs_completed_; }

 private:
  void tick();
  std::vector<std::uint8_t> payload(std::uint32_t seq, bool response, std::size_t size) const;
  bool ours(const BroadcastFrame& frame, bool response, std::uint32_t& seq) const;

  Engine& engine_;
  WifiMedium& medium_;
  CoapSessionConfig config_;
  Channel channel_;
  std::uint8_t tag_;
  SimTime until_{0};
  bool active_ = false;
  std::uint32_t seq_ = 0;
  EventHandle timer_;
  std::vector<SimTime> request_times_;
  std::size_t responses_sent_ = 0;
  std::size_t pairs_completed_ = 0;
};

/// Greedy download at an IoT device, modelled as the residual of the airtime
/// QuickTalk takes from it. TCP dynamics are not simulated.
struct DownloadFlow {
  NodeId iot = 0;
  double nominal_rate_mbps = 18.54;
  /// Effective airtime one QuickTalk transaction costs the download.
  Ticks transaction_cost = Ticks{1'365'200};  // 682.6 ms

  void validate() const;
};

/// nominal * (1 - min(1, transactions * cost / elapsed)).
double download_throughput(const DownloadFlow& flow, std::size_t quicktalk_transactions, Ticks elapsed);

/// Steady-state throughput with QuickTalk every `quicktalk_interval_s`
/// seconds, or the nominal rate when there is no QuickTalk.
double run_download(const DownloadFlow& flow, std::optional<double> quicktalk_interval_s);

/// Least-squares fit of the per-transaction cost c (seconds) in
/// nominal * (1 - c / interval) to measured throughputs.
double fit_transaction_cost_s(double nominal_rate_mbps, std::span<const double> intervals_s,
                              std::span<const double> throughputs_mbps);

}  // namespace quicktalk
