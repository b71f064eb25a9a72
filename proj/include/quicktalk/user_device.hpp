#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "quicktalk/device_filter.hpp"
#include "quicktalk/ir_codec.hpp"
#include "quicktalk/sim_engine.hpp"
#include "quicktalk/wifi_medium.hpp"

namespace quicktalk {

enum class UserPhase { Idle, IrSent, Sweeping, Commanding, Done, Failed };

std::string_view to_string(UserPhase p);

/// Thrown when a transaction is started while another one is in flight.
class BusyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct UserDeviceConfig {
  std::uint32_t user_id = 0xA1B2C3;
  int k_top = 4;
  int rounds = 3;
  Ticks dwell = std::chrono::milliseconds(50);
  Ticks retx_interval = std::chrono::milliseconds(250);
  Ticks command_timeout = std::chrono::seconds(5);
  /// IR service to WiFi service hand-over.
  Ticks context_switch = std::chrono::milliseconds(3);
  /// Packet extraction after a capture.
  Ticks processing = std::chrono::milliseconds(3);

  void validate() const;
};

/// Channel visiting order for one search: the top-k RSSI channels rotated to
/// a random start, then the remaining channels ascending; repeated `rounds`
/// times.
struct SweepPlan {
  std::vector<Channel> round;
  int rounds = 1;
  std::size_t start_index = 0;

  std::size_t size() const { return round.size() * static_cast<std::size_t>(rounds); }
  Channel at(std::size_t step) const { return round[step % round.size()]; }
};

SweepPlan build_sweep_plan(std::span<const ChannelRssi> rssi, int k_top, int rounds, RandomStream& rng);
/// Deterministic variant with an explicit rotation index into the top-k list.
SweepPlan build_sweep_plan_at(std::span<const ChannelRssi> rssi, int k_top, int rounds, std::size_t start_index);

/// Delivers an emitted pulse train to every IoT receiver in range. Called at
/// emission start.
using IrEmitter = std::function<void(const PulseTrain&)>;

/// User-side protocol: IR pinpoint, channel sweep in monitor mode, then
/// command delivery with retransmission. One transaction at a time.
class UserDevice {
 public:
  UserDevice(Engine& engine, WifiMedium& medium, NodeId node, UserDeviceConfig config, IrEmitter emitter);
  UserDevice(const UserDevice&) = delete;
  UserDevice& operator=(const UserDevice&) = delete;

  /// Starts a transaction now and returns its id. Throws BusyError unless the
  /// device is idle or finished.
  std::uint32_t start_quicktalk(std::vector<std::uint8_t> command, const DeviceTypeFilter& filter);

  void on_frame(const BroadcastFrame& frame);

  UserPhase phase() const { return phase_; }
  bool busy() const;
  std::optional<Channel> detected_channel() const { return detected_channel_; }
  std::optional<NodeId> target_device() const { return target_; }
  const SweepPlan& plan() const { return plan_; }
  NodeId node() const { return node_; }
  const UserDeviceConfig& config() const { return config_; }

  const std::vector<TransactionRecord>& records() const { return records_; }
  void set_completion_handler(std::function<void(const TransactionRecord&)> handler) {
    on_complete_ = std::move(handler);
  }

  /// IR emission time of the current or last transaction.
  Ticks last_ir_duration() const { return ir_duration_; }

 private:
  void begin_sweep();
  void visit(std::size_t step);
  void on_detect(const BroadcastFrame& frame, NodeId device);
  void send_ack_and_command();
  void send_command();
  void finish(bool success);

  Engine& engine_;
  WifiMedium& medium_;
  NodeId node_;
  UserDeviceConfig config_;
  IrEmitter emitter_;
  RandomStream& rng_;

  UserPhase phase_ = UserPhase::Idle;
  std::uint32_t next_txn_ = 1;
  std::uint32_t txn_ = 0;
  std::vector<std::uint8_t> command_;
  SweepPlan plan_;
  std::optional<Channel> detected_channel_;
  std::optional<NodeId> target_;
  SimTime ir_start_{0};
  Ticks ir_duration_{0};
  SimTime wifi_start_{0};
  Ticks t_search_{0};
  SimTime first_command_{0};
  Ticks t_command_{0};
  int attempts_ = 0;
  bool response_seen_ = false;
  EventHandle step_timer_;
  EventHandle retx_timer_;
  EventHandle timeout_timer_;
  std::vector<TransactionRecord> records_;
  std::function<void(const TransactionRecord&)> on_complete_;
};

}  // namespace quicktalk
