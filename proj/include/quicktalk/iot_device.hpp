#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string_view>

#include "quicktalk/device_filter.hpp"
#include "quicktalk/ir_codec.hpp"
#include "quicktalk/protocol.hpp"
#include "quicktalk/sim_engine.hpp"
#include "quicktalk/wifi_medium.hpp"

namespace quicktalk {

enum class IotPhase { Dormant, Beaconing, Session, DormantAgain };

std::string_view to_string(IotPhase p);

struct EnergyProfile {
  double ir_receiver_mw = 15.8;
  /// WiFi service running (Raspberry Pi 2 idle draw).
  double wifi_active_mw = 1100.0;
};

/// Accumulated energy per phase. Dormant phases draw the IR receiver only;
/// active phases draw IR receiver plus WiFi.
struct EnergyLedger {
  double ir_receiver_mw = 0;
  double wifi_active_mw = 0;
  std::map<IotPhase, double> millijoules;
  /// Portion of the total drawn by the IR receiver.
  double ir_receiver_mj = 0;

  double total_mj() const;
};

struct IotDeviceConfig {
  NodeId id = 0;
  DeviceType type{1, 1, 1};
  Channel home_channel{1};
  bool registered = false;
  Ticks beacon_interval = std::chrono::milliseconds(25);
  Ticks sweep_timeout = std::chrono::seconds(5);
  Ticks session_timeout = std::chrono::seconds(10);
  Ticks processing = std::chrono::milliseconds(3);
  EnergyProfile energy;
};

/// IoT-side protocol: parity and type gate on IR, beacon the captured user id
/// on the home channel until acknowledged, then answer commands. Sessions are
/// keyed by user id so several users can be served.
class IotDevice {
 public:
  IotDevice(Engine& engine, WifiMedium& medium, IotDeviceConfig config,
            CommandProcessor processor = echo_processor());
  IotDevice(const IotDevice&) = delete;
  IotDevice& operator=(const IotDevice&) = delete;

  const IotDeviceConfig& config() const { return config_; }
  NodeId id() const { return config_.id; }

  /// Gate decision for one IR reception. Returns true if the frame was
  /// decodable, parity-valid and matched this device's type.
  bool on_ir_frame(const DecodeResult& result);

  /// QuickTalk frames captured on the home channel.
  void on_frame(const BroadcastFrame& frame);

  IotPhase phase() const { return phase_; }
  bool beaconing_for(std::uint32_t user_id) const;
  bool in_session_with(std::uint32_t user_id) const;

  /// Snapshot up to the current simulation time.
  EnergyLedger energy_report() const;

  std::size_t ir_triggers() const { return ir_triggers_; }
  std::size_t beacons_sent() const { return beacons_sent_; }
  std::size_t commands_received() const { return commands_received_; }
  std::size_t responses_sent() const { return responses_sent_; }

 private:
  struct UserState {
    bool beaconing = false;
    SimTime beacon_start{0};
    EventHandle beacon_timer;
    EventHandle sweep_deadline;
    EventHandle session_deadline;
    std::map<std::uint32_t, ResponseMsg> answered;
  };

  void start_beaconing(std::uint32_t user_id);
  void send_beacon(std::uint32_t user_id);
  void enter_session(std::uint32_t user_id);
  void arm_session_timer(std::uint32_t user_id);
  void drop_user(std::uint32_t user_id);
  void handle_command(CommandMsg cmd);
  void refresh_phase();
  double power_mw(IotPhase p) const;

  Engine& engine_;
  WifiMedium& medium_;
  IotDeviceConfig config_;
  CommandProcessor processor_;
  std::map<std::uint32_t, UserState> users_;
  IotPhase phase_ = IotPhase::Dormant;
  SimTime phase_since_{0};
  std::map<IotPhase, double> energy_mj_;
  double ir_mj_ = 0;
  std::size_t ir_triggers_ = 0;
  std::size_t beacons_sent_ = 0;
  std::size_t commands_received_ = 0;
  std::size_t responses_sent_ = 0;
};

}  // namespace quicktalk
