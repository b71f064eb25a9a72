#include "quicktalk/iot_device.hpp"

namespace quicktalk {

std::string_view to_string(IotPhase p) {
  switch (p) {
    case IotPhase::Dormant: return "DORMANT";
    case IotPhase::Beaconing: return "BEACONING";
    case IotPhase::Session: return "SESSION";
    case IotPhase::DormantAgain: return "DORMANT_AGAIN";
  }
  return "?";
}

double EnergyLedger::total_mj() const {
  double total = 0;
  for (const auto& [phase, mj] : millijoules) total += mj;
  return total;
}

IotDevice::IotDevice(Engine& engine, WifiMedium& medium, IotDeviceConfig config, CommandProcessor processor)
    : engine_(engine), medium_(medium), config_(std::move(config)), processor_(std::move(processor)),
      phase_since_(engine.now()) {}

bool IotDevice::on_ir_frame(const DecodeResult& result) {
  const auto* frame = std::get_if<IrFrame>(&result);
  if (frame == nullptr || !check_parity(*frame)) return false;
  const auto filter = try_decode_filter(frame->filter_code());
  if (!filter || !matches(*filter, config_.type)) return false;
  ++ir_triggers_;
  start_beaconing(frame->user_id());
  return true;
}

bool IotDevice::beaconing_for(std::uint32_t user_id) const {
  auto it = users_.find(user_id);
  return it != users_.end() && it->second.beaconing;
}

bool IotDevice::in_session_with(std::uint32_t user_id) const {
  auto it = users_.find(user_id);
  return it != users_.end() && !it->second.beaconing;
}

void IotDevice::start_beaconing(std::uint32_t user_id) {
  drop_user(user_id);
  auto& u = users_[user_id];
  u.beaconing = true;
  u.beacon_start = engine_.now() + config_.processing;
  u.beacon_timer = engine_.schedule(config_.processing, "iot.beacon", [this, user_id] { send_beacon(user_id); });
  u.sweep_deadline = engine_.schedule_at(u.beacon_start + config_.sweep_timeout, "iot.sweep_timeout",
                                         [this, user_id] { drop_user(user_id); });
  refresh_phase();
}

void IotDevice::send_beacon(std::uint32_t user_id) {
  auto it = users_.find(user_id);
  if (it == users_.end() || !it->second.beaconing) return;
  auto& u = it->second;
  auto payload = encode(BeaconMsg{user_id, config_.id});
  const auto airtime = frame_airtime(payload.size(), PhyRate::Basic1Mbps);
  medium_.broadcast({config_.id, config_.home_channel, FrameKind::Beacon, std::move(payload), airtime, std::nullopt});
  ++beacons_sent_;
  const SimTime next = engine_.now() + config_.beacon_interval;
  if (next - u.beacon_start < config_.sweep_timeout) {
    u.beacon_timer = engine_.schedule_at(next, "iot.beacon", [this, user_id] { send_beacon(user_id); });
  } else {
    u.beacon_timer = {};
  }
}

void IotDevice::enter_session(std::uint32_t user_id) {
  auto& u = users_.at(user_id);
  if (u.beaconing) {
    u.beaconing = false;
    engine_.cancel(u.beacon_timer);
    engine_.cancel(u.sweep_deadline);
    u.beacon_timer = {};
    u.sweep_deadline = {};
  }
  arm_session_timer(user_id);
  refresh_phase();
}

void IotDevice::arm_session_timer(std::uint32_t user_id) {
  auto& u = users_.at(user_id);
  engine_.cancel(u.session_deadline);
  u.session_deadline = engine_.schedule(config_.session_timeout, "iot.session_timeout",
                                        [this, user_id] { drop_user(user_id); });
}

void IotDevice::drop_user(std::uint32_t user_id) {
  auto it = users_.find(user_id);
  if (it == users_.end()) return;
  engine_.cancel(it->second.beacon_timer);
  engine_.cancel(it->second.sweep_deadline);
  engine_.cancel(it->second.session_deadline);
  users_.erase(it);
  refresh_phase();
}

void IotDevice::on_frame(const BroadcastFrame& frame) {
  if (frame.channel != config_.home_channel) return;
  if (frame.kind == FrameKind::Ack) {
    auto ack = decode_ack(frame.payload);
    if (!ack || ack->device_id != config_.id) return;
    if (beaconing_for(ack->user_id)) enter_session(ack->user_id);
  } else if (frame.kind == FrameKind::Command) {
    auto cmd = decode_command(frame.payload);
    if (!cmd || cmd->device_id != config_.id || !users_.contains(cmd->user_id)) return;
    ++commands_received_;
    // A command also acknowledges the beacon when the ACK itself was lost.
    enter_session(cmd->user_id);
    engine_.schedule(config_.processing, "iot.respond", [this, cmd = std::move(*cmd)]() mutable {
      handle_command(std::move(cmd));
    });
  }
}

void IotDevice::handle_command(CommandMsg cmd) {
  auto it = users_.find(cmd.user_id);
  if (it == users_.end()) return;
  auto& answered = it->second.answered;
  auto prior = answered.find(cmd.txn_id);
  if (prior == answered.end()) {
    auto result = processor_(cmd.body);
    ResponseMsg resp{cmd.user_id, config_.id, cmd.txn_id, result.status, std::move(result.body)};
    prior = answered.emplace(cmd.txn_id, std::move(resp)).first;
  }
  auto payload = encode(prior->second);
  const auto airtime = frame_airtime(payload.size(), PhyRate::Basic1Mbps);
  medium_.broadcast({config_.id, config_.home_channel, FrameKind::Response, std::move(payload), airtime, std::nullopt});
  ++responses_sent_;
}

double IotDevice::power_mw(IotPhase p) const {
  const auto& e = config_.energy;
  return (p == IotPhase::Beaconing || p == IotPhase::Session) ? e.ir_receiver_mw + e.wifi_active_mw
                                                               : e.ir_receiver_mw;
}

void IotDevice::refresh_phase() {
  IotPhase next;
  bool any_beaconing = false;
  for (const auto& [user, state] : users_) any_beaconing |= state.beaconing;
  if (any_beaconing) {
    next = IotPhase::Beaconing;
  } else if (!users_.empty()) {
    next = IotPhase::Session;
  } else {
    next = phase_ == IotPhase::Dormant ? IotPhase::Dormant : IotPhase::DormantAgain;
  }
  if (next == phase_) return;
  const double seconds = to_seconds(engine_.now() - phase_since_);
  energy_mj_[phase_] += power_mw(phase_) * seconds;
  ir_mj_ += config_.energy.ir_receiver_mw * seconds;
  phase_ = next;
  phase_since_ = engine_.now();
}

EnergyLedger IotDevice::energy_report() const {
  EnergyLedger ledger;
  ledger.ir_receiver_mw = config_.energy.ir_receiver_mw;
  ledger.wifi_active_mw = config_.energy.wifi_active_mw;
  ledger.millijoules = energy_mj_;
  const double seconds = to_seconds(engine_.now() - phase_since_);
  ledger.millijoules[phase_] += power_mw(phase_) * seconds;
  ledger.ir_receiver_mj = ir_mj_ + config_.energy.ir_receiver_mw * seconds;
  return ledger;
}

}  // namespace quicktalk
