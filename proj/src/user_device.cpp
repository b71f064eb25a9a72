#include "quicktalk/user_device.hpp"

#include <algorithm>
#include <string>

#include "quicktalk/error.hpp"
#include "quicktalk/protocol.hpp"

namespace quicktalk {

std::string_view to_string(UserPhase p) {
  switch (p) {
    case UserPhase::Idle: return "IDLE";
    case UserPhase::IrSent: return "IR_SENT";
    case UserPhase::Sweeping: return "SWEEPING";
    case UserPhase::Commanding: return "COMMANDING";
    case UserPhase::Done: return "DONE";
    case UserPhase::Failed: return "FAILED";
  }
  return "?";
}

void UserDeviceConfig::validate() const {
  if (user_id > kUserIdMask) throw ConfigError("user.id exceeds 24 bits");
  if (k_top < 0 || k_top > Channel::kMax) throw ConfigError("user.k_top must lie in 0..11");
  if (rounds < 1) throw ConfigError("user.rounds must be at least 1");
  if (dwell <= Ticks::zero()) throw ConfigError("user.dwell_ms must be positive");
  if (retx_interval <= Ticks::zero()) throw ConfigError("user.retx_ms must be positive");
  if (command_timeout <= Ticks::zero()) throw ConfigError("user.timeout_ms must be positive");
  if (context_switch < Ticks::zero() || processing < Ticks::zero()) {
    throw ConfigError("user processing delays must be non-negative");
  }
}

SweepPlan build_sweep_plan_at(std::span<const ChannelRssi> rssi, int k_top, int rounds, std::size_t start_index) {
  if (rounds < 1) throw InputError("build_sweep_plan: rounds must be at least 1");
  std::vector<Channel> top;
  for (const auto& entry : rssi) {
    if (static_cast<int>(top.size()) >= k_top) break;
    if (std::find(top.begin(), top.end(), entry.channel) == top.end()) top.push_back(entry.channel);
  }
  SweepPlan plan;
  plan.rounds = rounds;
  if (!top.empty()) {
    plan.start_index = start_index % top.size();
    std::rotate(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(plan.start_index), top.end());
  }
  plan.round = top;
  for (int ch = Channel::kMin; ch <= Channel::kMax; ++ch) {
    if (std::find(top.begin(), top.end(), Channel(ch)) == top.end()) plan.round.emplace_back(ch);
  }
  return plan;
}

SweepPlan build_sweep_plan(std::span<const ChannelRssi> rssi, int k_top, int rounds, RandomStream& rng) {
  const auto k = static_cast<std::size_t>(std::clamp<int>(k_top, 0, static_cast<int>(rssi.size())));
  const std::size_t start = k > 0 ? static_cast<std::size_t>(rng.below(k)) : 0;
  return build_sweep_plan_at(rssi, k_top, rounds, start);
}

UserDevice::UserDevice(Engine& engine, WifiMedium& medium, NodeId node, UserDeviceConfig config, IrEmitter emitter)
    : engine_(engine), medium_(medium), node_(node), config_(config), emitter_(std::move(emitter)),
      rng_(engine.stream("user." + std::to_string(node))) {
  config_.validate();
}

bool UserDevice::busy() const {
  return phase_ == UserPhase::IrSent || phase_ == UserPhase::Sweeping || phase_ == UserPhase::Commanding;
}

std::uint32_t UserDevice::start_quicktalk(std::vector<std::uint8_t> command, const DeviceTypeFilter& filter) {
  if (busy()) throw BusyError("user device already has a transaction in flight");
  const IrFrame frame = encode_frame(config_.user_id, filter);
  txn_ = next_txn_++;
  command_ = std::move(command);
  detected_channel_.reset();
  target_.reset();
  t_search_ = Ticks{0};
  t_command_ = Ticks{0};
  attempts_ = 0;
  response_seen_ = false;

  const PulseTrain pulses = frame_to_pulses(frame);
  ir_start_ = engine_.now();
  ir_duration_ = pulses.total_duration();
  phase_ = UserPhase::IrSent;
  if (emitter_) emitter_(pulses);
  engine_.schedule(ir_duration_ + config_.context_switch, "user.wifi_start", [this] { begin_sweep(); });
  return txn_;
}

void UserDevice::begin_sweep() {
  phase_ = UserPhase::Sweeping;
  wifi_start_ = engine_.now();
  const auto rssi = medium_.scan_rssi(node_);
  plan_ = build_sweep_plan(rssi, config_.k_top, config_.rounds, rng_);
  visit(0);
}

void UserDevice::visit(std::size_t step) {
  if (phase_ != UserPhase::Sweeping) return;
  if (step >= plan_.size()) {
    t_search_ = engine_.now() - wifi_start_;
    t_command_ = config_.command_timeout;
    finish(false);
    return;
  }
  const SimTime ready = medium_.set_channel(node_, plan_.at(step));
  step_timer_ = engine_.schedule_at(ready + config_.dwell, "user.next_channel", [this, step] { visit(step + 1); });
}

void UserDevice::on_frame(const BroadcastFrame& frame) {
  if (frame.kind == FrameKind::Beacon && phase_ == UserPhase::Sweeping && !target_) {
    auto beacon = decode_beacon(frame.payload);
    if (beacon && beacon->user_id == config_.user_id) on_detect(frame, beacon->device_id);
  } else if (frame.kind == FrameKind::Response && phase_ == UserPhase::Commanding && !response_seen_) {
    auto resp = decode_response(frame.payload);
    if (!resp || resp->user_id != config_.user_id || resp->txn_id != txn_ || resp->device_id != *target_) return;
    response_seen_ = true;
    engine_.cancel(retx_timer_);
    engine_.cancel(timeout_timer_);
    engine_.schedule(config_.processing, "user.response", [this] {
      t_command_ = engine_.now() - first_command_;
      finish(true);
    });
  }
}

void UserDevice::on_detect(const BroadcastFrame& frame, NodeId device) {
  engine_.cancel(step_timer_);
  detected_channel_ = frame.channel;
  target_ = device;
  t_search_ = engine_.now() - wifi_start_;
  phase_ = UserPhase::Commanding;
  engine_.schedule(config_.processing, "user.command_start", [this] { send_ack_and_command(); });
}

void UserDevice::send_ack_and_command() {
  auto ack = encode(AckMsg{config_.user_id, *target_});
  const auto airtime = frame_airtime(ack.size(), PhyRate::Basic1Mbps);
  medium_.broadcast({node_, *detected_channel_, FrameKind::Ack, std::move(ack), airtime, std::nullopt});
  first_command_ = engine_.now();
  timeout_timer_ = engine_.schedule(config_.command_timeout, "user.command_timeout", [this] {
    if (phase_ != UserPhase::Commanding || response_seen_) return;
    engine_.cancel(retx_timer_);
    t_command_ = config_.command_timeout;
    finish(false);
  });
  send_command();
}

void UserDevice::send_command() {
  if (phase_ != UserPhase::Commanding || response_seen_) return;
  auto payload = encode(CommandMsg{config_.user_id, *target_, txn_, command_});
  const auto airtime = frame_airtime(payload.size(), PhyRate::Basic1Mbps);
  medium_.broadcast({node_, *detected_channel_, FrameKind::Command, std::move(payload), airtime, std::nullopt});
  ++attempts_;
  retx_timer_ = engine_.schedule(config_.retx_interval, "user.retransmit", [this] { send_command(); });
}

void UserDevice::finish(bool success) {
  TransactionRecord rec;
  rec.txn_id = txn_;
  rec.t_search_ms = to_ms(t_search_);
  rec.t_command_ms = to_ms(t_command_);
  rec.t_e2e_ms = to_ms(ir_duration_ + config_.context_switch + t_search_ + config_.processing + t_command_);
  rec.retx_count = std::max(0, attempts_ - 1);
  rec.success = success;
  rec.reached_command = attempts_ > 0;
  rec.seed = engine_.master_seed();
  if (success) {
    const SimTime expected = ir_start_ + ir_duration_ + config_.context_switch + t_search_ + config_.processing + t_command_;
    if (expected != engine_.now()) throw SimulationError("user device: end-to-end delay does not decompose");
  }
  phase_ = success ? UserPhase::Done : UserPhase::Failed;
  if (!success) {
    detected_channel_.reset();
  }
  records_.push_back(rec);
  if (on_complete_) on_complete_(rec);
}

}  // namespace quicktalk
