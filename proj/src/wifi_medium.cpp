#include "quicktalk/wifi_medium.hpp"

#include <algorithm>
#include <memory>

#include "quicktalk/error.hpp"

namespace quicktalk {

Channel::Channel(int number) : number_(number) {
  if (number < kMin || number > kMax) {
    throw InputError("channel " + std::to_string(number) + " is outside 1..11");
  }
}

std::string_view to_string(FrameKind k) {
  switch (k) {
    case FrameKind::Beacon: return "BEACON";
    case FrameKind::Ack: return "ACK";
    case FrameKind::Command: return "COMMAND";
    case FrameKind::Response: return "RESPONSE";
    case FrameKind::Background: return "BACKGROUND";
  }
  return "?";
}

Ticks frame_airtime(std::size_t payload_bytes, PhyRate rate) {
  if (payload_bytes > kMaxPayloadBytes) throw InputError("frame payload exceeds 1500 bytes");
  const auto bits = static_cast<std::int64_t>((payload_bytes + kMacOverheadBytes) * 8);
  switch (rate) {
    case PhyRate::Basic1Mbps:
      // 192 us PLCP preamble + header, then one bit per microsecond.
      return Ticks{2 * (192 + bits)};
    case PhyRate::Ofdm54Mbps: {
      const std::int64_t symbols = (bits + 22 + 215) / 216;
      return Ticks{2 * (20 + 4 * symbols)};
    }
  }
  return Ticks{1};
}

void MediumConfig::validate() const {
  if (!(switch_delay > Ticks::zero())) throw ConfigError("medium.switch_delay_ms must be positive");
  if (!(p0 >= 0.0 && p0 < 1.0)) throw ConfigError("medium.p0 must lie in [0, 1)");
  if (!(k >= 0.0)) throw ConfigError("medium.k must be non-negative");
  if (!(load_window > Ticks::zero())) throw ConfigError("medium load window must be positive");
  for (const auto& [ch, rssi] : ap_rssi_dbm) {
    if (ch < Channel::kMin || ch > Channel::kMax) {
      throw ConfigError("medium.rssi." + std::to_string(ch) + ": channel outside 1..11");
    }
  }
}

WifiMedium::WifiMedium(Engine& engine, MediumConfig config)
    : engine_(engine), config_(std::move(config)) {
  // One loss stream per channel, so traffic on one channel never shifts the
  // loss draws of another.
  for (int ch = Channel::kMin; ch <= Channel::kMax; ++ch) {
    loss_rng_[ch] = &engine.stream("wifi.loss." + std::to_string(ch));
  }
  config_.validate();
}

WifiMedium::Node& WifiMedium::node(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw InputError("node " + std::to_string(id) + " is not attached");
  return it->second;
}

const WifiMedium::Node& WifiMedium::node(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw InputError("node " + std::to_string(id) + " is not attached");
  return it->second;
}

const NodeAttachment& WifiMedium::attach(NodeId id, Channel channel, NodeMode mode, Receiver receiver) {
  auto [it, inserted] = nodes_.try_emplace(id, Node{NodeAttachment{id, channel, mode, std::nullopt}, std::move(receiver)});
  if (!inserted) throw ConfigError("node " + std::to_string(id) + " is already attached");
  return it->second.attachment;
}

void WifiMedium::set_receiver(NodeId id, Receiver receiver) { node(id).receiver = std::move(receiver); }

void WifiMedium::set_mode(NodeId id, NodeMode mode) { node(id).attachment.mode = mode; }

SimTime WifiMedium::set_channel(NodeId id, Channel channel) {
  auto& n = node(id);
  const SimTime done = engine_.now() + config_.switch_delay;
  n.attachment.channel = channel;
  n.attachment.switching_until = done;
  return done;
}

bool WifiMedium::is_switching(NodeId id, SimTime at) const {
  const auto& a = node(id).attachment;
  return a.switching_until && at < *a.switching_until;
}

const NodeAttachment& WifiMedium::attachment(NodeId id) const { return node(id).attachment; }

void WifiMedium::prune(int channel) const {
  auto& h = history_[channel];
  const SimTime horizon = engine_.now() - config_.load_window;
  while (!h.empty() && h.front().end < horizon) h.pop_front();
}

double WifiMedium::channel_load(Channel channel, Ticks window) const {
  if (window <= Ticks::zero()) throw InputError("channel_load: window must be positive");
  prune(channel.number());
  const SimTime now = engine_.now();
  const SimTime from = now - window;
  Ticks busy{0};
  for (const auto& b : history_[channel.number()]) {
    const SimTime s = std::max(b.start, from);
    const SimTime e = std::min(b.end, now);
    if (e > s) busy += e - s;
  }
  return static_cast<double>(busy.count()) / static_cast<double>(window.count());
}

double WifiMedium::loss_probability(Channel channel) const {
  return std::clamp(config_.p0 + config_.k * channel_load(channel), 0.0, 0.99);
}

std::vector<DeliveryReport> WifiMedium::broadcast(BroadcastFrame frame) {
  auto& sender = node(frame.src);
  const SimTime now = engine_.now();
  if (is_switching(frame.src, now)) throw InputError("broadcast: sender is switching channels");
  if (sender.attachment.channel != frame.channel) throw InputError("broadcast: sender is on another channel");
  if (frame.payload.size() > kMaxPayloadBytes) throw InputError("broadcast: payload exceeds 1500 bytes");
  if (frame.airtime <= Ticks::zero()) throw InputError("broadcast: airtime must be positive");

  const int ch = frame.channel.number();
  const double p_loss = loss_probability(frame.channel);
  auto& busy = busy_until_[ch];
  const SimTime start = std::max(now, busy);
  const SimTime end = start + frame.airtime;
  busy = end;
  history_[ch].push_back({start, end});
  ++sent_[{frame.src, frame.kind}];
  ++sent_total_;
  if (send_observer_) send_observer_(frame, start);

  std::vector<DeliveryReport> reports;
  std::vector<NodeId> receivers;
  for (const auto& [id, n] : nodes_) {
    if (id == frame.src || n.attachment.channel != frame.channel) continue;
    if (frame.dst && *frame.dst != id && n.attachment.mode == NodeMode::Normal) continue;
    bool delivered = !is_switching(id, end);
    // One draw per candidate keeps the stream consumption independent of
    // receiver state.
    if (loss_rng_[ch]->bernoulli(p_loss)) delivered = false;
    reports.push_back({id, delivered});
    if (delivered) receivers.push_back(id);
  }

  if (!receivers.empty()) {
    auto shared = std::make_shared<BroadcastFrame>(std::move(frame));
    engine_.schedule_at(end, "deliver", [this, shared, receivers = std::move(receivers)] {
      const SimTime t = engine_.now();
      for (NodeId id : receivers) {
        auto& n = node(id);
        // The receiver may have retuned after the send was decided.
        if (n.attachment.channel != shared->channel || is_switching(id, t)) continue;
        ++delivered_total_;
        if (n.receiver) n.receiver(*shared);
      }
    });
  }
  return reports;
}

std::vector<ChannelRssi> WifiMedium::scan_rssi(NodeId id) const {
  (void)node(id);
  std::vector<ChannelRssi> out;
  for (const auto& [ch, rssi] : config_.ap_rssi_dbm) out.push_back({Channel(ch), rssi});
  std::stable_sort(out.begin(), out.end(), [](const ChannelRssi& a, const ChannelRssi& b) { return a.rssi_dbm > b.rssi_dbm; });
  return out;
}

std::size_t WifiMedium::frames_sent(NodeId id) const {
  std::size_t total = 0;
  for (const auto& [key, count] : sent_) {
    if (key.first == id) total += count;
  }
  return total;
}

std::size_t WifiMedium::frames_sent(NodeId id, FrameKind kind) const {
  auto it = sent_.find({id, kind});
  return it == sent_.end() ? 0 : it->second;
}

}  // namespace quicktalk
