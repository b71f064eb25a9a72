#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "quicktalk/sim_engine.hpp"
#include "quicktalk/time.hpp"

namespace quicktalk {

using NodeId = std::uint32_t;

/// A 2.4 GHz channel number, 1..11.
class Channel {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 11;
  /// Throws InputError outside 1..11.
  explicit Channel(int number);
  int number() const { return number_; }
  auto operator<=>(const Channel&) const = default;

 private:
  int number_;
};

enum class NodeMode { Monitor, Normal };
enum class FrameKind { Beacon, Ack, Command, Response, Background };
enum class PhyRate { Basic1Mbps, Ofdm54Mbps };

std::string_view to_string(FrameKind k);

constexpr std::size_t kMaxPayloadBytes = 1500;
/// MAC header (24) plus FCS (4).
constexpr std::size_t kMacOverheadBytes = 28;

/// On-air time of one frame: long-preamble DSSS at 1 Mbps, or OFDM at 54 Mbps
/// (20 us preamble, 4 us symbols of 216 bits incl. 22 service/tail bits).
Ticks frame_airtime(std::size_t payload_bytes, PhyRate rate);

struct BroadcastFrame {
  NodeId src = 0;
  Channel channel{1};
  FrameKind kind = FrameKind::Background;
  std::vector<std::uint8_t> payload;
  Ticks airtime{1};
  /// Set for unicast background frames; NORMAL-mode nodes only receive frames
  /// addressed to them or to everyone.
  std::optional<NodeId> dst;
};

struct MediumConfig {
  Ticks switch_delay = std::chrono::milliseconds(40);
  /// Base per-frame loss probability.
  double p0 = 0.0;
  /// Extra loss per unit of channel utilization.
  double k = 0.3;
  /// Trailing window for channel_load.
  Ticks load_window = std::chrono::seconds(1);
  /// Beacon RSSI seen from the user's position, per channel (dBm).
  std::map<int, double> ap_rssi_dbm;

  /// Throws ConfigError on out-of-range knobs.
  void validate() const;
};

struct NodeAttachment {
  NodeId node = 0;
  Channel channel{1};
  NodeMode mode = NodeMode::Monitor;
  std::optional<SimTime> switching_until;
};

struct DeliveryReport {
  NodeId receiver;
  bool delivered;
  bool operator==(const DeliveryReport&) const = default;
};

struct ChannelRssi {
  Channel channel;
  double rssi_dbm;
};

/// Eleven-channel broadcast medium. Owned by one Engine and mutated only from
/// its events.
class WifiMedium {
 public:
  using Receiver = std::function<void(const BroadcastFrame&)>;

  WifiMedium(Engine& engine, MediumConfig config);

  const MediumConfig& config() const { return config_; }

  /// Throws ConfigError on a duplicate node id.
  const NodeAttachment& attach(NodeId node, Channel channel, NodeMode mode, Receiver receiver = {});
  void set_receiver(NodeId node, Receiver receiver);
  void set_mode(NodeId node, NodeMode mode);

  /// Node is deaf and mute for switch_delay; returns when it becomes usable.
  /// Switching to the current channel costs the same.
  SimTime set_channel(NodeId node, Channel channel);

  bool is_switching(NodeId node, SimTime at) const;
  const NodeAttachment& attachment(NodeId node) const;

  /// Sends a frame now. Transmissions on a channel are serialized; the frame
  /// is delivered when its airtime ends. Each eligible receiver is decided
  /// independently with probability 1 - loss_probability(channel). Throws
  /// InputError if the sender is unknown, switching or on another channel.
  std::vector<DeliveryReport> broadcast(BroadcastFrame frame);

  /// Configured AP RSSI entries, strongest first (ties by channel).
  std::vector<ChannelRssi> scan_rssi(NodeId node) const;

  /// Fraction of [now - window, now] during which the channel carried frames.
  double channel_load(Channel channel, Ticks window) const;
  double channel_load(Channel channel) const { return channel_load(channel, config_.load_window); }

  /// clamp(p0 + k * load, 0, 0.99).
  double loss_probability(Channel channel) const;

  std::size_t frames_sent(NodeId node) const;
  std::size_t frames_sent(NodeId node, FrameKind kind) const;
  std::size_t frames_sent_total() const { return sent_total_; }
  std::size_t frames_delivered() const { return delivered_total_; }

  /// Called for every transmission with its on-air start time.
  void set_send_observer(std::function<void(const BroadcastFrame&, SimTime)> observer) {
    send_observer_ = std::move(observer);
  }

 private:
  struct Node {
    NodeAttachment attachment;
    Receiver receiver;
  };
  struct Busy {
    SimTime start;
    SimTime end;
  };

  Node& node(NodeId id);
  const Node& node(NodeId id) const;
  void prune(int channel) const;

  Engine& engine_;
  MediumConfig config_;
  std::array<RandomStream*, Channel::kMax + 1> loss_rng_{};
  std::map<NodeId, Node> nodes_;
  std::map<int, SimTime> busy_until_;
  mutable std::map<int, std::deque<Busy>> history_;
  std::map<std::pair<NodeId, FrameKind>, std::size_t> sent_;
  std::size_t sent_total_ = 0;
  std::size_t delivered_total_ = 0;
  std::function<void(const BroadcastFrame&, SimTime)> send_observer_;
};

}  // namespace quicktalk
