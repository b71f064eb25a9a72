#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "quicktalk/wifi_medium.hpp"

namespace quicktalk {

/// Broadcast payloads exchanged after pinpointing. All integers big-endian;
/// user ids occupy 3 bytes, device ids 4, transaction ids 4.
struct BeaconMsg {
  std::uint32_t user_id;
  NodeId device_id;
  bool operator==(const BeaconMsg&) const = default;
};

struct AckMsg {
  std::uint32_t user_id;
  NodeId device_id;
  bool operator==(const AckMsg&) const = default;
};

struct CommandMsg {
  std::uint32_t user_id;
  NodeId device_id;
  std::uint32_t txn_id;
  std::vector<std::uint8_t> body;
  bool operator==(const CommandMsg&) const = default;
};

enum class ResponseStatus : std::uint8_t { Ok = 0, Malformed = 1, Unsupported = 2 };

struct ResponseMsg {
  std::uint32_t user_id;
  NodeId device_id;
  std::uint32_t txn_id;
  ResponseStatus status = ResponseStatus::Ok;
  std::vector<std::uint8_t> body;
  bool operator==(const ResponseMsg&) const = default;
};

std::vector<std::uint8_t> encode(const BeaconMsg& m);
std::vector<std::uint8_t> encode(const AckMsg& m);
std::vector<std::uint8_t> encode(const CommandMsg& m);
std::vector<std::uint8_t> encode(const ResponseMsg& m);

std::optional<BeaconMsg> decode_beacon(std::span<const std::uint8_t> bytes);
std::optional<AckMsg> decode_ack(std::span<const std::uint8_t> bytes);
std::optional<CommandMsg> decode_command(std::span<const std::uint8_t> bytes);
std::optional<ResponseMsg> decode_response(std::span<const std::uint8_t> bytes);

/// Application-level command handler on the IoT device.
struct CommandResult {
  ResponseStatus status = ResponseStatus::Ok;
  std::vector<std::uint8_t> body;
};
using CommandProcessor = std::function<CommandResult(std::span<const std::uint8_t>)>;

/// Mirrors the command body.
CommandProcessor echo_processor();
/// Understands ON, OFF, TOGGLE and STATE; keeps its own lamp state.
CommandProcessor bulb_processor();
/// Answers READ with a fixed reading.
CommandProcessor sensor_processor(std::string reading = "temp=21.5C");

std::vector<std::uint8_t> to_bytes(std::string_view s);
std::string to_text(std::span<const std::uint8_t> bytes);

}  // namespace quicktalk
