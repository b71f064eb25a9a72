#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quicktalk/device_filter.hpp"
#include "quicktalk/iot_device.hpp"
#include "quicktalk/ir_link.hpp"
#include "quicktalk/traffic.hpp"
#include "quicktalk/user_device.hpp"
#include "quicktalk/wifi_medium.hpp"

namespace quicktalk {

struct IotSpec {
  std::string name;
  DeviceType type{1, 1, 1};
  int channel = 1;
  bool registered = true;
  IrGeometry geometry;
  std::string service = "echo";  // echo | bulb | sensor
};

struct CoapSpec {
  std::string iot;
  double interval_s = 0.1;
  std::size_t request_bytes = 64;
  std::size_t response_bytes = 64;
};

struct DownloadSpec {
  bool enabled = false;
  std::string iot;
  double rate_mbps = 18.54;
  double cost_ms = 682.6;
};

/// A fully-resolved simulation configuration.
struct Scenario {
  std::string name = "scenario";
  int runs = 100;
  std::uint64_t seed = 1;
  std::optional<double> duration_s;
  int ap_channel = 6;

  bool quicktalk_enabled = true;
  double quicktalk_interval_s = 5.0;
  double quicktalk_start_s = 0.5;

  MediumConfig medium;
  IrEnvironment ir = IrEnvironment::indoor();
  double ir_tolerance = 0.25;

  UserDeviceConfig user;
  DeviceTypeFilter user_filter{};
  std::string user_command = "TOGGLE";

  Ticks iot_beacon_interval = std::chrono::milliseconds(25);
  Ticks iot_sweep_timeout = std::chrono::seconds(5);
  Ticks iot_session_timeout = std::chrono::seconds(10);
  Ticks iot_processing = std::chrono::milliseconds(3);
  EnergyProfile iot_energy;

  std::vector<IotSpec> iots;
  std::vector<CoapSpec> coap;
  DownloadSpec download;

  /// Simulated span: duration_s if set, else start + runs * interval.
  double effective_duration_s() const;
};

struct ParseOptions {
  /// Unknown keys are errors when strict, warnings otherwise.
  bool strict = true;
  /// Later entries replace file values (`key`, `value`).
  std::vector<std::pair<std::string, std::string>> overrides;
  /// Directory that relative `registry` paths are resolved against.
  std::filesystem::path base_dir;

  /// strict unless QUICKTALK_STRICT=0.
  static ParseOptions from_environment();
};

struct ParsedScenario {
  Scenario scenario;
  std::vector<std::string> warnings;
};

/// Strict line-based `key = value` parser with `#` comments. Throws
/// ConfigError naming the line on unknown keys, malformed values, out-of-range
/// channels and unresolvable type names.
ParsedScenario parse_scenario_text(std::string_view text, std::string default_name, const ParseOptions& options = {});
ParsedScenario parse_scenario(const std::filesystem::path& path, ParseOptions options = ParseOptions::from_environment());

}  // namespace quicktalk
