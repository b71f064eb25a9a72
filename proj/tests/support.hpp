#pragma once

#include <memory>
#include <vector>

#include "quicktalk/iot_device.hpp"
#include "quicktalk/protocol.hpp"
#include "quicktalk/sim_engine.hpp"
#include "quicktalk/user_device.hpp"
#include "quicktalk/wifi_medium.hpp"

namespace qt_test {

using namespace quicktalk;

// A user device and one IoT device on a shared medium; IR is delivered
// directly (no link model) unless `ir_enabled` is cleared.
struct MiniWorld {
  Engine engine;
  WifiMedium medium;
  std::unique_ptr<IotDevice> iot;
  std::unique_ptr<UserDevice> user;
  bool ir_enabled = true;

  MiniWorld(std::uint64_t seed, MediumConfig mc, IotDeviceConfig ic, UserDeviceConfig uc = {},
            CommandProcessor proc = echo_processor())
      : engine(seed), medium(engine, std::move(mc)) {
    iot = std::make_unique<IotDevice>(engine, medium, ic, std::move(proc));
    user = std::make_unique<UserDevice>(engine, medium, 2, uc, [this](const PulseTrain& p) {
      if (!ir_enabled) return;
      auto result = pulses_to_frame(p);
      engine.schedule(p.total_duration(), "ir", [this, result] { iot->on_ir_frame(result); });
    });
    medium.attach(2, Channel(1), NodeMode::Monitor, [this](const BroadcastFrame& f) { user->on_frame(f); });
    medium.attach(ic.id, ic.home_channel, NodeMode::Normal, [this](const BroadcastFrame& f) { iot->on_frame(f); });
  }
};

inline IotDeviceConfig bulb_config(int channel = 6) {
  IotDeviceConfig c;
  c.id = 10;
  c.type = DeviceType(2, 1, 1);
  c.home_channel = Channel(channel);
  c.registered = true;
  return c;
}

inline MediumConfig lossless(std::map<int, double> rssi = {{6, -40}, {1, -50}, {11, -55}, {3, -60}}) {
  MediumConfig m;
  m.p0 = 0;
  m.k = 0;
  m.ap_rssi_dbm = std::move(rssi);
  return m;
}

}  // namespace qt_test
