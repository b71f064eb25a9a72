#include <doctest.h>

#include "quicktalk/error.hpp"
#include "quicktalk/wifi_medium.hpp"

using namespace quicktalk;
using namespace std::chrono_literals;

namespace {

BroadcastFrame frame(NodeId src, int ch, std::size_t bytes = 11, FrameKind kind = FrameKind::Beacon) {
  return {src, Channel(ch), kind, std::vector<std::uint8_t>(bytes, 0xAB),
          frame_airtime(bytes, PhyRate::Basic1Mbps), std::nullopt};
}

MediumConfig cfg(double p0 = 0, double k = 0) {
  MediumConfig m;
  m.p0 = p0;
  m.k = k;
  return m;
}

}  // namespace

TEST_CASE("airtime model") {
  // microseconds from the rate formulas, doubled into ticks
  CHECK(frame_airtime(11, PhyRate::Basic1Mbps) == Ticks{2 * 504});
  CHECK(frame_airtime(0, PhyRate::Basic1Mbps) == Ticks{2 * 416});
  CHECK(frame_airtime(64, PhyRate::Ofdm54Mbps) == Ticks{2 * 36});
  CHECK(frame_airtime(1500, PhyRate::Ofdm54Mbps) == Ticks{2 * 248});
  CHECK_THROWS_AS(frame_airtime(1501, PhyRate::Basic1Mbps), InputError);
}

TEST_CASE("attachment") {
  Engine e(1);
  WifiMedium m(e, cfg());
  const auto& a = m.attach(1, Channel(6), NodeMode::Monitor);
  CHECK(a.channel == Channel(6));
  CHECK(a.mode == NodeMode::Monitor);
  CHECK_THROWS_AS(m.attach(1, Channel(1), NodeMode::Normal), ConfigError);
  CHECK_THROWS_AS(Channel(12), InputError);
  CHECK_THROWS_AS(Channel(0), InputError);
}

TEST_CASE("channel isolation and lossless delivery") {
  Engine e(1);
  WifiMedium m(e, cfg());
  int got2 = 0, got3 = 0;
  m.attach(1, Channel(6), NodeMode::Monitor);
  m.attach(2, Channel(6), NodeMode::Monitor, [&](const BroadcastFrame&) { ++got2; });
  m.attach(3, Channel(1), NodeMode::Monitor, [&](const BroadcastFrame&) { ++got3; });
  for (int i = 0; i < 100; ++i) {
    const auto reports = m.broadcast(frame(1, 6));
    REQUIRE(reports.size() == 1);
    REQUIRE(reports[0] == DeliveryReport{2, true});
  }
  e.run();
  CHECK(got2 == 100);
  CHECK(got3 == 0);
  CHECK(m.frames_delivered() == 100);
  CHECK(m.frames_sent(1) == 100);
  CHECK(m.frames_sent(1, FrameKind::Beacon) == 100);
  CHECK(m.frames_sent(1, FrameKind::Command) == 0);
}

TEST_CASE("delivery happens when the airtime ends, transmissions serialize") {
  Engine e(1);
  WifiMedium m(e, cfg());
  std::vector<SimTime> at;
  m.attach(1, Channel(6), NodeMode::Monitor);
  m.attach(2, Channel(6), NodeMode::Monitor, [&](const BroadcastFrame&) { at.push_back(e.now()); });
  m.broadcast(frame(1, 6));
  m.broadcast(frame(1, 6));
  e.run();
  const Ticks air = frame_airtime(11, PhyRate::Basic1Mbps);
  REQUIRE(at.size() == 2);
  CHECK(at[0] == air);
  CHECK(at[1] == 2 * air);
}

TEST_CASE("channel switching") {
  Engine e(1);
  WifiMedium m(e, cfg());
  int got = 0;
  m.attach(1, Channel(6), NodeMode::Monitor);
  m.attach(2, Channel(1), NodeMode::Monitor, [&](const BroadcastFrame&) { ++got; });

  const SimTime ready = m.set_channel(2, Channel(6));
  CHECK(ready == SimTime{40ms});
  CHECK(m.is_switching(2, SimTime{0}));
  CHECK(m.is_switching(2, SimTime{20ms}));
  CHECK_FALSE(m.is_switching(2, SimTime{40ms}));
  CHECK_THROWS_AS(m.broadcast(frame(2, 6)), InputError);

  e.run_until(SimTime{20ms});
  const auto reports = m.broadcast(frame(1, 6));
  CHECK(reports[0] == DeliveryReport{2, false});
  e.run_until(SimTime{40ms});
  m.broadcast(frame(1, 6));
  e.run();
  CHECK(got == 1);

  // switching to the current channel still costs the full delay
  const SimTime again = m.set_channel(2, Channel(6));
  CHECK(again == e.now() + Ticks{40ms});
}

TEST_CASE("a receiver that retunes before delivery misses the frame") {
  Engine e(1);
  WifiMedium m(e, cfg());
  int got = 0;
  m.attach(1, Channel(6), NodeMode::Monitor);
  m.attach(2, Channel(6), NodeMode::Monitor, [&](const BroadcastFrame&) { ++got; });
  m.broadcast(frame(1, 6));
  m.set_channel(2, Channel(3));
  e.run();
  CHECK(got == 0);
}

TEST_CASE("calibrated base loss") {
  Engine e(7);
  WifiMedium m(e, cfg(0.064, 0));
  m.attach(1, Channel(6), NodeMode::Monitor);
  m.attach(2, Channel(6), NodeMode::Monitor);
  std::size_t delivered = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) delivered += m.broadcast(frame(1, 6, 0))[0].delivered ? 1 : 0;
  CHECK(delivered / double(n) == doctest::Approx(0.936).epsilon(0.005));
}

TEST_CASE("unicast filtering by mode") {
  Engine e(1);
  WifiMedium m(e, cfg());
  int normal = 0, monitor = 0, target = 0;
  m.attach(1, Channel(6), NodeMode::Normal);
  m.attach(2, Channel(6), NodeMode::Normal, [&](const BroadcastFrame&) { ++normal; });
  m.attach(3, Channel(6), NodeMode::Monitor, [&](const BroadcastFrame&) { ++monitor; });
  m.attach(4, Channel(6), NodeMode::Normal, [&](const BroadcastFrame&) { ++target; });
  auto f = frame(1, 6, 64, FrameKind::Background);
  f.dst = 4;
  m.broadcast(f);
  m.broadcast(frame(1, 6));
  e.run();
  CHECK(normal == 1);
  CHECK(monitor == 2);
  CHECK(target == 2);
  m.set_mode(2, NodeMode::Monitor);
  m.broadcast(f);
  e.run();
  CHECK(normal == 2);
}

TEST_CASE("conservation") {
  Engine e(1);
  WifiMedium m(e, cfg());
  for (NodeId id = 1; id <= 5; ++id) m.attach(id, Channel(11), NodeMode::Monitor);
  for (int i = 0; i < 50; ++i) m.broadcast(frame(1 + i % 5, 11));
  e.run();
  CHECK(m.frames_delivered() == 4u * 50u);

  Engine e2(2);
  WifiMedium lossy(e2, cfg(0.3, 0));
  for (NodeId id = 1; id <= 5; ++id) lossy.attach(id, Channel(11), NodeMode::Monitor);
  for (int i = 0; i < 50; ++i) lossy.broadcast(frame(1 + i % 5, 11));
  e2.run();
  CHECK(lossy.frames_delivered() < 4u * 50u);
}

TEST_CASE("rssi scan") {
  Engine e(1);
  MediumConfig c = cfg();
  c.ap_rssi_dbm = {{1, -40}, {6, -35}, {11, -50}};
  WifiMedium m(e, c);
  m.attach(1, Channel(1), NodeMode::Monitor);
  const auto scan = m.scan_rssi(1);
  REQUIRE(scan.size() == 3);
  CHECK(scan[0].channel == Channel(6));
  CHECK(scan[1].channel == Channel(1));
  CHECK(scan[2].channel == Channel(11));

  Engine e2(1);
  WifiMedium empty(e2, cfg());
  empty.attach(1, Channel(1), NodeMode::Monitor);
  CHECK(empty.scan_rssi(1).empty());
}

TEST_CASE("channel load and loss model") {
  Engine e(1);
  WifiMedium m(e, cfg(0.1, 0.5));
  m.attach(1, Channel(6), NodeMode::Monitor);
  CHECK(m.channel_load(Channel(6)) == 0.0);
  CHECK(m.loss_probability(Channel(6)) == doctest::Approx(0.1));
  const Ticks air = frame_airtime(11, PhyRate::Basic1Mbps);
  for (int i = 0; i < 10; ++i) m.broadcast(frame(1, 6));
  e.run_until(SimTime{500ms});
  const double load = static_cast<double>(10 * air.count()) / static_cast<double>(Ticks{1s}.count());
  CHECK(m.channel_load(Channel(6)) == doctest::Approx(load));
  CHECK(m.channel_load(Channel(6), Ticks{100ms}) == 0.0);
  CHECK(m.loss_probability(Channel(6)) == doctest::Approx(0.1 + 0.5 * load));
  CHECK(m.channel_load(Channel(1)) == 0.0);
  e.run_until(SimTime{2s});
  CHECK(m.channel_load(Channel(6)) == 0.0);
}

TEST_CASE("loss is clamped") {
  Engine e(1);
  MediumConfig c = cfg(0.9, 1000);
  WifiMedium m(e, c);
  m.attach(1, Channel(6), NodeMode::Monitor);
  m.broadcast(frame(1, 6, 1500));
  e.run_until(SimTime{20ms});
  CHECK(m.loss_probability(Channel(6)) == doctest::Approx(0.99));
}

TEST_CASE("saturated channel approaches full utilization") {
  Engine e(1);
  WifiMedium m(e, cfg());
  m.attach(1, Channel(6), NodeMode::Monitor);
  const Ticks air = frame_airtime(1500, PhyRate::Ofdm54Mbps);
  const auto n = Ticks{1s} / air;
  auto f = frame(1, 6, 1500, FrameKind::Background);
  f.airtime = air;
  for (std::int64_t i = 0; i < n; ++i) m.broadcast(f);
  e.run_until(SimTime{1s});
  // back-to-back frames: utilization n*air/1s, the efficiency bound of the model
  CHECK(m.channel_load(Channel(6)) == doctest::Approx(static_cast<double>(n * air.count()) / Ticks{1s}.count()));
  CHECK(m.channel_load(Channel(6)) > 0.999);
}

TEST_CASE("config validation") {
  Engine e(1);
  MediumConfig c;
  c.p0 = 1.0;
  CHECK_THROWS_AS(WifiMedium(e, c), ConfigError);
  c = MediumConfig{};
  c.k = -1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = MediumConfig{};
  c.switch_delay = Ticks{0};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = MediumConfig{};
  c.ap_rssi_dbm[12] = -40;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}
