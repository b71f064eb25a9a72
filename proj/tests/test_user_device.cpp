#include <doctest.h>

#include "quicktalk/error.hpp"
#include "support.hpp"

using namespace quicktalk;
using namespace qt_test;
using namespace std::chrono_literals;

namespace {

std::vector<int> numbers(const SweepPlan& plan) {
  std::vector<int> out;
  for (std::size_t i = 0; i < plan.size(); ++i) out.push_back(plan.at(i).number());
  return out;
}

std::vector<ChannelRssi> rssi(std::initializer_list<int> channels) {
  std::vector<ChannelRssi> out;
  double level = -30;
  for (int c : channels) out.push_back({Channel(c), level -= 5});
  return out;
}

const std::vector<std::uint8_t> kCmd = to_bytes("TOGGLE");

}  // namespace

TEST_CASE("sweep plan rotation") {
  const auto plan = build_sweep_plan_at(rssi({6, 1, 11, 3}), 4, 1, 2);
  CHECK(numbers(plan) == std::vector<int>{11, 3, 6, 1, 2, 4, 5, 7, 8, 9, 10});

  const auto two = build_sweep_plan_at(rssi({6, 1, 11, 3, 9}), 4, 2, 0);
  CHECK(two.size() == 22);
  CHECK(numbers(two)[0] == 6);
  CHECK(numbers(two)[3] == 3);
  CHECK(numbers(two)[4] == 2);  // channel 9 is fifth by RSSI, so it falls back to ascending order
  CHECK(numbers(two)[11] == 6);

  const auto empty = build_sweep_plan_at({}, 4, 3, 0);
  CHECK(empty.size() == 33);
  for (std::size_t i = 0; i < empty.size(); ++i) CHECK(empty.at(i).number() == static_cast<int>(i % 11) + 1);
}

TEST_CASE("random sweep plans are permutations with a uniform start") {
  RandomStream rng(4);
  const auto scan = rssi({6, 1, 11, 3});
  int starts[4] = {0, 0, 0, 0};
  for (int i = 0; i < 4000; ++i) {
    const auto plan = build_sweep_plan(scan, 4, 3, rng);
    REQUIRE(plan.size() == 33);
    auto round = numbers(plan);
    round.resize(11);
    std::vector<int> sorted = round;
    std::sort(sorted.begin(), sorted.end());
    for (int c = 1; c <= 11; ++c) REQUIRE(sorted[c - 1] == c);
    ++starts[plan.start_index];
  }
  for (int s : starts) CHECK(s == doctest::Approx(1000).epsilon(0.1));

  // k larger than the scan uses what is there
  const auto small = build_sweep_plan(rssi({6, 1}), 4, 1, rng);
  CHECK(small.start_index < 2);
}

TEST_CASE("one transaction at a time") {
  MiniWorld w(1, lossless(), bulb_config());
  CHECK(w.user->phase() == UserPhase::Idle);
  const auto id = w.user->start_quicktalk(kCmd, {2, 1, 1});
  CHECK(id == 1);
  CHECK(w.user->phase() == UserPhase::IrSent);
  CHECK(w.user->busy());
  CHECK_THROWS_AS(w.user->start_quicktalk(kCmd, {2, 1, 1}), BusyError);
  CHECK(w.user->last_ir_duration() == frame_duration(encode_frame(0xA1B2C3, {2, 1, 1})));
  w.engine.run_until(SimTime{w.user->last_ir_duration() + 3ms});
  CHECK(w.user->phase() == UserPhase::Sweeping);
  CHECK_THROWS_AS(w.user->start_quicktalk(kCmd, {2, 1, 1}), BusyError);
  w.engine.run();
  CHECK(w.user->phase() == UserPhase::Done);
  CHECK(w.user->start_quicktalk(kCmd, {2, 1, 1}) == 2);
}

TEST_CASE("lossless transaction on the first visited channel") {
  MediumConfig m = lossless({{6, -40}});
  UserDeviceConfig u;
  u.k_top = 1;
  MiniWorld w(1, m, bulb_config(6), u);
  w.user->start_quicktalk(kCmd, {2, 1, 1});
  w.engine.run();
  REQUIRE(w.user->records().size() == 1);
  const auto& r = w.user->records()[0];
  CHECK(r.success);
  CHECK(r.retx_count == 0);
  CHECK(r.t_search_ms <= 90.0);
  CHECK(w.medium.frames_sent(2, FrameKind::Command) == 1);
  CHECK(w.medium.frames_sent(2, FrameKind::Ack) == 1);
  // The command queues behind the ACK on the shared channel, so
  // T_command = ACK airtime + command airtime + IoT processing + response airtime + user processing
  const auto ack_len = encode(AckMsg{0xA1B2C3, 10}).size();
  const auto cmd_len = encode(CommandMsg{0xA1B2C3, 10, 1, kCmd}).size();
  const auto resp_len = encode(ResponseMsg{0xA1B2C3, 10, 1, ResponseStatus::Ok, kCmd}).size();
  const double expect = to_ms(frame_airtime(ack_len, PhyRate::Basic1Mbps) + frame_airtime(cmd_len, PhyRate::Basic1Mbps) +
                              frame_airtime(resp_len, PhyRate::Basic1Mbps)) +
                        6.0;
  CHECK(r.t_command_ms == doctest::Approx(expect).epsilon(1e-12));
  CHECK(w.user->detected_channel() == Channel(6));
  CHECK(w.user->target_device() == NodeId{10});
  CHECK(w.iot->responses_sent() == 1);
}

TEST_CASE("detection on the first visit under zero loss") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const int home = 1 + static_cast<int>(seed % 11);
    MiniWorld w(seed, lossless(), bulb_config(home));
    w.user->start_quicktalk(kCmd, {2, 1, 1});
    w.engine.run_until(SimTime{w.user->last_ir_duration() + 3ms + 1ms});
    const auto plan = w.user->plan();
    std::size_t first_visit = 0;
    while (plan.at(first_visit).number() != home) ++first_visit;
    w.engine.run();
    const auto& r = w.user->records().at(0);
    REQUIRE(r.success);
    // capture lands inside the dwell window of the first visit
    REQUIRE(r.t_search_ms > first_visit * 90.0 + 40.0);
    REQUIRE(r.t_search_ms <= (first_visit + 1) * 90.0);
  }
}

TEST_CASE("no triggered device means a failed search after the full plan") {
  UserDeviceConfig u;
  u.rounds = 2;
  MiniWorld w(3, lossless(), bulb_config(6), u);
  w.ir_enabled = false;
  w.user->start_quicktalk(kCmd, {2, 1, 1});
  w.engine.run();
  const auto& r = w.user->records().at(0);
  CHECK(w.user->phase() == UserPhase::Failed);
  CHECK_FALSE(r.success);
  CHECK_FALSE(r.reached_command);
  CHECK(r.t_search_ms == doctest::Approx(1980.0));
  CHECK(r.t_command_ms == doctest::Approx(5000.0));
  CHECK_FALSE(w.user->detected_channel().has_value());
  CHECK(w.medium.frames_sent(2) == 0);
}

TEST_CASE("a type mismatch leaves the device silent and the search fails") {
  MiniWorld w(3, lossless(), bulb_config(6));
  w.user->start_quicktalk(kCmd, {4, 1, 1});
  w.engine.run();
  CHECK_FALSE(w.user->records().at(0).success);
  CHECK(w.medium.frames_sent(10) == 0);
}

TEST_CASE("command timeout when responses never arrive") {
  MiniWorld w(5, lossless({{6, -40}}), bulb_config(6));
  // drop every RESPONSE by detaching the user from the IoT's replies
  w.medium.set_receiver(2, [&](const BroadcastFrame& f) {
    if (f.kind != FrameKind::Response) w.user->on_frame(f);
  });
  w.user->start_quicktalk(kCmd, {2, 1, 1});
  w.engine.run();
  const auto& r = w.user->records().at(0);
  CHECK_FALSE(r.success);
  CHECK(r.reached_command);
  CHECK(r.t_command_ms == doctest::Approx(5000.0));
  // sends at 0, 0.25, ..., 4.75 s
  CHECK(r.retx_count == 19);
  CHECK(w.user->phase() == UserPhase::Failed);
  CHECK_FALSE(w.user->detected_channel().has_value());
}

TEST_CASE("delay decomposition, sweep bound and channel discipline under loss") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    MediumConfig m = lossless();
    m.p0 = 0.25;
    m.k = 0.3;
    UserDeviceConfig u;
    u.rounds = 2;
    MiniWorld w(seed, m, bulb_config(1 + static_cast<int>(seed % 11)), u);
    std::optional<Channel> detected;
    bool stray = false;
    w.medium.set_send_observer([&](const BroadcastFrame& f, SimTime) {
      if (f.src != 2) return;
      if (!detected) detected = w.user->detected_channel();
      if (!detected || f.channel != *detected) stray = true;
    });
    w.user->start_quicktalk(kCmd, {2, 1, 1});
    w.engine.run();
    const auto& r = w.user->records().at(0);
    REQUIRE_FALSE(stray);
    REQUIRE(r.t_search_ms <= 1980.0 + 1e-9);
    const double fixed = to_ms(w.user->last_ir_duration()) + 3.0 + 3.0;
    REQUIRE(r.t_e2e_ms == doctest::Approx(fixed + r.t_search_ms + r.t_command_ms).epsilon(1e-12));
    REQUIRE(r.t_e2e_ms >= r.t_search_ms + r.t_command_ms);
    if (!r.success) REQUIRE(r.t_command_ms == doctest::Approx(5000.0));
    if (r.success) {
      REQUIRE(w.user->detected_channel().has_value());
    } else {
      REQUIRE_FALSE(w.user->detected_channel().has_value());
    }
  }
}

TEST_CASE("config validation") {
  UserDeviceConfig u;
  u.rounds = 0;
  CHECK_THROWS_AS(u.validate(), ConfigError);
  u = {};
  u.dwell = Ticks{0};
  CHECK_THROWS_AS(u.validate(), ConfigError);
  u = {};
  u.user_id = 0x1000000;
  CHECK_THROWS_AS(u.validate(), ConfigError);
}
