#include <doctest.h>

#include <string>
#include <vector>

#include "quicktalk/error.hpp"
#include "quicktalk/sim_engine.hpp"

using namespace quicktalk;
using namespace std::chrono_literals;

namespace {

// A small self-scheduling workload driven by a named stream.
void seed_workload(Engine& e, std::vector<std::string>& log) {
  auto& rng = e.stream("workload");
  for (int i = 0; i < 20; ++i) {
    const Ticks at{static_cast<Ticks::rep>(rng.below(2'000'000))};
    e.schedule(at, "job" + std::to_string(i), [&e, &log, i] {
      log.push_back(std::to_string(e.now().count()) + ":" + std::to_string(i));
      if (i % 3 == 0) e.schedule(Ticks{static_cast<Ticks::rep>(e.stream("follow").below(500'000))}, "follow", [] {});
    });
  }
}

}  // namespace

TEST_CASE("same-time events run in scheduling order") {
  Engine e;
  std::string order;
  e.schedule(5ms, "A", [&] { order += 'A'; });
  e.schedule(5ms, "B", [&] { order += 'B'; });
  e.schedule(1ms, "C", [&] {
    order += 'C';
    e.schedule(0ms, "D", [&] { order += 'D'; });
  });
  e.schedule(1ms, "E", [&] { order += 'E'; });
  CHECK(e.run() == 5);
  CHECK(order == "CEDAB");
}

TEST_CASE("zero delay runs after the current event at the same timestamp") {
  Engine e;
  std::vector<SimTime> times;
  e.schedule(3ms, "outer", [&] {
    e.schedule(0ms, "inner", [&] { times.push_back(e.now()); });
    times.push_back(e.now());
  });
  e.run();
  REQUIRE(times.size() == 2);
  CHECK(times[0] == times[1]);
}

TEST_CASE("cancellation") {
  Engine e;
  bool fired = false;
  auto h = e.schedule(1ms, "x", [&] { fired = true; });
  CHECK(e.pending() == 1);
  CHECK(e.cancel(h));
  CHECK_FALSE(e.cancel(h));
  CHECK(e.pending() == 0);
  CHECK(e.run() == 0);
  CHECK_FALSE(fired);
  CHECK_FALSE(e.cancel(EventHandle{}));
  auto done = e.schedule(1ms, "y", [] {});
  e.run();
  CHECK_FALSE(e.cancel(done));
}

TEST_CASE("scheduling in the past is rejected") {
  Engine e;
  CHECK_THROWS_AS(e.schedule(Ticks{-1}, "neg", [] {}), InputError);
  e.run_until(SimTime{10ms});
  CHECK_THROWS_AS(e.schedule_at(SimTime{5ms}, "past", [] {}), InputError);
  CHECK_THROWS_AS(e.run_until(SimTime{1ms}), InputError);
}

TEST_CASE("run_until advances the clock on an empty queue") {
  Engine e;
  CHECK(e.run_until(SimTime{1s}) == 0);
  CHECK(e.now() == SimTime{1s});
}

TEST_CASE("run_until includes the boundary and handlers see their own timestamp") {
  Engine e;
  int ran = 0;
  for (int ms : {1, 5, 10, 11}) {
    e.schedule(std::chrono::milliseconds(ms), "t", [&e, &ran, ms] {
      REQUIRE(e.now() == SimTime{std::chrono::milliseconds(ms)});
      ++ran;
    });
  }
  CHECK(e.run_until(SimTime{10ms}) == 3);
  CHECK(e.now() == SimTime{10ms});
  CHECK(e.run() == 1);
  CHECK(ran == 4);
}

TEST_CASE("split runs reproduce a full run") {
  auto run = [](std::vector<SimTime> stops) {
    Engine e(42);
    e.set_tracing(true);
    std::vector<std::string> log;
    seed_workload(e, log);
    for (auto t : stops) e.run_until(t);
    e.run();
    return std::make_pair(e.trace(), log);
  };
  const auto full = run({});
  CHECK(run({SimTime{500ms}}) == full);
  CHECK(run({SimTime{100ms}, SimTime{700ms}, SimTime{2s}}) == full);
  CHECK(full.first.size() > 20);
}

TEST_CASE("named streams") {
  Engine a(1), b(1), c(2);
  std::vector<std::uint64_t> ir_a, ir_b, wifi_a, ir_c;
  for (int i = 0; i < 8; ++i) {
    ir_a.push_back(a.stream("ir").next_u64());
    ir_b.push_back(b.stream("ir").next_u64());
    wifi_a.push_back(a.stream("wifi").next_u64());
    ir_c.push_back(c.stream("ir").next_u64());
  }
  CHECK(ir_a == ir_b);
  CHECK(ir_a != wifi_a);
  CHECK(ir_a != ir_c);
  CHECK(&a.stream("ir") == &a.stream("ir"));
}

TEST_CASE("consuming one stream does not perturb another") {
  Engine a(5), b(5);
  for (int i = 0; i < 1000; ++i) a.stream("noise").next_u64();
  for (int i = 0; i < 16; ++i) REQUIRE(a.stream("signal").next_u64() == b.stream("signal").next_u64());
}

TEST_CASE("random helpers") {
  RandomStream r(9);
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    REQUIRE(r.below(7) < 7);
  }
  CHECK(stream_seed(1, "ir") != stream_seed(1, "wifi"));
  CHECK(stream_seed(1, "ir") == stream_seed(1, "ir"));
  // reference first output of SplitMix64 seeded with 0
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
}

TEST_CASE("nearest-rank percentile") {
  const std::vector<double> five{5, 3, 1, 4, 2};
  CHECK(percentile(five, 50) == 3);
  CHECK(percentile(five, 100) == 5);
  CHECK(percentile(five, 0) == 1);
  CHECK(percentile(five, 10) == 1);
  CHECK(percentile(five, 20) == 1);
  CHECK(percentile(five, 21) == 2);
  CHECK(percentile(five, 80) == 4);
  const std::vector<double> one{7};
  for (double p : {0.0, 1.0, 50.0, 99.9, 100.0}) CHECK(percentile(one, p) == 7);
  // p*n/100 lands exactly on an integer despite binary rounding of p/100
  std::vector<double> hundred;
  for (int i = 1; i <= 100; ++i) hundred.push_back(i);
  CHECK(percentile(hundred, 70) == 70);
  CHECK(percentile(hundred, 29) == 29);
  CHECK_THROWS_AS(percentile(std::vector<double>{}, 50), InputError);
  CHECK_THROWS_AS(percentile(five, 101), InputError);
  CHECK_THROWS_AS(percentile(five, -1), InputError);
}
