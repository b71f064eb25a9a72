#include <doctest.h>

#include <sstream>

#include "quicktalk/batch.hpp"
#include "quicktalk/kernels.hpp"
#include "quicktalk/report.hpp"
#include "quicktalk/scenario.hpp"

using namespace quicktalk;

TEST_CASE("parallel codec sweep equals the serial reference") {
  for (bool flips : {false, true}) {
    const auto serial = codec_sweep_serial(77, 3000, flips);
    const auto parallel = codec_sweep_parallel(77, 3000, flips);
    CHECK(serial == parallel);
    CHECK(serial.frames == 3000);
    CHECK(serial.roundtrip_failures == 0);
    CHECK(serial.duration_mismatches == 0);
    CHECK(serial.flips_checked == (flips ? 3000u * 40u : 0u));
    CHECK(serial.flips_accepted == 0);
    CHECK(serial.min_ticks >= 118125);
    CHECK(serial.max_ticks <= 208125);
  }
  const auto empty = codec_sweep_parallel(1, 0, true);
  CHECK(empty == codec_sweep_serial(1, 0, true));
}

TEST_CASE("sweep frames are reproducible per index") {
  CHECK(sweep_frame(5, 123) == sweep_frame(5, 123));
  CHECK_FALSE(sweep_frame(5, 123) == sweep_frame(5, 124));
  CHECK_FALSE(sweep_frame(5, 123) == sweep_frame(6, 123));
}

TEST_CASE("parallel batch equals the serial reference") {
  auto sc = parse_scenario_text(R"(
runs = 15
medium.p0 = 0.1
medium.rssi.6 = -40
iot.a.type = BULB
iot.b.type = SHADE
coap.1.iot = b
coap.1.interval_s = 0.2
)", "batch").scenario;
  const std::vector<std::uint64_t> seeds{4, 1, 3, 1, 2};
  const auto s = run_batch_serial(sc, seeds);
  const auto p = run_batch_parallel(sc, seeds);
  auto csv = [](const std::vector<RunResult>& runs) {
    std::ostringstream out;
    for (const auto& r : runs) write_csv_rows(out, r);
    return out.str();
  };
  CHECK(csv(s) == csv(p));
  REQUIRE(s.size() == 5);
  CHECK(s[0].seed == 1);
  CHECK(s[1].seed == 1);
  CHECK(s[4].seed == 4);
}
