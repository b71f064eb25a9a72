#include <doctest.h>

#include <fstream>
#include <sstream>
#include <vector>

#include "quicktalk/device_filter.hpp"
#include "quicktalk/error.hpp"

using namespace quicktalk;

namespace {

bool discipline(const DeviceTypeFilter& f) {
  if (f.level1 == 0) return f.level2 == 0 && f.level3 == 0;
  if (f.level2 == 0) return f.level3 == 0;
  return true;
}

std::vector<DeviceTypeFilter> all_valid_filters() {
  std::vector<DeviceTypeFilter> out;
  for (int a = 0; a <= 15; ++a)
    for (int b = 0; b <= 15; ++b)
      for (int c = 0; c <= 63; ++c) {
        DeviceTypeFilter f{static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b), static_cast<std::uint8_t>(c)};
        if (discipline(f)) out.push_back(f);
      }
  return out;
}

}  // namespace

TEST_CASE("filter packing") {
  CHECK(encode_filter({0, 0, 0}) == 0x0000);
  CHECK(encode_filter({0xF, 0xF, 0x3F}) == 0x3FFF);
  CHECK(encode_filter({2, 1, 1}) == 0x0841);
  CHECK(decode_filter(0x0000) == DeviceTypeFilter{0, 0, 0});
  CHECK(decode_filter(0x2000) == DeviceTypeFilter{8, 0, 0});
  CHECK_THROWS_AS(decode_filter(0x0040), MalformedFilter);
  CHECK_THROWS_AS(decode_filter(0x4000), InputError);
  CHECK_THROWS_AS(encode_filter({0, 1, 0}), MalformedFilter);
  CHECK_THROWS_AS(encode_filter({1, 0, 5}), MalformedFilter);
  CHECK_THROWS_AS(encode_filter({16, 0, 0}), InputError);
  CHECK_THROWS_AS(encode_filter({1, 1, 64}), InputError);
}

TEST_CASE("every 14-bit code decodes iff it respects the prefix rule") {
  std::size_t valid = 0;
  for (std::uint32_t code = 0; code <= 0x3FFF; ++code) {
    const DeviceTypeFilter raw{static_cast<std::uint8_t>(code >> 10), static_cast<std::uint8_t>((code >> 6) & 0xF),
                               static_cast<std::uint8_t>(code & 0x3F)};
    const auto f = try_decode_filter(static_cast<std::uint16_t>(code));
    REQUIRE(f.has_value() == discipline(raw));
    if (f) {
      ++valid;
      REQUIRE(*f == raw);
      REQUIRE(encode_filter(*f) == code);
    }
  }
  // 1 + 15 + 15*15 + 15*15*63
  CHECK(valid == 14416);
  CHECK(all_valid_filters().size() == valid);
}

TEST_CASE("matching") {
  const DeviceType bulb(2, 1, 1), plug(4, 1, 1), thermo(3, 1, 1);
  CHECK(matches({0, 0, 0}, bulb));
  CHECK(matches(bulb.as_filter(), bulb));
  CHECK(matches({2, 0, 0}, bulb));
  CHECK(matches({2, 1, 0}, bulb));
  CHECK_FALSE(matches({2, 0, 0}, plug));
  CHECK_FALSE(matches(plug.as_filter(), thermo));
  CHECK_FALSE(matches({2, 1, 2}, bulb));
  CHECK_THROWS_AS(DeviceType(0, 1, 1), InputError);
  CHECK_THROWS_AS(DeviceType(1, 1, 0), InputError);
  CHECK_THROWS_AS(DeviceType(16, 1, 1), InputError);
}

TEST_CASE("wildcarding a level never loses a match") {
  const auto filters = all_valid_filters();
  const std::vector<DeviceType> devices{{1, 1, 1}, {2, 1, 1}, {15, 15, 63}, {3, 7, 40}, {8, 2, 9}};
  for (const auto& d : devices) {
    for (const auto& f : filters) {
      if (!matches(f, d)) continue;
      DeviceTypeFilter wider = f;
      if (wider.level3) wider.level3 = 0;
      else if (wider.level2) wider.level2 = 0;
      else wider.level1 = 0;
      REQUIRE(matches(wider, d));
    }
  }
}

TEST_CASE("concrete filters match exactly one type") {
  const std::vector<DeviceType> devices{{1, 1, 1}, {2, 1, 1}, {15, 15, 63}, {3, 7, 40}};
  for (const auto& f : all_valid_filters()) {
    if (!f.concrete()) continue;
    for (const auto& d : devices) REQUIRE(matches(f, d) == (f == d.as_filter()));
  }
}

TEST_CASE("built-in registry") {
  const auto& reg = DeviceRegistry::builtin();
  CHECK(reg.find("BULB") == DeviceTypeFilter{2, 1, 1});
  CHECK(reg.find("DISPLAY") == DeviceTypeFilter{1, 0, 0});
  CHECK(reg.find("INTERACTIVE-AD-DISPLAY") == DeviceTypeFilter{1, 1, 1});
  CHECK_FALSE(reg.find("TOASTER").has_value());
  for (const char* name : {"BULB", "DISPLAY", "AD-DISPLAY", "INTERACTIVE-AD-DISPLAY", "THERMAL-CONTROLLER",
                           "POWER-PLUG", "SHADE", "SENSOR"}) {
    CHECK(reg.find(name).has_value());
  }
  CHECK(reg.resolve_filter("  2.1.0 ") == DeviceTypeFilter{2, 1, 0});
  CHECK(reg.resolve_type("POWER-PLUG") == DeviceType(4, 1, 1));
  CHECK_THROWS_AS(reg.resolve_type("DISPLAY"), ConfigError);
  CHECK_THROWS_AS(reg.resolve_filter("TOASTER"), ConfigError);
  CHECK_THROWS_AS(reg.resolve_filter("0.1.0"), ConfigError);
  CHECK(reg.name_of({2, 1, 1}) == "BULB");
  CHECK(reg.name_of({9, 9, 9}).empty());
}

TEST_CASE("shipped registry file matches the built-in table") {
  std::ifstream in(QT_SOURCE_DIR "/data/device_types.reg");
  REQUIRE(in.good());
  const auto file = DeviceRegistry::parse(in);
  const auto& builtin = DeviceRegistry::builtin();
  CHECK(file.size() == builtin.size());
  for (const char* name : {"ANY", "BULB", "SHADE", "SENSOR", "AD-DISPLAY"}) CHECK(file.find(name) == builtin.find(name));
}

TEST_CASE("registry parse errors name the line") {
  auto line_of = [](std::string_view text) {
    try {
      DeviceRegistry::parse_text(text);
    } catch (const ConfigError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("A = 1.0.0\nB 2.0.0\n") == 2);
  CHECK(line_of("# c\n\nA = 1.x.0\n") == 3);
  CHECK(line_of("A = 0.1.0\n") == 1);
  CHECK(line_of("A = 1.0.0\nA = 2.0.0\n") == 2);
  CHECK(line_of("A = 16.0.0\n") == 1);
  CHECK(line_of("A = 1.0.0 # trailing\n") == -1);
}

TEST_CASE("triple parsing") {
  CHECK(parse_filter_triple("1.2.3") == DeviceTypeFilter{1, 2, 3});
  CHECK_FALSE(parse_filter_triple("1.2").has_value());
  CHECK_FALSE(parse_filter_triple("1.2.3.4").has_value());
  CHECK_FALSE(parse_filter_triple("a.b.c").has_value());
  CHECK_FALSE(parse_filter_triple("1.2.300").has_value());
}
