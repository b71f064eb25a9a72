#include "quicktalk/device_filter.hpp"

#include <charconv>
#include <sstream>

#include "quicktalk/error.hpp"

namespace quicktalk {

namespace {

constexpr std::string_view kBuiltinRegistry =
    "# quicktalk device-type registry, version 1\n"
    "ANY = 0.0.0\n"
    "DISPLAY = 1.0.0\n"
    "AD-DISPLAY = 1.1.0\n"
    "INTERACTIVE-AD-DISPLAY = 1.1.1\n"
    "LIGHTING = 2.0.0\n"
    "BULB = 2.1.1\n"
    "CLIMATE = 3.0.0\n"
    "THERMAL-CONTROLLER = 3.1.1\n"
    "POWER = 4.0.0\n"
    "POWER-PLUG = 4.1.1\n"
    "SHADE = 5.1.1\n"
    "SENSOR = 6.1.1\n";

bool widths_ok(const DeviceTypeFilter& f) {
  return f.level1 <= DeviceTypeFilter::kLevel1Max && f.level2 <= DeviceTypeFilter::kLevel2Max &&
         f.level3 <= DeviceTypeFilter::kLevel3Max;
}

bool discipline_ok(const DeviceTypeFilter& f) {
  if (f.level1 == 0 && (f.level2 != 0 || f.level3 != 0)) return false;
  if (f.level2 == 0 && f.level3 != 0) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string describe(const DeviceTypeFilter& f) {
  return std::to_string(f.level1) + "." + std::to_string(f.level2) + "." + std::to_string(f.level3);
}

}  // namespace

bool DeviceTypeFilter::valid() const { return widths_ok(*this) && discipline_ok(*this); }

DeviceType::DeviceType(std::uint8_t level1, std::uint8_t level2, std::uint8_t level3)
    : levels_{level1, level2, level3} {
  if (!widths_ok(levels_)) throw InputError("DeviceType: level exceeds its bit width");
  if (!levels_.concrete()) throw InputError("DeviceType: every level must be non-wildcard");
}

DeviceType::DeviceType(const DeviceTypeFilter& exact)
    : DeviceType(exact.level1, exact.level2, exact.level3) {}

std::uint16_t encode_filter(const DeviceTypeFilter& f) {
  if (!widths_ok(f)) throw InputError("encode_filter: level exceeds its bit width");
  if (!discipline_ok(f)) throw MalformedFilter("encode_filter: wildcard followed by a concrete level");
  return static_cast<std::uint16_t>((f.level1 << 10) | (f.level2 << 6) | f.level3);
}

std::optional<DeviceTypeFilter> try_decode_filter(std::uint16_t code) {
  if (code > kFilterCodeMask) return std::nullopt;
  DeviceTypeFilter f{static_cast<std::uint8_t>((code >> 10) & 0xF),
                     static_cast<std::uint8_t>((code >> 6) & 0xF),
                     static_cast<std::uint8_t>(code & 0x3F)};
  if (!discipline_ok(f)) return std::nullopt;
  return f;
}

DeviceTypeFilter decode_filter(std::uint16_t code) {
  if (code > kFilterCodeMask) throw InputError("decode_filter: code exceeds 14 bits");
  auto f = try_decode_filter(code);
  if (!f) throw MalformedFilter("decode_filter: wildcard followed by a concrete level");
  return *f;
}

bool matches(const DeviceTypeFilter& filter, const DeviceType& device) {
  auto level_ok = [](std::uint8_t want, std::uint8_t have) {
    return want == DeviceTypeFilter::kWildcard || want == have;
  };
  return level_ok(filter.level1, device.level1()) && level_ok(filter.level2, device.level2()) &&
         level_ok(filter.level3, device.level3());
}

std::optional<DeviceTypeFilter> parse_filter_triple(std::string_view text) {
  text = trim(text);
  unsigned parts[3];
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 3; ++i) {
    auto [next, ec] = std::from_chars(p, end, parts[i]);
    if (ec != std::errc{} || next == p) return std::nullopt;
    p = next;
    if (i < 2) {
      if (p == end || *p != '.') return std::nullopt;
      ++p;
    }
  }
  if (p != end || parts[0] > 0xF || parts[1] > 0xF || parts[2] > 0x3F) return std::nullopt;
  return DeviceTypeFilter{static_cast<std::uint8_t>(parts[0]), static_cast<std::uint8_t>(parts[1]),
                          static_cast<std::uint8_t>(parts[2])};
}

const DeviceRegistry& DeviceRegistry::builtin() {
  static const DeviceRegistry registry = parse_text(kBuiltinRegistry);
  return registry;
}

std::string_view DeviceRegistry::builtin_text() { return kBuiltinRegistry; }

DeviceRegistry DeviceRegistry::parse_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

DeviceRegistry DeviceRegistry::parse(std::istream& in) {
  DeviceRegistry reg;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("registry entry needs `NAME = l1.l2.l3`", line_no);
    const auto name = trim(line.substr(0, eq));
    if (name.empty()) throw ConfigError("registry entry has an empty name", line_no);
    auto code = parse_filter_triple(line.substr(eq + 1));
    if (!code) throw ConfigError("malformed type code for '" + std::string(name) + "'", line_no);
    if (!code->valid()) throw ConfigError("type code for '" + std::string(name) + "' breaks the wildcard prefix rule", line_no);
    if (!reg.entries_.emplace(std::string(name), *code).second) {
      throw ConfigError("duplicate registry name '" + std::string(name) + "'", line_no);
    }
  }
  return reg;
}

std::optional<DeviceTypeFilter> DeviceRegistry::find(std::string_view name) const {
  auto it = entries_.find(trim(name));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

DeviceTypeFilter DeviceRegistry::resolve_filter(std::string_view name_or_triple) const {
  if (auto f = find(name_or_triple)) return *f;
  if (auto f = parse_filter_triple(name_or_triple)) {
    if (!f->valid()) throw ConfigError("filter " + describe(*f) + " breaks the wildcard prefix rule");
    return *f;
  }
  throw ConfigError("unknown device type '" + std::string(trim(name_or_triple)) + "'");
}

DeviceType DeviceRegistry::resolve_type(std::string_view name_or_triple) const {
  const auto f = resolve_filter(name_or_triple);
  if (!f.concrete()) {
    throw ConfigError("device type '" + std::string(trim(name_or_triple)) + "' is not concrete (" + describe(f) + ")");
  }
  return DeviceType(f);
}

std::string DeviceRegistry::name_of(const DeviceTypeFilter& f) const {
  for (const auto& [name, code] : entries_) {
    if (code == f) return name;
  }
  return {};
}

}  // namespace quicktalk
