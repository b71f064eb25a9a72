#include "quicktalk/scenario.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "quicktalk/error.hpp"

namespace quicktalk {

namespace {

struct Entry {
  std::string key;
  std::string value;
  int line;
};

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

[[noreturn]] void bad_value(const Entry& e, std::string_view expected) {
  throw ConfigError(e.key + ": expected " + std::string(expected) + ", got '" + e.value + "'", e.line);
}

double as_double(const Entry& e) {
  const std::string_view v = e.value;
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(e, "a number");
  return out;
}

double as_positive(const Entry& e) {
  const double v = as_double(e);
  if (!(v > 0.0)) bad_value(e, "a positive number");
  return v;
}

double as_non_negative(const Entry& e) {
  const double v = as_double(e);
  if (!(v >= 0.0)) bad_value(e, "a non-negative number");
  return v;
}

std::int64_t as_int(const Entry& e) {
  const std::string_view v = e.value;
  std::int64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) bad_value(e, "an integer");
  return out;
}

std::uint64_t as_u64(const Entry& e) {
  std::string_view v = e.value;
  int base = 10;
  if (starts_with(v, "0x") || starts_with(v, "0X")) {
    v.remove_prefix(2);
    base = 16;
  }
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out, base);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size()) bad_value(e, "an unsigned integer");
  return out;
}

bool as_bool(const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  bad_value(e, "true or false");
}

int as_channel(const Entry& e) {
  const auto ch = as_int(e);
  if (ch < Channel::kMin || ch > Channel::kMax) {
    throw ConfigError(e.key + ": channel " + e.value + " is outside 1..11", e.line);
  }
  return static_cast<int>(ch);
}

Ticks as_ms(const Entry& e) { return from_ms(as_positive(e)); }

IrGeometry as_geometry(const Entry& e) {
  std::stringstream in(e.value);
  std::string part;
  double vals[3];
  int n = 0;
  while (std::getline(in, part, ',')) {
    if (n == 3) bad_value(e, "`distance_m, tx_angle_deg, rx_angle_deg`");
    Entry tmp{e.key, std::string(trim(part)), e.line};
    vals[n++] = as_double(tmp);
  }
  if (n != 3) bad_value(e, "`distance_m, tx_angle_deg, rx_angle_deg`");
  IrGeometry g{vals[0], vals[1], vals[2]};
  try {
    g.validate();
  } catch (const InputError& err) {
    throw ConfigError(e.key + ": " + err.what(), e.line);
  }
  return g;
}

std::optional<IrProfile> profile_named(std::string_view s) {
  if (s == "indoor") return IrProfile::Indoor;
  if (s == "outdoor" || s == "outdoor_shaded") return IrProfile::OutdoorShaded;
  return std::nullopt;
}

class Interpreter {
 public:
  Interpreter(Scenario& sc, std::vector<std::string>& warnings, bool strict, std::filesystem::path base_dir)
      : sc_(sc), warnings_(warnings), strict_(strict), base_dir_(std::move(base_dir)) {}

  void run(const std::vector<Entry>& entries) {
    for (const auto& e : entries) {
      if (e.key == "registry") load_registry(e);
    }
    for (const auto& e : entries) {
      if (e.key != "registry") apply(e);
    }
    finish();
  }

 private:
  void unknown(const Entry& e) {
    if (strict_) throw ConfigError("unknown key '" + e.key + "'", e.line);
    warnings_.push_back("line " + std::to_string(e.line) + ": ignoring unknown key '" + e.key + "'");
  }

  void load_registry(const Entry& e) {
    auto path = std::filesystem::path(e.value);
    if (path.is_relative()) path = base_dir_ / path;
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open registry '" + path.string() + "'", e.line);
    try {
      registry_ = DeviceRegistry::parse(in);
    } catch (const ConfigError& err) {
      throw ConfigError(std::string("registry ") + path.string() + ": " + err.what(), e.line);
    }
  }

  DeviceTypeFilter resolve_filter(const Entry& e) const {
    try {
      return registry_.resolve_filter(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.key + ": " + err.what(), e.line);
    }
  }

  DeviceType resolve_type(const Entry& e) const {
    try {
      return registry_.resolve_type(e.value);
    } catch (const ConfigError& err) {
      throw ConfigError(e.key + ": " + err.what(), e.line);
    }
  }

  struct IotDraft {
    IotSpec spec;
    bool has_type = false;
    int first_line = 0;
    std::optional<int> channel;
    int channel_line = 0;
  };

  IotDraft& iot(const std::string& name, int line) {
    auto it = iot_index_.find(name);
    if (it == iot_index_.end()) {
      it = iot_index_.emplace(name, iots_.size()).first;
      iots_.push_back(IotDraft{});
      iots_.back().spec.name = name;
      iots_.back().first_line = line;
    }
    return iots_[it->second];
  }

  struct CoapDraft {
    CoapSpec spec;
    bool has_interval = false;
    int first_line = 0;
    int iot_line = 0;
  };

  void apply(const Entry& e) {
    const std::string& k = e.key;
    if (k == "name") {
      sc_.name = e.value;
    } else if (k == "runs") {
      const auto v = as_int(e);
      if (v < 0) bad_value(e, "a non-negative integer");
      sc_.runs = static_cast<int>(v);
    } else if (k == "seed") {
      sc_.seed = as_u64(e);
    } else if (k == "duration_s") {
      sc_.duration_s = as_positive(e);
    } else if (k == "ap.channel") {
      sc_.ap_channel = as_channel(e);
    } else if (starts_with(k, "quicktalk.")) {
      apply_quicktalk(e);
    } else if (starts_with(k, "medium.")) {
      apply_medium(e);
    } else if (starts_with(k, "ir.")) {
      apply_ir(e);
    } else if (starts_with(k, "user.")) {
      apply_user(e);
    } else if (starts_with(k, "iot.")) {
      apply_iot(e);
    } else if (starts_with(k, "coap.")) {
      apply_coap(e);
    } else if (starts_with(k, "download.")) {
      apply_download(e);
    } else {
      unknown(e);
    }
  }

  void apply_quicktalk(const Entry& e) {
    if (e.key == "quicktalk.enabled") {
      sc_.quicktalk_enabled = as_bool(e);
    } else if (e.key == "quicktalk.interval_s") {
      sc_.quicktalk_interval_s = as_positive(e);
    } else if (e.key == "quicktalk.start_s") {
      sc_.quicktalk_start_s = as_non_negative(e);
    } else {
      unknown(e);
    }
  }

  void apply_medium(const Entry& e) {
    auto& m = sc_.medium;
    if (e.key == "medium.switch_delay_ms") {
      m.switch_delay = as_ms(e);
    } else if (e.key == "medium.p0") {
      m.p0 = as_double(e);
      if (!(m.p0 >= 0.0 && m.p0 < 1.0)) bad_value(e, "a probability in [0, 1)");
    } else if (e.key == "medium.k") {
      m.k = as_non_negative(e);
    } else if (e.key == "medium.load_window_ms") {
      m.load_window = as_ms(e);
    } else if (starts_with(e.key, "medium.rssi.")) {
      Entry ch{e.key, e.key.substr(std::string_view("medium.rssi.").size()), e.line};
      m.ap_rssi_dbm[as_channel(ch)] = as_double(e);
    } else {
      unknown(e);
    }
  }

  void apply_ir(const Entry& e) {
    const std::string& k = e.key;
    if (k == "ir.profile") {
      auto p = profile_named(e.value);
      if (!p) bad_value(e, "indoor or outdoor");
      profile_ = *p;
    } else if (k == "ir.partial_share") {
      indoor_.partial_share = outdoor_.partial_share = as_double(e);
    } else if (k == "ir.tolerance") {
      sc_.ir_tolerance = as_double(e);
      if (!(sc_.ir_tolerance >= 0.0 && sc_.ir_tolerance < 0.5)) bad_value(e, "a fraction in [0, 0.5)");
    } else if (starts_with(k, "ir.range.")) {
      auto p = profile_named(std::string_view(k).substr(9));
      if (!p) return unknown(e);
      env(*p).max_range_m = as_positive(e);
    } else if (starts_with(k, "ir.alpha.")) {
      // ir.alpha.<profile>.<distance>m
      const std::string_view rest = std::string_view(k).substr(9);
      const auto dot = rest.find('.');
      if (dot == std::string_view::npos) return unknown(e);
      auto p = profile_named(rest.substr(0, dot));
      std::string_view dist = rest.substr(dot + 1);
      if (!p || dist.empty() || dist.back() != 'm') return unknown(e);
      dist.remove_suffix(1);
      Entry d{k, std::string(dist), e.line};
      const double meters = as_non_negative(d);
      auto& table = env(*p).cone_halfangle_deg;
      if (!alpha_touched_[static_cast<int>(*p)]) {
        table.clear();
        alpha_touched_[static_cast<int>(*p)] = true;
      }
      table[meters] = as_positive(e);
    } else {
      unknown(e);
    }
  }

  IrEnvironment& env(IrProfile p) { return p == IrProfile::Indoor ? indoor_ : outdoor_; }

  void apply_user(const Entry& e) {
    auto& u = sc_.user;
    const std::string& k = e.key;
    if (k == "user.id") {
      const auto id = as_u64(e);
      if (id > kUserIdMask) bad_value(e, "a 24-bit identifier");
      u.user_id = static_cast<std::uint32_t>(id);
    } else if (k == "user.k_top") {
      const auto v = as_int(e);
      if (v < 0 || v > 11) bad_value(e, "an integer in 0..11");
      u.k_top = static_cast<int>(v);
    } else if (k == "user.rounds") {
      const auto v = as_int(e);
      if (v < 1) bad_value(e, "a positive integer");
      u.rounds = static_cast<int>(v);
    } else if (k == "user.dwell_ms") {
      u.dwell = as_ms(e);
    } else if (k == "user.retx_ms") {
      u.retx_interval = as_ms(e);
    } else if (k == "user.timeout_ms") {
      u.command_timeout = as_ms(e);
    } else if (k == "user.ctx_ms") {
      u.context_switch = from_ms(as_non_negative(e));
    } else if (k == "user.proc_ms") {
      u.processing = from_ms(as_non_negative(e));
    } else if (k == "user.command") {
      if (e.value.empty()) bad_value(e, "a non-empty command");
      sc_.user_command = e.value;
    } else if (k == "user.filter") {
      sc_.user_filter = resolve_filter(e);
    } else {
      unknown(e);
    }
  }

  void apply_iot(const Entry& e) {
    const std::string& k = e.key;
    if (k == "iot.beacon_ms") {
      sc_.iot_beacon_interval = as_ms(e);
      return;
    }
    if (k == "iot.sweep_timeout_ms") {
      sc_.iot_sweep_timeout = as_ms(e);
      return;
    }
    if (k == "iot.session_timeout_ms") {
      sc_.iot_session_timeout = as_ms(e);
      return;
    }
    if (k == "iot.proc_ms") {
      sc_.iot_processing = from_ms(as_non_negative(e));
      return;
    }
    if (k == "iot.ir_mw") {
      sc_.iot_energy.ir_receiver_mw = as_non_negative(e);
      return;
    }
    if (k == "iot.wifi_mw") {
      sc_.iot_energy.wifi_active_mw = as_non_negative(e);
      return;
    }
    // iot.<name>.<field>
    const std::string_view rest = std::string_view(k).substr(4);
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos || dot == 0) return unknown(e);
    const std::string name(rest.substr(0, dot));
    const std::string_view field = rest.substr(dot + 1);
    if (field == "type") {
      auto& d = iot(name, e.line);
      d.spec.type = resolve_type(e);
      d.has_type = true;
    } else if (field == "channel") {
      auto& d = iot(name, e.line);
      d.channel = as_channel(e);
      d.channel_line = e.line;
    } else if (field == "registered") {
      iot(name, e.line).spec.registered = as_bool(e);
    } else if (field == "geometry") {
      iot(name, e.line).spec.geometry = as_geometry(e);
    } else if (field == "service") {
      if (e.value != "echo" && e.value != "bulb" && e.value != "sensor") bad_value(e, "echo, bulb or sensor");
      iot(name, e.line).spec.service = e.value;
    } else {
      unknown(e);
    }
  }

  void apply_coap(const Entry& e) {
    const std::string_view rest = std::string_view(e.key).substr(5);
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos || dot == 0) return unknown(e);
    const std::string id(rest.substr(0, dot));
    const std::string_view field = rest.substr(dot + 1);
    auto it = coap_index_.find(id);
    if (it == coap_index_.end()) {
      it = coap_index_.emplace(id, coap_.size()).first;
      coap_.push_back(CoapDraft{});
      coap_.back().first_line = e.line;
    }
    auto& d = coap_[it->second];
    if (field == "interval_s") {
      d.spec.interval_s = as_positive(e);
      d.has_interval = true;
    } else if (field == "iot") {
      d.spec.iot = e.value;
      d.iot_line = e.line;
    } else if (field == "request_bytes" || field == "response_bytes") {
      const auto v = as_int(e);
      if (v < 1 || v > static_cast<std::int64_t>(kMaxPayloadBytes)) bad_value(e, "a size in 1..1500");
      (field == "request_bytes" ? d.spec.request_bytes : d.spec.response_bytes) = static_cast<std::size_t>(v);
    } else {
      unknown(e);
    }
  }

  void apply_download(const Entry& e) {
    auto& d = sc_.download;
    if (e.key == "download.enabled") {
      d.enabled = as_bool(e);
    } else if (e.key == "download.rate_mbps") {
      d.rate_mbps = as_positive(e);
    } else if (e.key == "download.cost_ms") {
      d.cost_ms = as_non_negative(e);
    } else if (e.key == "download.iot") {
      d.iot = e.value;
      download_iot_line_ = e.line;
    } else {
      unknown(e);
    }
  }

  void finish() {
    sc_.ir = profile_ == IrProfile::Indoor ? indoor_ : outdoor_;
    sc_.ir.validate();
    if (iots_.empty()) throw ConfigError("scenario defines no IoT device (need iot.<name>.type)");
    for (auto& d : iots_) {
      if (!d.has_type) throw ConfigError("iot." + d.spec.name + " has no type", d.first_line);
      d.spec.channel = d.channel.value_or(d.spec.registered ? sc_.ap_channel : 1);
      sc_.iots.push_back(d.spec);
    }
    auto known = [this](const std::string& name) { return iot_index_.contains(name); };
    for (auto& d : coap_) {
      if (!d.has_interval) throw ConfigError("coap session has no interval_s", d.first_line);
      if (d.spec.iot.empty()) d.spec.iot = sc_.iots.front().name;
      if (!known(d.spec.iot)) throw ConfigError("coap session names unknown IoT '" + d.spec.iot + "'", d.iot_line);
      sc_.coap.push_back(d.spec);
    }
    if (sc_.download.iot.empty()) sc_.download.iot = sc_.iots.front().name;
    if (!known(sc_.download.iot)) {
      throw ConfigError("download names unknown IoT '" + sc_.download.iot + "'", download_iot_line_);
    }
    sc_.medium.validate();
    sc_.user.validate();
  }

  Scenario& sc_;
  std::vector<std::string>& warnings_;
  bool strict_;
  std::filesystem::path base_dir_;
  DeviceRegistry registry_ = DeviceRegistry::builtin();
  IrProfile profile_ = IrProfile::Indoor;
  IrEnvironment indoor_ = IrEnvironment::indoor();
  IrEnvironment outdoor_ = IrEnvironment::outdoor_shaded();
  bool alpha_touched_[2] = {false, false};
  std::vector<IotDraft> iots_;
  std::map<std::string, std::size_t> iot_index_;
  std::vector<CoapDraft> coap_;
  std::map<std::string, std::size_t> coap_index_;
  int download_iot_line_ = 0;
};

}  // namespace

double Scenario::effective_duration_s() const {
  if (duration_s) return *duration_s;
  if (!quicktalk_enabled) return quicktalk_start_s;
  return quicktalk_start_s + runs * quicktalk_interval_s;
}

ParseOptions ParseOptions::from_environment() {
  ParseOptions opts;
  if (const char* v = std::getenv("QUICKTALK_STRICT"); v != nullptr && std::string_view(v) == "0") {
    opts.strict = false;
  }
  return opts;
}

ParsedScenario parse_scenario_text(std::string_view text, std::string default_name, const ParseOptions& options) {
  std::vector<Entry> entries;
  std::map<std::string, std::size_t> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected `key = value`", line_no);
    Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), line_no};
    if (e.key.empty()) throw ConfigError("empty key", line_no);
    if (auto it = seen.find(e.key); it != seen.end()) {
      throw ConfigError("duplicate key '" + e.key + "' (first on line " + std::to_string(entries[it->second].line) + ")",
                        line_no);
    }
    seen.emplace(e.key, entries.size());
    entries.push_back(std::move(e));
  }
  for (const auto& [key, value] : options.overrides) {
    if (auto it = seen.find(key); it != seen.end()) {
      entries[it->second].value = value;
    } else {
      seen.emplace(key, entries.size());
      entries.push_back({key, value, 0});
    }
  }

  ParsedScenario out;
  out.scenario.name = std::move(default_name);
  Interpreter(out.scenario, out.warnings, options.strict, options.base_dir).run(entries);
  return out;
}

ParsedScenario parse_scenario(const std::filesystem::path& path, ParseOptions options) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scenario '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (options.base_dir.empty()) options.base_dir = path.parent_path();
  return parse_scenario_text(buf.str(), path.stem().string(), options);
}

}  // namespace quicktalk
