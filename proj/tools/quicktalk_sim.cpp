// quicktalk-sim: run, batch and validate scenario files.
#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "quicktalk/batch.hpp"
#include "quicktalk/error.hpp"
#include "quicktalk/report.hpp"
#include "quicktalk/scenario.hpp"
#include "quicktalk/simulation.hpp"

namespace qt = quicktalk;

namespace {

constexpr int kExitLoad = 1;
constexpr int kExitSimulation = 2;

std::vector<std::pair<std::string, std::string>> parse_overrides(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw qt::ConfigError("--set expects key=value, got '" + s + "'");
    auto trim = [](std::string v) {
      const auto b = v.find_first_not_of(" \t");
      const auto e = v.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    out.emplace_back(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return out;
}

qt::ParsedScenario load(const std::string& path, const std::vector<std::string>& sets) {
  auto opts = qt::ParseOptions::from_environment();
  opts.overrides = parse_overrides(sets);
  auto parsed = qt::parse_scenario(path, opts);
  for (const auto& w : parsed.warnings) fmt::print(std::cerr, "warning: {}\n", w);
  return parsed;
}

// CSV goes to a buffer first so a failed run never leaves a partial file.
int emit(const std::string& out_path, const std::string& csv, const std::string& summary) {
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
    std::cerr << summary;
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    fmt::print(std::cerr, "error: cannot write '{}'\n", out_path);
    return kExitLoad;
  }
  f << csv;
  std::cout << summary;
  return 0;
}

std::vector<std::uint64_t> parse_seeds(const std::string& list) {
  std::vector<std::uint64_t> seeds;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(item, &used, 0);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw qt::ConfigError("--seeds: '" + item + "' is not an unsigned integer");
    seeds.push_back(v);
  }
  if (seeds.empty()) throw qt::ConfigError("--seeds needs at least one seed");
  return seeds;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QuickTalk discrete-event simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string seed_list;
  bool serial = false;

  auto* run = app.add_subcommand("run", "Run one simulation and write per-transaction CSV");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--seed", seed, "Master seed (default: the scenario's `seed`)");
  run->add_option("--out", out_path, "CSV output file (default: stdout)");
  run->add_option("--set", sets, "Override a scenario key, key=value (repeatable)");

  auto* batch = app.add_subcommand("batch", "Run one simulation per seed and merge the CSV");
  batch->add_option("scenario", scenario_path, "Scenario file")->required();
  batch->add_option("--seeds", seed_list, "Comma-separated seeds")->required();
  batch->add_option("--out", out_path, "CSV output file (default: stdout)");
  batch->add_option("--set", sets, "Override a scenario key, key=value (repeatable)");
  batch->add_flag("--serial", serial, "Run seeds one after another");

  auto* validate = app.add_subcommand("validate", "Load a scenario and print the resolved configuration");
  validate->add_option("scenario", scenario_path, "Scenario file")->required();
  validate->add_option("--set", sets, "Override a scenario key, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitLoad;
  }

  qt::Scenario sc;
  std::vector<std::uint64_t> seeds;
  try {
    sc = load(scenario_path, sets).scenario;
    if (*batch) seeds = parse_seeds(seed_list);
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}: {}\n", scenario_path, e.what());
    return kExitLoad;
  }

  if (*validate) {
    fmt::print("{}: ok\n", scenario_path);
    fmt::print("  name={} runs={} seed={} duration_s={:.3f} ap.channel={}\n", sc.name, sc.runs, sc.seed,
               sc.effective_duration_s(), sc.ap_channel);
    fmt::print("  ir={} p0={} k={} beacon_ms={:.3f} dwell_ms={:.3f} rounds={} k_top={}\n", qt::to_string(sc.ir.profile),
               sc.medium.p0, sc.medium.k, qt::to_ms(sc.iot_beacon_interval), qt::to_ms(sc.user.dwell), sc.user.rounds,
               sc.user.k_top);
    for (const auto& d : sc.iots) {
      fmt::print("  iot {} type={}.{}.{} channel={} registered={} geometry=({}, {}, {}) service={}\n", d.name,
                 +d.type.level1(), +d.type.level2(), +d.type.level3(), d.channel, d.registered,
                 d.geometry.distance_m, d.geometry.tx_angle_deg, d.geometry.rx_angle_deg, d.service);
    }
    fmt::print("  coap sessions={} download={}\n", sc.coap.size(), sc.download.enabled ? "on" : "off");
    return 0;
  }

  try {
    std::ostringstream csv;
    std::ostringstream summary;
    qt::write_csv_header(csv);
    if (*run) {
      const auto result = qt::run_scenario(sc, seed.value_or(sc.seed));
      qt::write_csv_rows(csv, result);
      qt::write_summary(summary, qt::summarize(std::span(&result, 1), fmt::format("{} seed={}", sc.name, result.seed)));
    } else {
      const auto results = serial ? qt::run_batch_serial(sc, seeds) : qt::run_batch_parallel(sc, seeds);
      for (const auto& r : results) {
        qt::write_csv_rows(csv, r);
        qt::write_summary(summary, qt::summarize(std::span(&r, 1), fmt::format("{} seed={}", sc.name, r.seed)));
      }
      qt::write_summary(summary, qt::summarize(results, fmt::format("{} pooled seeds={}", sc.name, results.size())));
    }
    return emit(out_path, csv.str(), summary.str());
  } catch (const qt::SimulationError& e) {
    fmt::print(std::cerr, "simulation error: {}\n", e.what());
    return kExitSimulation;
  } catch (const qt::ConfigError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitLoad;
  } catch (const qt::InputError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kExitLoad;
  }
}
