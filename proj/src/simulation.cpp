#include "quicktalk/simulation.hpp"

#include <algorithm>
#include <memory>

#include "quicktalk/error.hpp"
#include "quicktalk/ir_link.hpp"
#include "quicktalk/protocol.hpp"
#include "quicktalk/traffic.hpp"
#include "quicktalk/user_device.hpp"

namespace quicktalk {

namespace {

CommandProcessor make_processor(const std::string& service) {
  if (service == "bulb") return bulb_processor();
  if (service == "sensor") return sensor_processor();
  return echo_processor();
}

}  // namespace

RunResult run_scenario(const Scenario& sc, std::uint64_t seed, const RunOptions& options) {
  if (sc.iots.empty()) throw ConfigError("scenario defines no IoT device");
  Engine engine(seed);
  engine.set_tracing(options.trace);
  WifiMedium medium(engine, sc.medium);
  const Channel ap_channel(sc.ap_channel);
  const SimTime t_end = from_seconds(sc.effective_duration_s());

  std::vector<std::unique_ptr<IotDevice>> iots;
  std::map<std::string, NodeId> node_of;
  for (std::size_t i = 0; i < sc.iots.size(); ++i) {
    const auto& entry = sc.iots[i];
    IotDeviceConfig cfg;
    cfg.id = kFirstIotNode + static_cast<NodeId>(i);
    cfg.type = entry.type;
    cfg.home_channel = Channel(entry.channel);
    cfg.registered = entry.registered;
    cfg.beacon_interval = sc.iot_beacon_interval;
    cfg.sweep_timeout = sc.iot_sweep_timeout;
    cfg.session_timeout = sc.iot_session_timeout;
    cfg.processing = sc.iot_processing;
    cfg.energy = sc.iot_energy;
    iots.push_back(std::make_unique<IotDevice>(engine, medium, cfg, make_processor(entry.service)));
    node_of[entry.name] = cfg.id;
  }

  std::vector<std::unique_ptr<CoapSession>> sessions;
  auto& traffic_rng = engine.stream("traffic");
  for (std::size_t i = 0; i < sc.coap.size(); ++i) {
    const auto& entry = sc.coap[i];
    const auto it = node_of.find(entry.iot);
    if (it == node_of.end()) throw ConfigError("coap session names unknown IoT '" + entry.iot + "'");
    const auto& iot_spec = sc.iots[it->second - kFirstIotNode];
    if (!iot_spec.registered || iot_spec.channel != sc.ap_channel) {
      throw ConfigError("coap session needs '" + entry.iot + "' registered on the AP channel");
    }
    CoapSessionConfig cfg;
    cfg.ap = kApNode;
    cfg.iot = it->second;
    cfg.interval = from_seconds(entry.interval_s);
    cfg.request_bytes = entry.request_bytes;
    cfg.response_bytes = entry.response_bytes;
    cfg.phase = Ticks{static_cast<Ticks::rep>(traffic_rng.uniform01() * static_cast<double>(cfg.interval.count()))};
    sessions.push_back(std::make_unique<CoapSession>(engine, medium, cfg, ap_channel, static_cast<std::uint8_t>(i + 1)));
  }

  auto& ir_rng = engine.stream("ir");
  IrEmitter emitter = [&](const PulseTrain& clean) {
    const Ticks duration = clean.total_duration();
    for (std::size_t i = 0; i < iots.size(); ++i) {
      const IrOutcome outcome = sample_outcome(sc.iots[i].geometry, sc.ir, ir_rng);
      DecodeResult result = pulses_to_frame(apply_outcome(clean, outcome, ir_rng), sc.ir_tolerance);
      IotDevice* dev = iots[i].get();
      engine.schedule(duration, "ir.receive", [dev, result = std::move(result)] { dev->on_ir_frame(result); });
    }
  };
  UserDevice user(engine, medium, kUserNode, sc.user, std::move(emitter));

  medium.attach(kApNode, ap_channel, NodeMode::Normal, [&](const BroadcastFrame& f) {
    for (auto& s : sessions) {
      if (s->on_ap_frame(f)) return;
    }
  });
  medium.attach(kUserNode, ap_channel, NodeMode::Monitor, [&](const BroadcastFrame& f) { user.on_frame(f); });
  for (auto& dev : iots) {
    IotDevice* d = dev.get();
    medium.attach(d->id(), d->config().home_channel, NodeMode::Normal, [&sessions, d](const BroadcastFrame& f) {
      if (f.kind == FrameKind::Background) {
        for (auto& s : sessions) {
          if (s->config().iot == d->id() && s->on_iot_frame(f)) return;
        }
        return;
      }
      d->on_frame(f);
    });
  }

  // Transaction i is due at start + i * interval; a due transaction that finds
  // the user busy starts as soon as the running one completes.
  const std::vector<std::uint8_t> command(sc.user_command.begin(), sc.user_command.end());
  std::size_t started = 0;
  std::size_t deferred = 0;
  auto start_one = [&] {
    user.start_quicktalk(command, sc.user_filter);
    ++started;
  };
  user.set_completion_handler([&](const TransactionRecord&) {
    if (deferred == 0) return;
    --deferred;
    engine.schedule(Ticks{0}, "txn.start_deferred", start_one);
  });
  if (sc.quicktalk_enabled) {
    for (int i = 0; i < sc.runs; ++i) {
      const SimTime due = from_seconds(sc.quicktalk_start_s + i * sc.quicktalk_interval_s);
      if (sc.duration_s && due >= t_end) break;
      engine.schedule_at(due, "txn.due", [&] {
        if (user.busy() || deferred > 0) {
          ++deferred;
        } else {
          start_one();
        }
      });
    }
  }

  for (auto& s : sessions) s->start(t_end);

  RunResult out;
  out.events = engine.run_until(t_end);
  for (auto& s : sessions) s->stop();
  out.events += engine.run();

  if (user.busy() || deferred != 0 || user.records().size() != started) {
    throw SimulationError("simulation drained with a transaction still open");
  }

  out.scenario_name = sc.name;
  out.seed = seed;
  out.records = user.records();
  out.bg_sessions = sessions.size();
  for (const auto& c : sc.coap) {
    out.bg_interval_s = out.bg_interval_s == 0 ? c.interval_s : std::min(out.bg_interval_s, c.interval_s);
  }
  for (const auto& s : sessions) out.coap_pairs += s->pairs_completed();
  if (sc.download.enabled) {
    DownloadFlow flow;
    flow.iot = node_of.at(sc.download.iot);
    flow.nominal_rate_mbps = sc.download.rate_mbps;
    flow.transaction_cost = from_ms(sc.download.cost_ms);
    out.download_mbps = download_throughput(flow, started, t_end - SimTime{0});
  }
  for (std::size_t i = 0; i < iots.size(); ++i) {
    const auto& d = *iots[i];
    IotRunStats st;
    st.name = sc.iots[i].name;
    st.node = d.id();
    st.ir_triggers = d.ir_triggers();
    st.beacons_sent = d.beacons_sent();
    st.responses_sent = d.responses_sent();
    st.frames_sent = medium.frames_sent(d.id());
    st.quicktalk_frames_sent =
        medium.frames_sent(d.id(), FrameKind::Beacon) + medium.frames_sent(d.id(), FrameKind::Response);
    st.energy = d.energy_report();
    out.iots.push_back(std::move(st));
  }
  if (options.trace) out.trace = engine.trace();
  return out;
}

}  // namespace quicktalk
