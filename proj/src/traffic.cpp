#include "quicktalk/traffic.hpp"

#include <algorithm>

#include "quicktalk/error.hpp"

namespace quicktalk {

namespace {
// tag, direction, 4-byte sequence
constexpr std::size_t kHeaderBytes = 6;
}  // namespace

CoapSession::CoapSession(Engine& engine, WifiMedium& medium, CoapSessionConfig config, Channel channel,
                         std::uint8_t tag)
    : engine_(engine), medium_(medium), config_(config), channel_(channel), tag_(tag) {
  if (config_.interval <= Ticks::zero()) throw ConfigError("coap interval must be positive");
  config_.request_bytes = std::max(config_.request_bytes, kHeaderBytes);
  config_.response_bytes = std::max(config_.response_bytes, kHeaderBytes);
}

void CoapSession::start(SimTime until) {
  until_ = until;
  active_ = true;
  const SimTime first = engine_.now() + config_.phase;
  if (first < until_) timer_ = engine_.schedule_at(first, "coap.request", [this] { tick(); });
}

void CoapSession::stop() {
  active_ = false;
  engine_.cancel(timer_);
}

std::vector<std::uint8_t> CoapSession::payload(std::uint32_t seq, bool response, std::size_t size) const {
  std::vector<std::uint8_t> p(size, 0);
  p[0] = tag_;
  p[1] = response ? 1 : 0;
  for (int i = 0; i < 4; ++i) p[2 + i] = static_cast<std::uint8_t>(seq >> (24 - 8 * i));
  return p;
}

bool CoapSession::ours(const BroadcastFrame& frame, bool response, std::uint32_t& seq) const {
  if (frame.kind != FrameKind::Background || frame.payload.size() < kHeaderBytes) return false;
  if (frame.payload[0] != tag_ || frame.payload[1] != (response ? 1 : 0)) return false;
  seq = 0;
  for (int i = 0; i < 4; ++i) seq = (seq << 8) | frame.payload[2 + i];
  return true;
}

void CoapSession::tick() {
  if (!active_) return;
  const SimTime now = engine_.now();
  request_times_.push_back(now);
  auto p = payload(seq_++, false, config_.request_bytes);
  const auto airtime = frame_airtime(p.size(), PhyRate::Ofdm54Mbps);
  medium_.broadcast({config_.ap, channel_, FrameKind::Background, std::move(p), airtime, config_.iot});
  const SimTime next = now + config_.interval;
  if (next < until_) timer_ = engine_.schedule_at(next, "coap.request", [this] { tick(); });
}

bool CoapSession::on_iot_frame(const BroadcastFrame& frame) {
  std::uint32_t seq;
  if (frame.src != config_.ap || !ours(frame, false, seq)) return false;
  engine_.schedule(config_.processing, "coap.response", [this, seq] {
    auto p = payload(seq, true, config_.response_bytes);
    const auto airtime = frame_airtime(p.size(), PhyRate::Ofdm54Mbps);
    medium_.broadcast({config_.iot, channel_, FrameKind::Background, std::move(p), airtime, config_.ap});
    ++responses_sent_;
  });
  return true;
}

bool CoapSession::on_ap_frame(const BroadcastFrame& frame) {
  std::uint32_t seq;
  if (frame.src != config_.iot || !ours(frame, true, seq)) return false;
  ++pairs_completed_;
  return true;
}

void DownloadFlow::validate() const {
  if (!(nominal_rate_mbps > 0.0)) throw ConfigError("download.rate_mbps must be positive");
  if (transaction_cost < Ticks::zero()) throw ConfigError("download.cost_ms must be non-negative");
}

double download_throughput(const DownloadFlow& flow, std::size_t quicktalk_transactions, Ticks elapsed) {
  if (elapsed <= Ticks::zero()) return flow.nominal_rate_mbps;
  const double stolen = static_cast<double>(quicktalk_transactions) * static_cast<double>(flow.transaction_cost.count()) /
                        static_cast<double>(elapsed.count());
  return flow.nominal_rate_mbps * (1.0 - std::min(1.0, stolen));
}

double run_download(const DownloadFlow& flow, std::optional<double> quicktalk_interval_s) {
  if (!quicktalk_interval_s) return flow.nominal_rate_mbps;
  if (!(*quicktalk_interval_s > 0.0)) throw InputError("run_download: interval must be positive");
  const double stolen = to_seconds(flow.transaction_cost) / *quicktalk_interval_s;
  return flow.nominal_rate_mbps * (1.0 - std::min(1.0, stolen));
}

double fit_transaction_cost_s(double nominal_rate_mbps, std::span<const double> intervals_s,
                              std::span<const double> throughputs_mbps) {
  if (intervals_s.size() != throughputs_mbps.size() || intervals_s.empty()) {
    throw InputError("fit_transaction_cost_s: need matching, non-empty samples");
  }
  // Residual r_i = (nominal - y_i) - c * nominal / I_i, linear in c.
  double num = 0;
  double den = 0;
  for (std::size_t i = 0; i < intervals_s.size(); ++i) {
    const double a = nominal_rate_mbps / intervals_s[i];
    const double b = nominal_rate_mbps - throughputs_mbps[i];
    num += a * b;
    den += a * a;
  }
  return num / den;
}

}  // namespace quicktalk
