#include "quicktalk/report.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <algorithm>
#include <vector>

namespace quicktalk {

void write_csv_header(std::ostream& out) { out << kCsvHeader << '\n'; }

void write_csv_rows(std::ostream& out, const RunResult& run) {
  const std::string download = run.download_mbps ? fmt::format("{:.3f}", *run.download_mbps) : std::string();
  for (const auto& r : run.records) {
    fmt::print(out, "{},{},{},{:.3f},{:.3f},{:.3f},{},{},{},{:.3f},{}\n", run.scenario_name, run.seed, r.txn_id,
               r.t_search_ms, r.t_command_ms, r.t_e2e_ms, r.retx_count, r.success ? 1 : 0, run.bg_sessions,
               run.bg_interval_s, download);
  }
}

DelaySummary summarize_delays(std::span<const double> samples) {
  DelaySummary s;
  s.p10 = percentile(samples, 10);
  s.p50 = percentile(samples, 50);
  s.p80 = percentile(samples, 80);
  s.p90 = percentile(samples, 90);
  s.max = percentile(samples, 100);
  return s;
}

Summary summarize(std::span<const RunResult> runs, std::string label) {
  Summary s;
  s.label = std::move(label);
  std::vector<double> search, command, e2e;
  double download_sum = 0;
  std::size_t download_n = 0;
  for (const auto& run : runs) {
    for (const auto& r : run.records) {
      ++s.transactions;
      if (!r.success) continue;
      ++s.successes;
      search.push_back(r.t_search_ms);
      command.push_back(r.t_command_ms);
      e2e.push_back(r.t_e2e_ms);
    }
    if (run.download_mbps) {
      download_sum += *run.download_mbps;
      ++download_n;
    }
  }
  s.success_rate = s.transactions ? static_cast<double>(s.successes) / static_cast<double>(s.transactions) : 0.0;
  if (!e2e.empty()) {
    s.t_search = summarize_delays(search);
    s.t_command = summarize_delays(command);
    s.t_e2e = summarize_delays(e2e);
  }
  if (download_n) s.download_mbps = download_sum / static_cast<double>(download_n);
  return s;
}

void write_summary(std::ostream& out, const Summary& s) {
  fmt::print(out, "[{}] transactions={} successes={} success_rate={:.4f}\n", s.label, s.transactions, s.successes,
             s.success_rate);
  auto row = [&](const char* name, const std::optional<DelaySummary>& d) {
    if (!d) {
      fmt::print(out, "  {:<12} no successful transactions\n", name);
      return;
    }
    fmt::print(out, "  {:<12} p10={:.3f} p50={:.3f} p80={:.3f} p90={:.3f} max={:.3f} ms\n", name, d->p10, d->p50,
               d->p80, d->p90, d->max);
  };
  row("t_search", s.t_search);
  row("t_command", s.t_command);
  row("t_e2e", s.t_e2e);
  if (s.download_mbps) fmt::print(out, "  download     {:.3f} Mbps\n", *s.download_mbps);
}

}  // namespace quicktalk
