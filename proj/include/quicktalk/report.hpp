#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "quicktalk/simulation.hpp"

namespace quicktalk {

/// Column order of the per-transaction CSV. Never varies with content.
inline constexpr const char* kCsvHeader =
    "scenario_name,seed,txn_id,t_search_ms,t_command_ms,t_e2e_ms,retx_count,success,bg_sessions,bg_interval_s,"
    "download_mbps";

void write_csv_header(std::ostream& out);
/// One row per transaction; delays with three decimals. download_mbps is
/// empty when the download flow is disabled.
void write_csv_rows(std::ostream& out, const RunResult& run);

struct DelaySummary {
  double p10 = 0, p50 = 0, p80 = 0, p90 = 0, max = 0;
};

struct Summary {
  std::string label;
  std::size_t transactions = 0;
  std::size_t successes = 0;
  double success_rate = 0;
  /// Percentiles over successful transactions; empty if there were none.
  std::optional<DelaySummary> t_search;
  std::optional<DelaySummary> t_command;
  std::optional<DelaySummary> t_e2e;
  /// Mean over the runs that report it.
  std::optional<double> download_mbps;
};

DelaySummary summarize_delays(std::span<const double> samples_ms);
Summary summarize(std::span<const RunResult> runs, std::string label);
void write_summary(std::ostream& out, const Summary& summary);

}  // namespace quicktalk
