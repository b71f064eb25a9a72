#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quicktalk/simulation.hpp"

namespace quicktalk {

/// Runs one simulation per seed. Results come back sorted by seed (stable for
/// repeated seeds), so the merged CSV is ordered by (seed, txn_id). If any run
/// throws, the exception of the earliest seed in that order is rethrown after
/// all runs finish. Throws InputError on an empty seed list.
std::vector<RunResult> run_batch_serial(const Scenario& scenario, std::span<const std::uint64_t> seeds);

/// Same contract; seeds run concurrently, each on its own engine.
std::vector<RunResult> run_batch_parallel(const Scenario& scenario, std::span<const std::uint64_t> seeds);

}  // namespace quicktalk
