#include "quicktalk/batch.hpp"

#include <algorithm>
#include <exception>
#include <numeric>

#include "quicktalk/error.hpp"

namespace quicktalk {

namespace {

std::vector<std::size_t> seed_order(std::span<const std::uint64_t> seeds) {
  std::vector<std::size_t> order(seeds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return seeds[a] < seeds[b]; });
  return order;
}

std::vector<RunResult> collect(std::span<const std::uint64_t> seeds, std::vector<RunResult>& results,
                               std::vector<std::exception_ptr>& errors) {
  const auto order = seed_order(seeds);
  for (std::size_t i : order) {
    if (errors[i]) std::rethrow_exception(errors[i]);
  }
  std::vector<RunResult> sorted;
  sorted.reserve(results.size());
  for (std::size_t i : order) sorted.push_back(std::move(results[i]));
  return sorted;
}

}  // namespace

std::vector<RunResult> run_batch_serial(const Scenario& scenario, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw InputError("batch: empty seed list");
  std::vector<RunResult> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    try {
      results[i] = run_scenario(scenario, seeds[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  return collect(seeds, results, errors);
}

std::vector<RunResult> run_batch_parallel(const Scenario& scenario, std::span<const std::uint64_t> seeds) {
  if (seeds.empty()) throw InputError("batch: empty seed list");
  std::vector<RunResult> results(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  const auto n = static_cast<std::int64_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      results[i] = run_scenario(scenario, seeds[i]);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  return collect(seeds, results, errors);
}

}  // namespace quicktalk
