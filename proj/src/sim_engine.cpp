#include "quicktalk/sim_engine.hpp"

#include <algorithm>
#include <cmath>

#include "quicktalk/error.hpp"

namespace quicktalk {

EventHandle Engine::schedule(Ticks delay, std::string label, Action action) {
  if (delay < Ticks::zero()) throw InputError("Engine::schedule: negative delay for '" + label + "'");
  return schedule_at(now_ + delay, std::move(label), std::move(action));
}

EventHandle Engine::schedule_at(SimTime when, std::string label, Action action) {
  if (when < now_) throw InputError("Engine::schedule_at: event '" + label + "' is in the past");
  const std::uint64_t seq = next_sequence_++;
  queue_.push(std::make_shared<Event>(Event{when, seq, std::move(label), std::move(action)}));
  live_.insert(seq);
  return EventHandle{seq};
}

bool Engine::cancel(EventHandle handle) {
  if (!handle || !live_.contains(handle.sequence)) return false;
  live_.erase(handle.sequence);
  cancelled_.insert(handle.sequence);
  return true;
}

bool Engine::step(SimTime t_end) {
  while (!queue_.empty()) {
    auto top = queue_.top();
    if (cancelled_.erase(top->sequence) > 0) {
      queue_.pop();
      continue;
    }
    if (top->time > t_end) return false;
    queue_.pop();
    live_.erase(top->sequence);
    now_ = top->time;
    if (tracing_) trace_.push_back({top->time, top->sequence, top->label});
    top->action();
    return true;
  }
  return false;
}

std::size_t Engine::run_until(SimTime t_end) {
  if (t_end < now_) throw InputError("Engine::run_until: t_end is before now");
  std::size_t executed = 0;
  while (step(t_end)) ++executed;
  now_ = t_end;
  return executed;
}

std::size_t Engine::run() {
  std::size_t executed = 0;
  while (step(SimTime::max())) ++executed;
  return executed;
}

RandomStream& Engine::stream(std::string_view name) {
  auto it = streams_.find(name);
  if (it == streams_.end()) {
    it = streams_.emplace(std::string(name), RandomStream(master_seed_, name)).first;
  }
  return it->second;
}

double percentile(std::span<const double> samples, double p) {
  if (samples.empty()) throw InputError("percentile: empty sample list");
  if (!(p >= 0.0 && p <= 100.0)) throw InputError("percentile: p must lie in [0, 100]");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n / 100.0));
  rank = std::clamp<std::size_t>(rank, 1, sorted.size());
  return sorted[rank - 1];
}

}  // namespace quicktalk
