#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "quicktalk/random.hpp"
#include "quicktalk/time.hpp"

namespace quicktalk {

/// Identifies a scheduled event; valid until the event fires or is cancelled.
struct EventHandle {
  std::uint64_t sequence = 0;
  explicit operator bool() const { return sequence != 0; }
};

struct TraceEntry {
  SimTime time;
  std::uint64_t sequence;
  std::string label;
  bool operator==(const TraceEntry&) const = default;
};

/// Deterministic discrete-event core. Events execute in (timestamp, sequence)
/// order; sequence numbers are assigned at schedule time, so two events for
/// the same instant run in the order they were scheduled.
class Engine {
 public:
  using Action = std::function<void()>;

  explicit Engine(std::uint64_t master_seed = 0) : master_seed_(master_seed) {}
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  SimTime now() const { return now_; }
  std::uint64_t master_seed() const { return master_seed_; }

  /// Enqueue at now + delay. Throws InputError on negative delay.
  EventHandle schedule(Ticks delay, std::string label, Action action);
  EventHandle schedule_at(SimTime when, std::string label, Action action);

  /// Returns true if the event was pending and is now cancelled.
  bool cancel(EventHandle handle);

  /// Executes every event with timestamp <= t_end, then sets the clock to
  /// t_end. Returns the number of events executed.
  std::size_t run_until(SimTime t_end);

  /// Runs until the queue drains.
  std::size_t run();

  std::size_t pending() const { return queue_.size() - cancelled_.size(); }

  /// Named stream seeded by hash(master_seed, name). The same name returns the
  /// same stream object for the lifetime of the engine.
  RandomStream& stream(std::string_view name);

  void set_tracing(bool on) { tracing_ = on; }
  const std::vector<TraceEntry>& trace() const { return trace_; }

 private:
  struct Event {
    SimTime time;
    std::uint64_t sequence;
    std::string label;
    Action action;
  };
  struct Later {
    bool operator()(const std::shared_ptr<Event>& a, const std::shared_ptr<Event>& b) const {
      return a->time != b->time ? a->time > b->time : a->sequence > b->sequence;
    }
  };

  bool step(SimTime t_end);

  SimTime now_{0};
  std::uint64_t next_sequence_ = 1;
  std::uint64_t master_seed_;
  std::priority_queue<std::shared_ptr<Event>, std::vector<std::shared_ptr<Event>>, Later> queue_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::unordered_set<std::uint64_t> live_;
  std::map<std::string, RandomStream, std::less<>> streams_;
  bool tracing_ = false;
  std::vector<TraceEntry> trace_;
};

/// Metrics of one QuickTalk attempt. Delays in milliseconds.
struct TransactionRecord {
  std::uint32_t txn_id = 0;
  double t_search_ms = 0;
  double t_command_ms = 0;
  double t_e2e_ms = 0;
  int retx_count = 0;
  bool success = false;
  bool reached_command = false;
  std::uint64_t seed = 0;
};

/// Nearest-rank percentile: the ceil(p/100 * n)-th order statistic (1-based),
/// with p = 0 mapping to the minimum. Throws InputError on empty input or p
/// outside [0, 100].
double percentile(std::span<const double> samples, double p);

}  // namespace quicktalk
