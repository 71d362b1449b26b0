#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <unordered_map>
#include <vector>

#include "manetsim/sim/time.hpp"

namespace manet::sim {

using Action = std::function<void()>;

/// Opaque handle for a scheduled event, usable to cancel it.
using EventHandle = std::uint64_t;

/// Deterministic discrete-event queue.
///
/// Events are totally ordered by (fire time, insertion sequence), so two
/// events scheduled for the same instant fire in the order they were
/// scheduled. Cancellation is lazy: the heap entry stays put and is
/// skipped when popped.
class EventQueue {
 public:
  SimTime now() const { return now_; }

  /// Schedules an action at an absolute time. Throws SchedulingInPast if
  /// the time is before the current clock; scheduling exactly at the
  /// clock is allowed.
  EventHandle schedule(SimTime at, Action action);

  EventHandle schedule_in(SimTime delay, Action action) {
    return schedule(now_ + delay, std::move(action));
  }

  /// Cancels a pending event. Throws CancelError if the handle is
  /// unknown, already fired, or already cancelled.
  void cancel(EventHandle h);

  /// Runs every event with fire time <= end (boundary inclusive), in
  /// order, then advances the clock to end. Events scheduled while
  /// running are processed in the same call if they fall within the
  /// boundary. Returns the number of events executed.
  std::uint64_t run_until(SimTime end);

  std::size_t pending_count() const { return live_.size(); }
  bool empty() const { return live_.empty(); }

 private:
  struct HeapEntry {
    SimTime at;
    EventHandle seq;
    bool operator>(const HeapEntry& o) const {
      if (at != o.at) return o.at < at;
      return seq > o.seq;
    }
  };

  SimTime now_{};
  EventHandle next_seq_ = 1;
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> heap_;
  std::unordered_map<EventHandle, Action> live_;
};

}  // namespace manet::sim
