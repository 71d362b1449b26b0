#include "manetsim/sim/event_queue.hpp"

#include <string>
#include <utility>

#include "manetsim/error.hpp"

namespace manet::sim {

EventHandle EventQueue::schedule(SimTime at, Action action) {
  if (at < now_) {
    throw SchedulingInPast("schedule at t=" + std::to_string(at.us) +
                           "us before clock t=" + std::to_string(now_.us) + "us");
  }
  const EventHandle h = next_seq_++;
  heap_.push(HeapEntry{at, h});
  live_.emplace(h, std::move(action));
  return h;
}

void EventQueue::cancel(EventHandle h) {
  auto it = live_.find(h);
  if (it == live_.end()) {
    throw CancelError("cancel of event " + std::to_string(h) +
                      ": not pending (unknown, fired, or already cancelled)");
  }
  live_.erase(it);
}

std::uint64_t EventQueue::run_until(SimTime end) {
  std::uint64_t executed = 0;
  while (!heap_.empty() && heap_.top().at <= end) {
    const HeapEntry top = heap_.top();
    heap_.pop();
    auto it = live_.find(top.seq);
    if (it == live_.end()) continue;  // cancelled
    Action action = std::move(it->second);
    live_.erase(it);
    now_ = top.at;
    action();
    ++executed;
  }
  if (end > now_) now_ = end;
  return executed;
}

}  // namespace manet::sim
