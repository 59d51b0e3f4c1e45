#include "pcosync/event_queue.hpp"

#include <algorithm>
#include <string>

namespace pcosync {

void EventQueue::schedule(SimTime at, EventKind kind, std::function<void()> action) {
  if (at < now_) {
    throw CausalityError("event scheduled in the past: at " + std::to_string(at.ns()) +
                         " ns, now " + std::to_string(now_.ns()) + " ns");
  }
  heap_.push_back(Event{at, next_seq_++, kind, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), later);
}

std::size_t EventQueue::run_until(SimTime t_end) {
  if (t_end < now_) throw CausalityError("run_until target precedes current time");
  std::size_t processed = 0;
  while (!heap_.empty() && heap_.front().fire_at <= t_end) {
    std::pop_heap(heap_.begin(), heap_.end(), later);
    Event ev = std::move(heap_.back());
    heap_.pop_back();
    now_ = ev.fire_at;
    if (ev.action) ev.action();
    ++processed;
  }
  now_ = t_end;
  return processed;
}

}  // namespace pcosync
