#include "lrwpan/engine.hpp"

#include <string>

namespace lrwpan {

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::Engine:
      return "engine";
    case Layer::Medium:
      return "medium";
    case Layer::Phy:
      return "phy";
    case Layer::Mac:
      return "mac";
    case Layer::Adapter:
      return "adapter";
    case Layer::App:
      return "app";
    case Layer::Harness:
      return "harness";
  }
  return "?";
}

EventHandle Scheduler::schedule_at(SimTime t, EventTag tag, Action action) {
  if (t < now_) {
    throw ClockViolation("event '" + std::string(tag.kind) + "' scheduled at " +
                         std::to_string(t.us()) + "us, clock is at " + std::to_string(now_.us()) +
                         "us");
  }
  const std::uint64_t seq = next_seq_++;
  queue_.emplace(Key{t.us(), seq}, Entry{tag, std::move(action)});
  index_.emplace(seq, t.us());
  return EventHandle{seq};
}

bool Scheduler::cancel(EventHandle h) {
  auto it = index_.find(h.id);
  if (it == index_.end()) return false;
  queue_.erase(Key{it->second, h.id});
  index_.erase(it);
  return true;
}

std::optional<SimTime> Scheduler::next_time() const {
  if (queue_.empty()) return std::nullopt;
  return SimTime{queue_.begin()->first.first};
}

void Scheduler::fire(std::map<Key, Entry>::iterator it) {
  const auto [time, seq] = it->first;
  Entry entry = std::move(it->second);
  queue_.erase(it);
  index_.erase(seq);
  now_ = SimTime{time};
  ++delivered_;
  if (observer_) observer_(DeliveredEvent{now_, seq, entry.tag});
  entry.action();
}

std::uint64_t Scheduler::run(SimTime until) {
  std::uint64_t count = 0;
  while (!queue_.empty() && queue_.begin()->first.first <= until.us()) {
    fire(queue_.begin());
    ++count;
  }
  return count;
}

bool Scheduler::step() {
  if (queue_.empty()) return false;
  fire(queue_.begin());
  return true;
}

}  // namespace lrwpan
