#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "lrwpan/sim_time.hpp"

namespace lrwpan {

using NodeId = std::uint32_t;

/// Layer an event is addressed to. Only used for labelling and tracing.
enum class Layer : std::uint8_t { Engine, Medium, Phy, Mac, Adapter, App, Harness };

std::string_view to_string(Layer layer);

/// Target and kind of a scheduled event. `kind` must refer to storage with
/// static lifetime (string literals).
struct EventTag {
  NodeId node = 0;
  Layer layer = Layer::Engine;
  std::string_view kind;
};

struct EventHandle {
  std::uint64_t id = 0;
  constexpr bool valid() const { return id != 0; }
  friend constexpr bool operator==(EventHandle, EventHandle) = default;
};

/// Record handed to the delivery observer for every fired event.
struct DeliveredEvent {
  SimTime time;
  std::uint64_t sequence;
  EventTag tag;
};

class ClockViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deterministic discrete-event kernel.
///
/// Events are ordered by (fire time, insertion sequence), so events that share
/// a tick fire in the order they were scheduled. A single instance is not
/// thread-safe; independent instances share nothing.
class Scheduler {
 public:
  using Action = std::function<void()>;

  SimTime now() const { return now_; }

  /// Throws ClockViolation when `t` lies in the past.
  EventHandle schedule_at(SimTime t, EventTag tag, Action action);
  EventHandle schedule_in(SimTime delay, EventTag tag, Action action) {
    return schedule_at(now_ + delay, tag, std::move(action));
  }

  /// True iff the event was pending; it will never fire afterwards.
  bool cancel(EventHandle h);
  bool pending(EventHandle h) const { return index_.contains(h.id); }

  /// Delivers every event with fire time <= `until`. The clock stops at the
  /// last delivered event time and is never advanced to `until` when the
  /// queue drains early. Returns the number of events delivered.
  std::uint64_t run(SimTime until);

  /// Delivers exactly one event if any is pending.
  bool step();

  std::size_t queued() const { return queue_.size(); }
  std::uint64_t delivered() const { return delivered_; }
  std::optional<SimTime> next_time() const;

  void set_observer(std::function<void(const DeliveredEvent&)> observer) {
    observer_ = std::move(observer);
  }

 private:
  struct Entry {
    EventTag tag;
    Action action;
  };
  using Key = std::pair<std::uint64_t, std::uint64_t>;  // (time, sequence)

  void fire(std::map<Key, Entry>::iterator it);

  SimTime now_;
  std::uint64_t next_seq_ = 1;
  std::uint64_t delivered_ = 0;
  std::map<Key, Entry> queue_;
  std::unordered_map<std::uint64_t, std::uint64_t> index_;  // sequence -> time
  std::function<void(const DeliveredEvent&)> observer_;
};

}  // namespace lrwpan
