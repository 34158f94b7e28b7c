#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "lrwpan/constants.hpp"
#include "lrwpan/engine.hpp"
#include "lrwpan/frames.hpp"

namespace lrwpan {

/// What a queued frame is for; decides which confirm its outcome produces.
enum class IndirectKind : std::uint8_t { Msdu, AssociationResponse };

struct IndirectEntry {
  std::uint64_t id = 0;
  MacAddress destination;
  Frame frame;
  IndirectKind kind = IndirectKind::Msdu;
  std::uint8_t msdu_handle = 0;
  SimTime enqueued;
  SimTime expiry;
  EventHandle expiry_event;
  bool in_flight = false;  // currently being sent after a data request
  bool expired = false;    // persistence ran out while in flight
};

/// Coordinator transaction queue for indirect transmission.
class IndirectQueue {
 public:
  explicit IndirectQueue(std::size_t capacity = kIndirectQueueCapacity) : capacity_(capacity) {}

  /// Assigns the entry id. Returns nullopt when the queue is full.
  std::optional<std::uint64_t> push(IndirectEntry entry);
  std::optional<IndirectEntry> remove(std::uint64_t id);

  IndirectEntry* get(std::uint64_t id);
  /// Oldest entry for `destination` that is not already being sent.
  IndirectEntry* next_for(const MacAddress& destination);
  std::size_t count_for(const MacAddress& destination) const;

  /// Distinct destinations in queue order, for the beacon pending list.
  std::vector<MacAddress> destinations() const;

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return entries_.size() >= capacity_; }
  const std::deque<IndirectEntry>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::uint64_t next_id_ = 1;
  std::deque<IndirectEntry> entries_;
};

}  // namespace lrwpan
