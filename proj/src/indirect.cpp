#include "lrwpan/indirect.hpp"

#include <algorithm>

namespace lrwpan {

std::optional<std::uint64_t> IndirectQueue::push(IndirectEntry entry) {
  if (full()) return std::nullopt;
  entry.id = next_id_++;
  entries_.push_back(std::move(entry));
  return entries_.back().id;
}

std::optional<IndirectEntry> IndirectQueue::remove(std::uint64_t id) {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [id](const IndirectEntry& e) { return e.id == id; });
  if (it == entries_.end()) return std::nullopt;
  IndirectEntry out = std::move(*it);
  entries_.erase(it);
  return out;
}

IndirectEntry* IndirectQueue::get(std::uint64_t id) {
  for (auto& e : entries_) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

IndirectEntry* IndirectQueue::next_for(const MacAddress& destination) {
  for (auto& e : entries_) {
    if (!e.in_flight && e.destination == destination) return &e;
  }
  return nullptr;
}

std::size_t IndirectQueue::count_for(const MacAddress& destination) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [&](const IndirectEntry& e) { return e.destination == destination; }));
}

std::vector<MacAddress> IndirectQueue::destinations() const {
  std::vector<MacAddress> out;
  for (const auto& e : entries_) {
    if (std::find(out.begin(), out.end(), e.destination) == out.end()) out.push_back(e.destination);
  }
  return out;
}

}  // namespace lrwpan
