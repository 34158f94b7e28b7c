#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lrwpan/constants.hpp"
#include "lrwpan/frames.hpp"

namespace lrwpan {

struct GtsDescriptor {
  ShortAddress device;
  std::uint8_t starting_slot = 0;
  std::uint8_t length = 0;
  GtsDirection direction = GtsDirection::Transmit;

  std::uint8_t end_slot() const { return static_cast<std::uint8_t>(starting_slot + length); }
  friend bool operator==(const GtsDescriptor&, const GtsDescriptor&) = default;
};

/// Coordinator-side GTS bookkeeping.
///
/// Slots are handed out first-fit from the end of the superframe downwards,
/// so the CFP is always the contiguous block [first_cfp_slot(), 16). A
/// request is refused if it would be the eighth descriptor, duplicate an
/// existing (device, direction) pair, or shrink the CAP below aMinCAPLength.
class GtsTable {
 public:
  explicit GtsTable(std::uint8_t superframe_order = 15) : superframe_order_(superframe_order) {}

  /// Drops every allocation when the order changes.
  void set_superframe_order(std::uint8_t so);
  std::uint8_t superframe_order() const { return superframe_order_; }

  std::optional<GtsDescriptor> allocate(ShortAddress device, std::uint8_t length, GtsDirection direction);
  /// Removes the descriptor and packs the remaining ones towards the end.
  bool deallocate(ShortAddress device, GtsDirection direction);
  void clear() { descriptors_.clear(); }

  std::optional<GtsDescriptor> find(ShortAddress device, GtsDirection direction) const;
  std::span<const GtsDescriptor> descriptors() const { return descriptors_; }

  std::uint8_t cfp_slots() const;
  std::uint8_t first_cfp_slot() const { return static_cast<std::uint8_t>(kNumSuperframeSlots - cfp_slots()); }
  std::uint8_t final_cap_slot() const { return static_cast<std::uint8_t>(first_cfp_slot() - 1); }
  std::uint32_t cap_symbols() const { return std::uint32_t{first_cfp_slot()} * slot_symbols(superframe_order_); }

 private:
  void repack();

  std::uint8_t superframe_order_;
  std::vector<GtsDescriptor> descriptors_;  // in allocation order
};

}  // namespace lrwpan
