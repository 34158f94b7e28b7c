#include "lrwpan/gts.hpp"

#include <algorithm>

namespace lrwpan {

void GtsTable::set_superframe_order(std::uint8_t so) {
  if (so != superframe_order_) descriptors_.clear();
  superframe_order_ = so;
}

std::uint8_t GtsTable::cfp_slots() const {
  unsigned total = 0;
  for (const auto& d : descriptors_) total += d.length;
  return static_cast<std::uint8_t>(total);
}

std::optional<GtsDescriptor> GtsTable::allocate(ShortAddress device, std::uint8_t length, GtsDirection direction) {
  if (superframe_order_ >= 15 || length == 0 || length > 15) return std::nullopt;
  if (descriptors_.size() >= kMaxGtsDescriptors) return std::nullopt;
  if (find(device, direction)) return std::nullopt;
  const int start = int{first_cfp_slot()} - length;
  // Slot 0 carries the beacon and always belongs to the CAP.
  if (start < 1) return std::nullopt;
  if (static_cast<std::uint32_t>(start) * slot_symbols(superframe_order_) < kMinCapSymbols) return std::nullopt;
  GtsDescriptor d{device, static_cast<std::uint8_t>(start), length, direction};
  descriptors_.push_back(d);
  return d;
}

bool GtsTable::deallocate(ShortAddress device, GtsDirection direction) {
  const auto it = std::find_if(descriptors_.begin(), descriptors_.end(), [&](const GtsDescriptor& d) {
    return d.device == device && d.direction == direction;
  });
  if (it == descriptors_.end()) return false;
  descriptors_.erase(it);
  repack();
  return true;
}

std::optional<GtsDescriptor> GtsTable::find(ShortAddress device, GtsDirection direction) const {
  for (const auto& d : descriptors_) {
    if (d.device == device && d.direction == direction) return d;
  }
  return std::nullopt;
}

void GtsTable::repack() {
  unsigned end = kNumSuperframeSlots;
  for (auto& d : descriptors_) {
    d.starting_slot = static_cast<std::uint8_t>(end - d.length);
    end = d.starting_slot;
  }
}

}  // namespace lrwpan
