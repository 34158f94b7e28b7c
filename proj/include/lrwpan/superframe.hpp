#pragma once

#include <cstdint>

#include "lrwpan/constants.hpp"

namespace lrwpan {

/// Window in which slotted CSMA-CA may count backoffs and must finish its
/// transaction. Backoff boundaries are multiples of aUnitBackoffPeriod from
/// `origin` (the superframe start).
struct CapWindow {
  SimTime origin;
  SimTime begin;  // first usable boundary (after the beacon)
  SimTime end;    // transactions must complete by this time
};

/// Timing of one superframe, anchored at the onset of its beacon.
struct SuperframeTiming {
  SimTime start;
  PhyTiming phy;
  std::uint8_t beacon_order = 15;
  std::uint8_t superframe_order = 15;
  std::uint8_t final_cap_slot = 15;
  SimTime beacon_airtime;

  SimTime backoff() const { return phy.backoff_period(); }
  SimTime slot() const { return phy.symbols(slot_symbols(superframe_order)); }
  SimTime beacon_interval() const { return phy.symbols(beacon_interval_symbols(beacon_order)); }
  SimTime duration() const { return phy.symbols(superframe_duration_symbols(superframe_order)); }
  SimTime next_start() const { return start + beacon_interval(); }
  SimTime active_end() const { return start + duration(); }
  SimTime slot_start(std::uint32_t slot_index) const { return start + slot() * slot_index; }
  SimTime cap_end() const { return slot_start(final_cap_slot + 1u); }
  SimTime cap_begin() const { return align_up(start + beacon_airtime, start, backoff()); }

  /// CAP window for CSMA-CA. The last aTurnaroundTime of the CAP is kept
  /// free so the radio can turn around for the CFP or the next beacon.
  CapWindow cap_window() const { return CapWindow{start, cap_begin(), cap_end() - phy.turnaround()}; }
};

}  // namespace lrwpan
