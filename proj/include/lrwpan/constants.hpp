#pragma once

#include <cstdint>

#include "lrwpan/sim_time.hpp"

namespace lrwpan {

// PHY constants (2006 revision).
inline constexpr std::uint32_t kMaxPhyPacketSize = 127;  // aMaxPHYPacketSize
inline constexpr std::uint32_t kTurnaroundSymbols = 12;  // aTurnaroundTime
inline constexpr std::uint32_t kCcaSymbols = 8;
inline constexpr std::uint32_t kPhyHeaderBytes = 6;  // SHR (preamble + SFD) + PHR

// MAC constants, in symbols unless noted.
inline constexpr std::uint32_t kBaseSlotSymbols = 60;  // aBaseSlotDuration
inline constexpr std::uint32_t kNumSuperframeSlots = 16;
inline constexpr std::uint32_t kBaseSuperframeSymbols = kBaseSlotSymbols * kNumSuperframeSlots;
inline constexpr std::uint32_t kUnitBackoffSymbols = 20;
inline constexpr std::uint32_t kMinCapSymbols = 440;
inline constexpr std::uint32_t kMaxLostBeacons = 4;
inline constexpr std::uint32_t kGtsDescPersistence = 4;  // superframes
inline constexpr std::uint32_t kMaxGtsDescriptors = 7;
inline constexpr std::uint32_t kMaxSifsFrameSize = 18;
inline constexpr std::uint32_t kSifsSymbols = 12;
inline constexpr std::uint32_t kLifsSymbols = 40;
inline constexpr std::uint32_t kMaxBeaconPendingAddresses = 7;
inline constexpr std::uint32_t kIndirectQueueCapacity = 8;

/// Symbol and rate parameters of the band a channel belongs to.
struct PhyTiming {
  SimTime symbol;                  // duration of one symbol
  std::uint32_t bits_per_symbol;   // 4 for O-QPSK, 1 for BPSK
  std::uint32_t shr_symbols;       // synchronisation header

  /// 868 MHz (channel 0), 915 MHz (1..10) or 2.4 GHz (11..26).
  static constexpr PhyTiming for_channel(std::uint8_t channel) {
    if (channel == 0) return PhyTiming{SimTime{50}, 1, 40};
    if (channel <= 10) return PhyTiming{SimTime{25}, 1, 40};
    return PhyTiming{SimTime{16}, 4, 10};
  }

  constexpr std::uint32_t symbols_per_octet() const { return 8 / bits_per_symbol; }
  constexpr SimTime symbols(std::uint64_t n) const { return symbol * n; }
  constexpr SimTime backoff_period() const { return symbols(kUnitBackoffSymbols); }
  constexpr SimTime turnaround() const { return symbols(kTurnaroundSymbols); }
  constexpr SimTime cca_window() const { return symbols(kCcaSymbols); }

  /// On-air symbols of a PPDU carrying `psdu_len` bytes (SHR + PHR + PSDU).
  constexpr std::uint64_t frame_symbols(std::uint32_t psdu_len) const {
    return std::uint64_t{kPhyHeaderBytes + psdu_len} * symbols_per_octet();
  }
  constexpr SimTime airtime(std::uint32_t psdu_len) const { return symbols(frame_symbols(psdu_len)); }

  /// phyMaxFrameDuration: SHR + ceil((aMaxPHYPacketSize + 1) * symbols per octet).
  constexpr std::uint32_t max_frame_symbols() const {
    return shr_symbols + (kMaxPhyPacketSize + 1) * symbols_per_octet();
  }

  /// macAckWaitDuration: aUnitBackoffPeriod + aTurnaroundTime + SHR + 6 octets.
  constexpr std::uint32_t ack_wait_symbols() const {
    return kUnitBackoffSymbols + kTurnaroundSymbols + shr_symbols + 6 * symbols_per_octet();
  }

  friend constexpr bool operator==(const PhyTiming&, const PhyTiming&) = default;
};

inline constexpr std::uint32_t beacon_interval_symbols(std::uint8_t beacon_order) {
  return kBaseSuperframeSymbols << beacon_order;
}
inline constexpr std::uint32_t superframe_duration_symbols(std::uint8_t superframe_order) {
  return kBaseSuperframeSymbols << superframe_order;
}
inline constexpr std::uint32_t slot_symbols(std::uint8_t superframe_order) {
  return kBaseSlotSymbols << superframe_order;
}
/// Scan dwell per channel: aBaseSuperframeDuration * (2^n + 1) symbols.
inline constexpr std::uint32_t scan_dwell_symbols(std::uint8_t n) {
  return kBaseSuperframeSymbols * ((1u << n) + 1);
}

}  // namespace lrwpan
