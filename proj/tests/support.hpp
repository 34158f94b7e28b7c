#pragma once

// Shared fixtures and independent oracles for the test suites.

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lrwpan/frames.hpp"
#include "lrwpan/mac.hpp"
#include "lrwpan/medium.hpp"
#include "lrwpan/phy.hpp"
#include "lrwpan/rng.hpp"
#include "lrwpan/trace.hpp"

namespace lrwpan::test {

/// Bit-at-a-time CRC-16 (polynomial 0x1021, reflected, zero init).
inline std::uint16_t crc16_bitwise(const std::vector<std::uint8_t>& data) {
  std::uint16_t crc = 0;
  for (std::uint8_t byte : data) {
    for (int bit = 0; bit < 8; ++bit) {
      const bool in = ((byte >> bit) & 1) != 0;
      const bool top = (crc & 1) != 0;
      crc >>= 1;
      if (in != top) crc ^= 0x8408;
    }
  }
  return crc;
}

/// Frame control packed field by field from the bit positions of the wire layout.
inline std::uint16_t pack_frame_control(unsigned type, bool security, bool pending, bool ack, bool compression,
                                        unsigned dst_mode, unsigned version, unsigned src_mode) {
  std::uint16_t w = 0;
  for (unsigned b = 0; b < 3; ++b) w |= static_cast<std::uint16_t>(((type >> b) & 1) << b);
  w |= static_cast<std::uint16_t>(security << 3);
  w |= static_cast<std::uint16_t>(pending << 4);
  w |= static_cast<std::uint16_t>(ack << 5);
  w |= static_cast<std::uint16_t>(compression << 6);
  for (unsigned b = 0; b < 2; ++b) w |= static_cast<std::uint16_t>(((dst_mode >> b) & 1) << (10 + b));
  for (unsigned b = 0; b < 2; ++b) w |= static_cast<std::uint16_t>(((version >> b) & 1) << (12 + b));
  for (unsigned b = 0; b < 2; ++b) w |= static_cast<std::uint16_t>(((src_mode >> b) & 1) << (14 + b));
  return w;
}

inline std::uint16_t pack_superframe_spec(unsigned bo, unsigned so, unsigned final_cap, bool ble, bool coord,
                                          bool permit) {
  return static_cast<std::uint16_t>(bo | so << 4 | final_cap << 8 | unsigned{ble} << 12 | unsigned{coord} << 14 |
                                    unsigned{permit} << 15);
}

/// Log-distance received power in dBm.
inline double log_distance_rx(double tx_dbm, double d_m, double pl0 = 40.2, double n = 2.0) {
  return tx_dbm - (pl0 + 10.0 * n * std::log10(std::max(d_m, 1.0)));
}

inline double dbm_sum(double a, double b) {
  return 10.0 * std::log10(std::pow(10.0, a / 10.0) + std::pow(10.0, b / 10.0));
}

/// Random frame that satisfies the codec's addressing rules.
inline Frame random_frame(RngStream& rng) {
  auto coin = [&] { return rng.below(2) == 1; };
  auto address = [&](AddrMode m) -> MacAddress {
    if (m == AddrMode::Short) return ShortAddress{static_cast<std::uint16_t>(rng.below(0x10000))};
    if (m == AddrMode::Extended) return ExtAddress{rng.next_u64()};
    return std::monostate{};
  };
  const AddrMode modes[] = {AddrMode::None, AddrMode::Short, AddrMode::Extended};

  Frame f;
  const FrameType types[] = {FrameType::Beacon, FrameType::Data, FrameType::Ack, FrameType::Command};
  f.control.frame_type = types[rng.below(4)];
  f.control.frame_pending = coin();
  f.control.ack_request = coin();
  f.control.frame_version = coin() ? FrameVersion::V2006 : FrameVersion::V2003;
  f.sequence_number = static_cast<std::uint8_t>(rng.below(256));
  if (f.control.frame_type == FrameType::Ack) return f;

  const AddrMode dst_mode = modes[rng.below(3)];
  const AddrMode src_mode = modes[rng.below(3)];
  f.control.dst_addr_mode = dst_mode;
  f.control.src_addr_mode = src_mode;
  f.dst = address(dst_mode);
  f.src = address(src_mode);
  if (dst_mode != AddrMode::None) f.dst_pan = static_cast<std::uint16_t>(rng.below(0x10000));
  if (src_mode != AddrMode::None) {
    if (dst_mode != AddrMode::None && coin()) {
      f.control.pan_id_compression = true;
      f.src_pan = f.dst_pan;
    } else {
      f.src_pan = static_cast<std::uint16_t>(rng.below(0x10000));
    }
  }
  if (f.control.frame_type == FrameType::Command) f.command = static_cast<CommandId>(1 + rng.below(9));
  const std::size_t room = max_payload_size(f);
  f.payload.resize(rng.below(room + 1));
  for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng.below(256));
  return f;
}

/// Records everything a MAC reports upwards, with arrival times.
struct Recorder : MacUser {
  explicit Recorder(const Scheduler& s) : sched(s) {}

  template <class T>
  struct At {
    SimTime time;
    T value;
  };

  void mcps_data_confirm(const McpsDataConfirm& c) override { data_confirms.push_back({sched.now(), c}); }
  void mcps_data_indication(const McpsDataIndication& i) override { indications.push_back({sched.now(), i}); }
  void mlme_associate_confirm(const MlmeAssociateConfirm& c) override { associate.push_back({sched.now(), c}); }
  void mlme_start_confirm(Status s) override { start.push_back({sched.now(), s}); }
  void mlme_scan_confirm(const MlmeScanConfirm& c) override { scans.push_back({sched.now(), c}); }
  void mlme_gts_confirm(const MlmeGtsConfirm& c) override { gts.push_back({sched.now(), c}); }
  void mlme_poll_confirm(Status s) override { polls.push_back({sched.now(), s}); }
  void mlme_sync_loss_indication(Status s) override { sync_loss.push_back({sched.now(), s}); }
  void mlme_comm_status_indication(const MlmeCommStatus& c) override { comm.push_back({sched.now(), c}); }
  void mlme_beacon_notify_indication(const MlmeBeaconNotify& b) override { beacons.push_back({sched.now(), b}); }

  const Scheduler& sched;
  std::vector<At<McpsDataConfirm>> data_confirms;
  std::vector<At<McpsDataIndication>> indications;
  std::vector<At<MlmeAssociateConfirm>> associate;
  std::vector<At<Status>> start;
  std::vector<At<MlmeScanConfirm>> scans;
  std::vector<At<MlmeGtsConfirm>> gts;
  std::vector<At<Status>> polls;
  std::vector<At<Status>> sync_loss;
  std::vector<At<MlmeCommStatus>> comm;
  std::vector<At<MlmeBeaconNotify>> beacons;
};

inline constexpr std::uint16_t kPan = 0x1234;

/// PHY + MAC + recorder for one node.
struct Station {
  Station(NodeId id, Scheduler& s, Medium& m, Trace& t, Position pos, std::uint64_t seed)
      : phy(id, s, m, &t, PhyConfig{}, pos), mac(id, s, phy, seed, &t), user(s) {
    mac.set_user(&user);
    mac.pib().extended_address = ExtAddress{0xACDE480000000000ULL + id};
  }
  Phy phy;
  Mac mac;
  Recorder user;
};

/// A shared medium with any number of stations.
struct Testbed {
  explicit Testbed(std::uint64_t seed = 1) : seed(seed) {}

  Station& add(NodeId id, Position pos) {
    stations.push_back(std::make_unique<Station>(id, sched, medium, trace, pos, seed));
    return *stations.back();
  }

  /// Coordinator with short address 0 on PAN kPan.
  Station& coordinator(NodeId id, Position pos, std::uint8_t bo = 15, std::uint8_t so = 15) {
    Station& c = add(id, pos);
    c.mac.pib().short_address = ShortAddress{0x0000};
    c.mac.pib().association_permit = true;
    c.mac.mlme_set(PibAttribute::macRxOnWhenIdle, true);
    c.mac.mlme_start_request(MlmeStartRequest{kPan, 11, bo, so, true, false});
    return c;
  }

  /// Device already associated with the coordinator at short address 0.
  Station& device(NodeId id, Position pos, std::uint16_t short_addr, bool rx_on = true) {
    Station& d = add(id, pos);
    auto& pib = d.mac.pib();
    pib.pan_id = kPan;
    pib.short_address = ShortAddress{short_addr};
    pib.coord_short_address = ShortAddress{0x0000};
    d.mac.mlme_set(PibAttribute::macRxOnWhenIdle, rx_on);
    return d;
  }

  std::size_t count(std::string_view event, std::optional<NodeId> node = std::nullopt) const {
    return trace.select(event, node).size();
  }

  std::uint64_t seed;
  Scheduler sched;
  Medium medium{sched};
  Trace trace;
  std::vector<std::unique_ptr<Station>> stations;
};

/// Raw transmitter that keeps a channel occupied with back-to-back frames.
struct Jammer : PhyUser {
  Jammer(NodeId id, Scheduler& s, Medium& m, Trace& t, Position pos, std::uint8_t channel)
      : phy(id, s, m, &t, PhyConfig{}, pos) {
    phy.set_user(this);
    phy.plme_set(PibAttribute::phyCurrentChannel, std::int64_t{channel});
  }
  void start() { phy.plme_set_trx_state_request(TrxRequest::TxOn); }
  void stop() { running = false; }
  void plme_set_trx_state_confirm(Status s) override {
    if (s == Status::Success && running) phy.pd_data_request(Bytes(kMaxPhyPacketSize, 0xEE));
  }
  void pd_data_confirm(Status) override {
    if (running) phy.pd_data_request(Bytes(kMaxPhyPacketSize, 0xEE));
  }
  Phy phy;
  bool running = true;
};

inline McpsDataRequest data_to(MacAddress dst, std::size_t len, bool ack = true, std::uint8_t handle = 0) {
  McpsDataRequest r;
  r.dst_pan = kPan;
  r.dst = dst;
  r.msdu.assign(len, 0xA5);
  r.handle = handle;
  r.options.ack = ack;
  return r;
}

}  // namespace lrwpan::test
