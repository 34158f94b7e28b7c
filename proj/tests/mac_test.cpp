#include <gtest/gtest.h>

#include <string>

#include "lrwpan/gts.hpp"
#include "lrwpan/indirect.hpp"
#include "lrwpan/mac.hpp"
#include "support.hpp"

namespace lrwpan {
namespace {

using test::data_to;
using test::Jammer;
using test::kPan;
using test::Station;
using test::Testbed;

constexpr SimTime kSymbol{16};
SimTime sym(std::uint64_t n) { return kSymbol * n; }
SimTime ppdu(std::uint32_t psdu) { return sym((6 + psdu) * 2); }

std::uint64_t field(const TraceLine* l, std::string_view key) {
  return std::stoull(std::string(trace_field(l->details, key)));
}

std::vector<const TraceLine*> frames_from(const Testbed& tb, NodeId node, std::string_view purpose) {
  std::vector<const TraceLine*> out;
  for (const auto* l : tb.trace.select("FRAME_TX", node))
    if (trace_field(l->details, "purpose") == purpose) out.push_back(l);
  return out;
}

TEST(MacData, AcknowledgedTransferTiming) {
  Testbed tb;
  Station& coord = tb.coordinator(0, {0, 0});
  Station& dev = tb.device(1, {10, 0}, 0x0001);
  dev.mac.mcps_data_request(data_to(ShortAddress{0}, 10));
  tb.sched.run(SimTime::max());

  ASSERT_EQ(dev.user.data_confirms.size(), 1u);
  const auto& c = dev.user.data_confirms[0];
  EXPECT_EQ(c.value.status, Status::Success);
  // 9-byte MHR + 10-byte MSDU + FCS = 21-byte PSDU; 5-byte ack.
  EXPECT_EQ(c.time - c.value.timestamp, ppdu(21) + sym(12) + ppdu(5));
  ASSERT_EQ(coord.user.indications.size(), 1u);
  EXPECT_EQ(coord.user.indications[0].value.msdu, Bytes(10, 0xA5));
  EXPECT_EQ(dev.mac.counters().frames_sent, 1u);
}

TEST(MacData, AbsentReceiverGivesNoAckAfterFourTransmissions) {
  Testbed tb;
  Station& dev = tb.device(1, {0, 0}, 0x0001);
  dev.mac.mcps_data_request(data_to(ShortAddress{0x0077}, 10));
  tb.sched.run(SimTime::max());
  ASSERT_EQ(dev.user.data_confirms.size(), 1u);
  EXPECT_EQ(dev.user.data_confirms[0].value.status, Status::NoAck);
  EXPECT_EQ(frames_from(tb, 1, "data").size(), 4u);
  EXPECT_EQ(tb.count("TX_START", 1), 4u);
  EXPECT_EQ(dev.mac.counters().retries, 3u);
}

TEST(MacData, NoAckRequestedMeansSingleTransmission) {
  Testbed tb;
  Station& dev = tb.device(1, {0, 0}, 0x0001);
  dev.mac.mcps_data_request(data_to(ShortAddress{0x0077}, 10, false));
  tb.sched.run(SimTime::max());
  EXPECT_EQ(dev.user.data_confirms.at(0).value.status, Status::Success);
  EXPECT_EQ(tb.count("TX_START", 1), 1u);
}

TEST(MacData, RejectsBroadcastWithAckAndOversizeMsdu) {
  Testbed tb;
  Station& dev = tb.device(1, {0, 0}, 0x0001);
  dev.mac.mcps_data_request(data_to(ShortAddress::broadcast(), 10, true, 1));
  dev.mac.mcps_data_request(data_to(ShortAddress{0}, 200, true, 2));
  tb.sched.run(SimTime::max());
  ASSERT_EQ(dev.user.data_confirms.size(), 2u);
  EXPECT_EQ(dev.user.data_confirms[0].value.status, Status::InvalidParameter);
  EXPECT_EQ(dev.user.data_confirms[1].value.status, Status::FrameTooLong);
  EXPECT_EQ(tb.count("TX_START"), 0u);
}

TEST(MacData, SequenceNumbersIncrementPerFrame) {
  Testbed tb;
  tb.coordinator(0, {0, 0});
  Station& dev = tb.device(1, {10, 0}, 0x0001);
  const std::uint8_t dsn0 = dev.mac.pib().dsn;
  for (std::uint8_t h = 0; h < 10; ++h) dev.mac.mcps_data_request(data_to(ShortAddress{0}, 5, true, h));
  tb.sched.run(SimTime::max());
  const auto sent = frames_from(tb, 1, "data");
  ASSERT_EQ(sent.size(), 10u);
  for (std::size_t i = 0; i < sent.size(); ++i)
    EXPECT_EQ(field(sent[i], "seq"), static_cast<std::uint8_t>(dsn0 + i));
}

/// Sender next to a bare PHY that answers with hand-made acks.
struct AckBench {
  AckBench() : dev(tb.device(1, {0, 0}, 0x0001)), peer(2, tb.sched, tb.medium, &tb.trace, PhyConfig{}, {5, 0}) {
    peer.plme_set_trx_state_request(TrxRequest::TxOn);
    tb.sched.run(SimTime::max());
    tb.trace.set_listener([this](const TraceLine& l) {
      if (l.node == 1 && l.event == "TX_END" && !script.empty()) {
        const auto [offset, seq] = script.front();
        script.erase(script.begin());
        // Ack ends `offset` after the data frame ends.
        tb.sched.schedule_at(l.time + offset - ppdu(5), EventTag{2, Layer::Phy, "ack"},
                             [this, seq] { peer.pd_data_request(encode_frame(make_ack(seq, false))); });
      }
    });
  }
  Testbed tb;
  Station& dev;
  Phy peer;
  std::vector<std::pair<SimTime, std::uint8_t>> script;
};

TEST(MacAck, ArrivalOneSymbolBeforeWaitEndsSucceeds) {
  AckBench b;
  const std::uint8_t seq = b.dev.mac.pib().dsn;
  b.script = {{sym(54 - 1), seq}};
  b.dev.mac.mcps_data_request(data_to(ShortAddress{2}, 10));
  b.tb.sched.run(SimTime::max());
  EXPECT_EQ(b.dev.user.data_confirms.at(0).value.status, Status::Success);
  EXPECT_EQ(b.tb.count("TX_START", 1), 1u);
}

TEST(MacAck, ArrivalAfterWaitIsTooLate) {
  AckBench b;
  const std::uint8_t seq = b.dev.mac.pib().dsn;
  b.script = {{sym(54 + 1), seq}};
  b.dev.mac.mcps_data_request(data_to(ShortAddress{2}, 10));
  b.tb.sched.run(SimTime::max());
  EXPECT_EQ(b.tb.count("ACK_TIMEOUT", 1), 4u);
  EXPECT_EQ(b.dev.user.data_confirms.at(0).value.status, Status::NoAck);
}

TEST(MacAck, MismatchedSequenceIsIgnoredAndRetried) {
  AckBench b;
  const std::uint8_t seq = b.dev.mac.pib().dsn;
  b.script = {{sym(40), static_cast<std::uint8_t>(seq + 1)}, {sym(40), seq}};
  b.dev.mac.mcps_data_request(data_to(ShortAddress{2}, 10));
  b.tb.sched.run(SimTime::max());
  EXPECT_EQ(b.tb.count("ACK_IGNORED", 1), 1u);
  EXPECT_EQ(b.tb.count("TX_START", 1), 2u);
  EXPECT_EQ(b.dev.user.data_confirms.at(0).value.status, Status::Success);
}

TEST(MacIndirect, UnpolledEntryExpires) {
  Testbed tb;
  Station& coord = tb.coordinator(0, {0, 0});
  tb.sched.run(SimTime{1000});
  McpsDataRequest r = data_to(ShortAddress{5}, 8, true, 9);
  r.options.indirect = true;
  tb.sched.schedule_at(SimTime{1000}, EventTag{}, [&] { coord.mac.mcps_data_request(r); });
  tb.sched.run(SimTime::max());
  ASSERT_EQ(coord.user.data_confirms.size(), 1u);
  const auto& c = coord.user.data_confirms[0];
  EXPECT_EQ(c.value.status, Status::TransactionExpired);
  EXPECT_EQ(c.value.handle, 9);
  EXPECT_EQ(c.time - SimTime{1000}, sym(0x01F4ull * 960));
}

TEST(MacIndirect, QueueOverflow) {
  Testbed tb;
  Station& coord = tb.coordinator(0, {0, 0});
  for (std::uint8_t h = 0; h < 9; ++h) {
    McpsDataRequest r = data_to(ShortAddress{static_cast<std::uint16_t>(10 + h)}, 4, true, h);
    r.options.indirect = true;
    coord.mac.mcps_data_request(r);
  }
  tb.sched.run(SimTime{10});
  ASSERT_EQ(coord.user.data_confirms.size(), 1u);
  EXPECT_EQ(coord.user.data_confirms[0].value.status, Status::TransactionOverflow);
  EXPECT_EQ(coord.user.data_confirms[0].value.handle, 8);
}

TEST(MacIndirect, PollExtractsQueuedFrame) {
  Testbed tb;
  Station& coord = tb.coordinator(0, {0, 0});
  Station& dev = tb.device(1, {10, 0}, 0x0001, false);
  McpsDataRequest r = data_to(ShortAddress{1}, 12, true, 3);
  r.options.indirect = true;
  coord.mac.mcps_data_request(r);
  tb.sched.run(SimTime{5000});
  dev.mac.mlme_poll_request();
  tb.sched.run(SimTime::max());
  ASSERT_EQ(dev.user.indications.size(), 1u);
  EXPECT_EQ(dev.user.indications[0].value.msdu, Bytes(12, 0xA5));
  ASSERT_EQ(dev.user.polls.size(), 1u);
  EXPECT_EQ(dev.user.polls[0].value, Status::Success);
  EXPECT_EQ(coord.user.data_confirms.at(0).value.status, Status::Success);

  dev.mac.mlme_poll_request();
  tb.sched.run(SimTime::max());
  EXPECT_EQ(dev.user.polls.back().value, Status::NoData);
}

struct BeaconPan {
  explicit BeaconPan(std::uint8_t bo = 6, std::uint8_t so = 6) : coord(tb.coordinator(0, {0, 0}, bo, so)) {
    this->bo = bo;
    this->so = so;
  }
  Station& tracked_device(NodeId id, std::uint16_t addr, bool rx_on = true) {
    Station& d = tb.device(id, {static_cast<double>(5 * id), 0}, addr, rx_on);
    d.mac.pib().beacon_order = bo;
    d.mac.pib().superframe_order = so;
    d.mac.mlme_sync_request(true);
    return d;
  }
  SimTime bi() const { return sym(960ull << bo); }
  Testbed tb;
  Station& coord;
  std::uint8_t bo, so;
};

TEST(MacBeacon, IntervalIsExact) {
  BeaconPan p(6, 4);
  p.tb.sched.run(SimTime{983'040ull * 6});
  const auto beacons = p.tb.trace.select("BEACON_TX", 0);
  ASSERT_GE(beacons.size(), 5u);
  for (std::size_t i = 1; i < beacons.size(); ++i) EXPECT_EQ(beacons[i]->time - beacons[i - 1]->time, SimTime{983'040});
  EXPECT_EQ(p.coord.user.start.at(0).value, Status::Success);
}

TEST(MacBeacon, NonBeaconPanSendsNone) {
  Testbed tb;
  tb.coordinator(0, {0, 0});
  tb.sched.run(SimTime::from_ms(5000));
  EXPECT_EQ(tb.count("BEACON_TX"), 0u);
  EXPECT_EQ(tb.count("TX_START"), 0u);
}

TEST(MacBeacon, StartParameterChecks) {
  Testbed tb;
  Station& c = tb.add(0, {0, 0});
  c.mac.mlme_start_request(MlmeStartRequest{kPan, 11, 6, 6, true, false});
  c.mac.pib().short_address = ShortAddress{0};
  c.mac.mlme_start_request(MlmeStartRequest{kPan, 11, 6, 7, true, false});
  tb.sched.run(SimTime{10});
  ASSERT_EQ(c.user.start.size(), 2u);
  EXPECT_EQ(c.user.start[0].value, Status::NoShortAddress);
  EXPECT_EQ(c.user.start[1].value, Status::InvalidParameter);
  EXPECT_EQ(tb.count("BEACON_TX"), 0u);
}

TEST(MacBeacon, DeviceTracksAndLosesSyncAfterFourMisses) {
  BeaconPan p;
  Station& dev = p.tracked_device(1, 0x0001);
  p.tb.sched.run(SimTime{0} + p.bi() * 3 + SimTime{1000});
  EXPECT_TRUE(dev.mac.tracking());
  const auto received = p.tb.trace.select("BEACON_RX", 1);
  ASSERT_GE(received.size(), 3u);
  const SimTime last_beacon = p.tb.trace.select("BEACON_TX", 0).back()->time;

  p.coord.mac.mlme_reset(true);
  p.tb.sched.run(SimTime::max());
  ASSERT_EQ(dev.user.sync_loss.size(), 1u);
  EXPECT_EQ(dev.user.sync_loss[0].value, Status::BeaconLoss);
  const auto misses = p.tb.trace.select("BEACON_MISS", 1);
  ASSERT_EQ(misses.size(), 4u);
  for (std::size_t k = 0; k < misses.size(); ++k) {
    const SimTime expected = last_beacon + p.bi() * (k + 1);
    EXPECT_GT(misses[k]->time, expected);
    EXPECT_LT(misses[k]->time, expected + p.bi());
  }
  EXPECT_GE(dev.user.sync_loss[0].time, last_beacon + p.bi() * 4);
  EXPECT_LT(dev.user.sync_loss[0].time, last_beacon + p.bi() * 5);
  EXPECT_FALSE(dev.mac.tracking());
}

TEST(MacBeacon, PendingAddressTriggersExtraction) {
  BeaconPan p;
  Station& dev = p.tracked_device(1, 0x0001, false);
  p.tb.sched.run(p.bi() * 3);
  EXPECT_TRUE(frames_from(p.tb, 1, "data_req").empty());
  EXPECT_EQ(p.tb.count("PENDING_HIT", 1), 0u);

  McpsDataRequest r = data_to(ShortAddress{1}, 16, true, 4);
  r.options.indirect = true;
  p.tb.sched.schedule_at(p.tb.sched.now() + SimTime{1}, EventTag{}, [&] { p.coord.mac.mcps_data_request(r); });
  p.tb.sched.run(p.tb.sched.now() + p.bi() * 2);
  EXPECT_EQ(p.tb.count("PENDING_HIT", 1), 1u);
  const auto requests = frames_from(p.tb, 1, "data_req");
  ASSERT_EQ(requests.size(), 1u);
  // Sent inside the CAP of the superframe whose beacon announced the entry.
  const SimTime beacon = p.tb.trace.select("PENDING_HIT", 1)[0]->time;
  const SimTime tx = SimTime{field(requests[0], "tx_start")};
  EXPECT_LT(tx, beacon + sym(960ull << p.so));
  ASSERT_EQ(dev.user.indications.size(), 1u);
  EXPECT_EQ(dev.user.indications[0].value.msdu, Bytes(16, 0xA5));
  EXPECT_EQ(p.coord.user.data_confirms.at(0).value.status, Status::Success);
}

TEST(MacBeacon, PersistenceCountsBeaconIntervals) {
  BeaconPan p;
  p.coord.mac.pib().transaction_persistence_time = 3;
  p.tb.sched.run(SimTime{5000});
  McpsDataRequest r = data_to(ShortAddress{9}, 4, true, 1);
  r.options.indirect = true;
  p.tb.sched.schedule_at(SimTime{5000}, EventTag{}, [&] { p.coord.mac.mcps_data_request(r); });
  p.tb.sched.run(SimTime{5000} + p.bi() * 4);
  ASSERT_EQ(p.coord.user.data_confirms.size(), 1u);
  EXPECT_EQ(p.coord.user.data_confirms[0].value.status, Status::TransactionExpired);
  EXPECT_EQ(p.coord.user.data_confirms[0].time, SimTime{5000} + p.bi() * 3);
}

TEST(MacScan, EdDwellAndBusyChannel) {
  Testbed tb;
  Station& s = tb.add(1, {0, 0});
  Jammer jam(9, tb.sched, tb.medium, tb.trace, {5, 0}, 13);
  jam.start();
  s.mac.mlme_scan_request(MlmeScanRequest{ScanType::Ed, (1u << 11) | (1u << 12) | (1u << 13) | (1u << 14), 5});
  tb.sched.run(SimTime::from_ms(3000));
  jam.stop();

  ASSERT_EQ(s.user.scans.size(), 1u);
  const auto& c = s.user.scans[0].value;
  EXPECT_EQ(c.status, Status::Success);
  ASSERT_EQ(c.energy.size(), 4u);
  for (const auto& [ch, level] : c.energy)
    if (ch != 13) {
      EXPECT_GT(c.energy[2].second, level);
    }
  EXPECT_EQ(c.energy[2].first, 13);

  std::vector<SimTime> begins, ends;
  for (const auto* l : tb.trace.select("SCAN_CHANNEL", 1))
    (trace_field(l->details, "phase") == "begin" ? begins : ends).push_back(l->time);
  ASSERT_EQ(begins.size(), 4u);
  ASSERT_EQ(ends.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(ends[i] - begins[i], sym(960 * 33));
  EXPECT_EQ(scan_dwell_symbols(5), 31'680u);
}

TEST(MacScan, PassiveScanFindsOneDescriptor) {
  BeaconPan p(6, 6);
  Station& s = p.tb.add(1, {10, 0});
  p.tb.sched.run(SimTime{20'000});
  s.mac.mlme_scan_request(MlmeScanRequest{ScanType::Passive, (1u << 11) | (1u << 12), 6});
  p.tb.sched.run(SimTime::from_ms(5000));
  ASSERT_EQ(s.user.scans.size(), 1u);
  const auto& c = s.user.scans[0].value;
  ASSERT_EQ(c.pan_descriptors.size(), 1u);
  EXPECT_EQ(c.pan_descriptors[0].coord_pan_id, kPan);
  EXPECT_EQ(c.pan_descriptors[0].logical_channel, 11);
  EXPECT_EQ(c.pan_descriptors[0].superframe.beacon_order, 6);
  EXPECT_EQ(p.tb.count("TX_START", 1), 0u);
}

TEST(MacScan, ActiveScanInBeaconlessPan) {
  Testbed tb;
  tb.coordinator(0, {0, 0});
  Station& s = tb.add(1, {10, 0});
  s.mac.mlme_scan_request(MlmeScanRequest{ScanType::Active, 1u << 11, 3});
  tb.sched.run(SimTime::from_ms(1000));
  ASSERT_EQ(s.user.scans.size(), 1u);
  ASSERT_EQ(s.user.scans[0].value.pan_descriptors.size(), 1u);
  EXPECT_EQ(s.user.scans[0].value.pan_descriptors[0].coord_address, MacAddress{ShortAddress{0}});
  EXPECT_EQ(s.mac.pib().pan_id, 0xFFFF);
}

MlmeAssociateRequest associate_to_coordinator() {
  MlmeAssociateRequest r;
  r.channel = 11;
  r.coord_pan = kPan;
  r.coord_address = ShortAddress{0};
  r.capability.allocate_address = true;
  return r;
}

TEST(MacAssociation, PermitGrantsDistinctAddresses) {
  Testbed tb;
  tb.coordinator(0, {0, 0});
  Station& a = tb.add(1, {10, 0});
  Station& b = tb.add(2, {0, 10});
  EXPECT_EQ(a.mac.pib().short_address, ShortAddress{0xFFFF});
  a.mac.mlme_associate_request(associate_to_coordinator());
  b.mac.mlme_associate_request(associate_to_coordinator());
  tb.sched.run(SimTime::from_ms(2000));
  ASSERT_EQ(a.user.associate.size(), 1u);
  ASSERT_EQ(b.user.associate.size(), 1u);
  EXPECT_EQ(a.user.associate[0].value.status, Status::Success);
  EXPECT_EQ(b.user.associate[0].value.status, Status::Success);
  EXPECT_EQ(a.mac.pib().short_address, a.user.associate[0].value.short_address);
  EXPECT_LT(a.mac.pib().short_address.value, 0xFFFE);
  EXPECT_LT(b.mac.pib().short_address.value, 0xFFFE);
  EXPECT_NE(a.mac.pib().short_address, b.mac.pib().short_address);
  EXPECT_EQ(a.mac.pib().pan_id, kPan);
}

TEST(MacAssociation, NoPermitIsDenied) {
  Testbed tb;
  Station& c = tb.coordinator(0, {0, 0});
  c.mac.pib().association_permit = false;
  Station& a = tb.add(1, {10, 0});
  a.mac.mlme_associate_request(associate_to_coordinator());
  tb.sched.run(SimTime::from_ms(2000));
  ASSERT_EQ(a.user.associate.size(), 1u);
  EXPECT_EQ(a.user.associate[0].value.status, Status::PanAccessDenied);
  EXPECT_EQ(a.mac.pib().short_address, ShortAddress{0xFFFF});
}

TEST(GtsTable, EighthDescriptorDenied) {
  GtsTable t(4);
  for (std::uint16_t d = 1; d <= 7; ++d) ASSERT_TRUE(t.allocate(ShortAddress{d}, 1, GtsDirection::Transmit));
  EXPECT_FALSE(t.allocate(ShortAddress{8}, 1, GtsDirection::Transmit));
  EXPECT_EQ(t.descriptors().size(), 7u);
  EXPECT_EQ(t.final_cap_slot(), 8);
}

TEST(GtsTable, CapFloor) {
  // SO = 1: 120-symbol slots. Four CAP slots (480) meet the floor; three (360) do not.
  GtsTable t(1);
  EXPECT_FALSE(t.allocate(ShortAddress{1}, 13, GtsDirection::Transmit));
  const auto g = t.allocate(ShortAddress{1}, 12, GtsDirection::Transmit);
  ASSERT_TRUE(g);
  EXPECT_EQ(g->starting_slot, 4);
  EXPECT_EQ(t.cap_symbols(), 480u);
  EXPECT_FALSE(t.allocate(ShortAddress{2}, 1, GtsDirection::Transmit));
}

TEST(GtsTable, FirstFitFromEndAndRepack) {
  GtsTable t(6);
  const auto a = t.allocate(ShortAddress{1}, 2, GtsDirection::Transmit);
  const auto b = t.allocate(ShortAddress{2}, 3, GtsDirection::Receive);
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->starting_slot, 14);
  EXPECT_EQ(b->starting_slot, 11);
  EXPECT_FALSE(t.allocate(ShortAddress{1}, 1, GtsDirection::Transmit));
  EXPECT_TRUE(t.deallocate(ShortAddress{1}, GtsDirection::Transmit));
  EXPECT_EQ(t.find(ShortAddress{2}, GtsDirection::Receive)->starting_slot, 13);
}

TEST(GtsTable, SafetyUnderRandomRequests) {
  RngStream rng(23);
  for (int round = 0; round < 200; ++round) {
    GtsTable t(static_cast<std::uint8_t>(rng.below(9)));
    for (int i = 0; i < 40; ++i) {
      const ShortAddress dev{static_cast<std::uint16_t>(1 + rng.below(12))};
      const auto dir = rng.below(2) ? GtsDirection::Receive : GtsDirection::Transmit;
      if (rng.below(4) == 0)
        t.deallocate(dev, dir);
      else
        t.allocate(dev, static_cast<std::uint8_t>(1 + rng.below(6)), dir);
      ASSERT_LE(t.descriptors().size(), 7u);
      ASSERT_GE(t.cap_symbols(), 440u);
      std::uint32_t used = 0;
      for (const auto& d : t.descriptors()) {
        ASSERT_GE(d.starting_slot, t.first_cfp_slot());
        ASSERT_LE(d.end_slot(), 16);
        used += d.length;
      }
      ASSERT_EQ(used, t.cfp_slots());
    }
  }
}

TEST(MacGts, RequestThroughBeaconPan) {
  BeaconPan p(6, 6);
  Station& dev = p.tracked_device(1, 0x0001);
  p.tb.sched.run(p.bi() * 2);
  dev.mac.mlme_gts_request(GtsCharacteristics{2, GtsDirection::Transmit, true});
  p.tb.sched.run(p.bi() * 5);
  ASSERT_EQ(dev.user.gts.size(), 1u);
  EXPECT_EQ(dev.user.gts[0].value.status, Status::Success);
  ASSERT_EQ(dev.mac.own_gts().size(), 1u);
  const GtsDescriptor g = dev.mac.own_gts()[0];
  EXPECT_EQ(g.starting_slot, 14);

  McpsDataRequest r = data_to(ShortAddress{0}, 20, true, 5);
  r.options.gts = true;
  dev.mac.mcps_data_request(r);
  p.tb.sched.run(p.tb.sched.now() + p.bi() * 2);
  ASSERT_EQ(dev.user.data_confirms.size(), 1u);
  EXPECT_EQ(dev.user.data_confirms[0].value.status, Status::Success);
  const auto gts_frames = p.tb.trace.select("FRAME_TX", 1);
  ASSERT_FALSE(gts_frames.empty());
  const auto* tx = gts_frames.back();
  ASSERT_EQ(trace_field(tx->details, "gts"), "1");
  const SimTime start{field(tx, "tx_start")};
  const auto beacons = p.tb.trace.select("BEACON_TX", 0);
  SimTime sf;
  for (const auto* b : beacons)
    if (b->time <= start) sf = b->time;
  const SimTime slot = sym(60ull << p.so);
  EXPECT_GE(start, sf + slot * g.starting_slot);
  EXPECT_LE(start + ppdu(static_cast<std::uint32_t>(field(tx, "len"))), sf + slot * g.end_slot());
}

TEST(MacGts, RequestWithoutBeaconTracking) {
  Testbed tb;
  tb.coordinator(0, {0, 0});
  Station& dev = tb.device(1, {10, 0}, 0x0001);
  dev.mac.mlme_gts_request(GtsCharacteristics{1, GtsDirection::Transmit, true});
  Station& anon = tb.add(2, {0, 10});
  anon.mac.mlme_gts_request(GtsCharacteristics{1, GtsDirection::Transmit, true});
  tb.sched.run(SimTime{10});
  EXPECT_EQ(dev.user.gts.at(0).value.status, Status::NoBeacon);
  EXPECT_EQ(anon.user.gts.at(0).value.status, Status::NoShortAddress);
}

TEST(IndirectQueue, CapacityAndDestinations) {
  IndirectQueue q;
  for (std::uint16_t i = 0; i < 8; ++i) {
    IndirectEntry e;
    e.destination = ShortAddress{static_cast<std::uint16_t>(i % 3)};
    ASSERT_TRUE(q.push(e));
  }
  IndirectEntry extra;
  EXPECT_FALSE(q.push(extra));
  EXPECT_EQ(q.destinations().size(), 3u);
  EXPECT_EQ(q.count_for(ShortAddress{0}), 3u);
  const auto first = q.next_for(ShortAddress{1});
  ASSERT_NE(first, nullptr);
  EXPECT_EQ(first->id, 2u);
}

}  // namespace
}  // namespace lrwpan
