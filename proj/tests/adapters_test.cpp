#include <gtest/gtest.h>

#include "lrwpan/adapters.hpp"
#include "lrwpan/mac.hpp"
#include "support.hpp"

namespace lrwpan {
namespace {

using test::kPan;
using test::Station;
using test::Testbed;

TEST(Sscs, MapsFieldsOneToOne) {
  AppPayload p{kPan, ShortAddress{0}, Bytes(10, 0x11), TxOptions{true, false, false}};
  const Adapted a = sscs_map(p, AddrMode::Short, kPan, 7);
  ASSERT_EQ(a.status, Status::Success);
  ASSERT_TRUE(a.request);
  EXPECT_TRUE(a.request->options.ack);
  EXPECT_EQ(a.request->msdu, p.bytes);
  EXPECT_EQ(a.request->dst, p.dst);
  EXPECT_EQ(a.request->dst_pan, kPan);
  EXPECT_EQ(a.request->handle, 7);
}

TEST(Sscs, BudgetFollowsAddressing) {
  // Short/short, same PAN: 9-byte MHR + FCS.
  EXPECT_EQ(msdu_budget(kPan, ShortAddress{0}, AddrMode::Short, kPan), 127u - 11u);
  // Extended/extended, different PANs: 2 + 1 + 2 + 8 + 2 + 8 + FCS.
  EXPECT_EQ(msdu_budget(0x0001, ExtAddress{1}, AddrMode::Extended, 0x0002), 127u - 25u);
  AppPayload p{kPan, ShortAddress{0}, Bytes(117, 0), {}};
  EXPECT_EQ(sscs_map(p, AddrMode::Short, kPan, 0).status, Status::FrameTooLong);
  EXPECT_FALSE(sscs_map(p, AddrMode::Short, kPan, 0).request);
  p.bytes.resize(116);
  EXPECT_EQ(sscs_map(p, AddrMode::Short, kPan, 0).status, Status::Success);
}

TEST(Sscs, OversizeNeverReachesMac) {
  Testbed tb;
  Station& dev = tb.device(1, {0, 0}, 0x0001);
  Sscs sscs(dev.mac);
  EXPECT_EQ(sscs.data_request(AppPayload{kPan, ShortAddress{0}, Bytes(200, 0), {}}, 1), Status::FrameTooLong);
  tb.sched.run(SimTime::max());
  EXPECT_EQ(dev.mac.counters().data_requests, 0u);
  EXPECT_EQ(tb.count("MCPS-DATA.request"), 0u);
}

TEST(Sscs, ConfirmStatusPassesThrough) {
  Testbed tb;
  Station& dev = tb.device(1, {0, 0}, 0x0001);
  Sscs sscs(dev.mac);
  std::vector<McpsDataConfirm> seen;
  sscs.set_confirm_handler([&](const McpsDataConfirm& c) { seen.push_back(c); });
  ASSERT_EQ(sscs.data_request(AppPayload{kPan, ShortAddress{0x0099}, Bytes(10, 0), {}}, 3), Status::Success);
  tb.sched.run(SimTime::max());
  ASSERT_EQ(dev.user.data_confirms.size(), 1u);
  sscs.relay_confirm(dev.user.data_confirms[0].value);
  ASSERT_EQ(seen.size(), 1u);
  EXPECT_EQ(seen[0].status, dev.user.data_confirms[0].value.status);
  EXPECT_EQ(seen[0].status, Status::NoAck);
  EXPECT_EQ(seen[0].handle, 3);
}

TEST(Llc, WrapsRawBytes) {
  Bytes raw(20);
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<std::uint8_t>(i);
  const TxOptions defaults{false, false, false};
  const Adapted a = llc_convert(raw, kPan, ShortAddress{0}, defaults, AddrMode::Short, kPan, 1);
  ASSERT_TRUE(a.request);
  EXPECT_EQ(a.request->msdu, raw);
  EXPECT_EQ(a.request->options, defaults);

  const Adapted empty = llc_convert({}, kPan, ShortAddress{0}, TxOptions{}, AddrMode::Short, kPan, 2);
  ASSERT_TRUE(empty.request);
  EXPECT_TRUE(empty.request->msdu.empty());
  EXPECT_TRUE(empty.request->options.ack);

  EXPECT_EQ(llc_convert(Bytes(117), kPan, ShortAddress{0}, {}, AddrMode::Short, kPan, 3).status, Status::FrameTooLong);
}

TEST(Llc, EndToEndBytesAreIdentical) {
  Testbed tb;
  Station& coord = tb.coordinator(0, {0, 0});
  Station& dev = tb.device(1, {10, 0}, 0x0001);
  Sscs sscs(dev.mac);
  Bytes raw{0xde, 0xad, 0xbe, 0xef, 0x00, 0x01};
  ASSERT_EQ(sscs.llc_request(raw, kPan, ShortAddress{0}, TxOptions{}, 1), Status::Success);
  ASSERT_EQ(sscs.llc_request({}, kPan, ShortAddress{0}, TxOptions{}, 2), Status::Success);
  tb.sched.run(SimTime::max());
  ASSERT_EQ(coord.user.indications.size(), 2u);
  EXPECT_EQ(coord.user.indications[0].value.msdu, raw);
  EXPECT_TRUE(coord.user.indications[1].value.msdu.empty());
}

TEST(Traffic, PeriodicIsExact) {
  TrafficConfig cfg;
  cfg.interval = SimTime::from_ms(100);
  RngStream rng(1);
  std::vector<std::uint64_t> times;
  auto t = traffic_first(cfg);
  while (t && times.size() < 3) {
    times.push_back(t->us());
    t = traffic_next(cfg, *t, rng);
  }
  EXPECT_EQ(times, (std::vector<std::uint64_t>{0, 100'000, 200'000}));
}

TEST(Traffic, PoissonMean) {
  TrafficConfig cfg;
  cfg.pattern = TrafficPattern::Poisson;
  cfg.interval = SimTime::from_ms(50);
  RngStream rng(2024, 1, RngPurpose::Traffic);
  SimTime now;
  const int n = 10'000;
  for (int i = 0; i < n; ++i) now = *traffic_next(cfg, now, rng);
  const double mean = static_cast<double>(now.us()) / n;
  EXPECT_NEAR(mean, 50'000.0, 0.05 * 50'000.0);
}

TEST(Traffic, StopsAtWindowEnd) {
  TrafficConfig cfg;
  cfg.interval = SimTime::from_ms(100);
  cfg.start = SimTime::from_ms(50);
  cfg.stop = SimTime::from_ms(350);
  RngStream rng(1);
  std::vector<std::uint64_t> times;
  for (auto t = traffic_first(cfg); t; t = traffic_next(cfg, *t, rng)) times.push_back(t->us());
  EXPECT_EQ(times, (std::vector<std::uint64_t>{50'000, 150'000, 250'000}));

  cfg.stop = cfg.start;
  EXPECT_FALSE(traffic_first(cfg));
}

TEST(Traffic, PoissonNeverLeavesWindow) {
  TrafficConfig cfg;
  cfg.pattern = TrafficPattern::Poisson;
  cfg.interval = SimTime::from_ms(5);
  cfg.start = SimTime::from_ms(10);
  cfg.stop = SimTime::from_ms(1000);
  RngStream rng(8);
  std::size_t n = 0;
  for (auto t = traffic_first(cfg); t; t = traffic_next(cfg, *t, rng), ++n) {
    ASSERT_GE(*t, cfg.start);
    ASSERT_LT(*t, cfg.stop);
  }
  EXPECT_GT(n, 100u);
}

}  // namespace
}  // namespace lrwpan
