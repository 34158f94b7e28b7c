#include <gtest/gtest.h>

#include "lrwpan/pib.hpp"

namespace lrwpan {
namespace {

std::int64_t int_of(const PibResult& r) { return std::get<std::int64_t>(r.value); }

TEST(MacPib, DefaultsFromAttributeTable) {
  MacPib pib;
  struct Row {
    PibAttribute id;
    std::int64_t value;
  };
  const Row rows[] = {
      {PibAttribute::macMinBE, 3},
      {PibAttribute::macMaxBE, 5},
      {PibAttribute::macMaxCSMABackoffs, 4},
      {PibAttribute::macMaxFrameRetries, 3},
      {PibAttribute::macBeaconOrder, 15},
      {PibAttribute::macSuperframeOrder, 15},
      {PibAttribute::macShortAddress, 0xFFFF},
      {PibAttribute::macPANId, 0xFFFF},
      {PibAttribute::macTransactionPersistenceTime, 0x01F4},
      {PibAttribute::macBattLifeExtPeriods, 6},
      {PibAttribute::macResponseWaitTime, 32},
  };
  for (const auto& row : rows) {
    const auto r = pib.get(row.id);
    ASSERT_TRUE(r.ok()) << to_string(row.id);
    EXPECT_EQ(int_of(r), row.value) << to_string(row.id);
  }
  EXPECT_FALSE(std::get<bool>(pib.get(PibAttribute::macAssociationPermit).value));
  EXPECT_TRUE(std::get<bool>(pib.get(PibAttribute::macAutoRequest).value));
  EXPECT_FALSE(std::get<bool>(pib.get(PibAttribute::macRxOnWhenIdle).value));
  EXPECT_TRUE(std::get<bool>(pib.get(PibAttribute::macGTSPermit).value));
}

TEST(MacPib, DerivedWaitDurations) {
  MacPib pib;
  // 20 backoff + 12 turnaround + 10 SHR + 6 octets * 2 symbols.
  EXPECT_EQ(int_of(pib.get(PibAttribute::macAckWaitDuration)), 54);
  EXPECT_EQ(pib.set(PibAttribute::macAckWaitDuration, std::int64_t{60}), Status::ReadOnly);
  // m = min(maxBE - minBE, maxCSMABackoffs) = 2:
  // (2^3 + 2^4 + (2^5 - 1) * (4 - 2)) * 20 + phyMaxFrameDuration (10 + 128 * 2).
  const std::int64_t backoffs = (8 + 16 + 31 * 2) * 20;
  EXPECT_EQ(int_of(pib.get(PibAttribute::macMaxFrameTotalWaitTime)), backoffs + 266);
  EXPECT_EQ(backoffs + 266, 1986);
}

TEST(MacPib, UnknownAttribute) {
  MacPib pib;
  EXPECT_EQ(pib.get(static_cast<PibAttribute>(0x30)).status, Status::UnsupportedAttribute);
  EXPECT_EQ(pib.set(static_cast<PibAttribute>(0x30), std::int64_t{1}), Status::UnsupportedAttribute);
  EXPECT_EQ(pib.get(PibAttribute::phyCCAMode).status, Status::UnsupportedAttribute);
}

TEST(MacPib, StoreLoad) {
  MacPib pib;
  EXPECT_EQ(pib.set(PibAttribute::macMinBE, std::int64_t{2}), Status::Success);
  EXPECT_EQ(int_of(pib.get(PibAttribute::macMinBE)), 2);
}

TEST(MacPib, RangeChecks) {
  MacPib pib;
  EXPECT_EQ(pib.set(PibAttribute::macMinBE, std::int64_t{9}), Status::InvalidParameter);
  EXPECT_EQ(pib.set(PibAttribute::macMinBE, std::int64_t{6}), Status::InvalidParameter);
  EXPECT_EQ(pib.min_be, 3);
  EXPECT_EQ(pib.set(PibAttribute::macMaxBE, std::int64_t{8}), Status::Success);
  EXPECT_EQ(pib.set(PibAttribute::macMinBE, std::int64_t{6}), Status::Success);
  EXPECT_EQ(pib.set(PibAttribute::macMaxBE, std::int64_t{5}), Status::InvalidParameter);
  EXPECT_EQ(pib.set(PibAttribute::macMaxBE, std::int64_t{9}), Status::InvalidParameter);
  EXPECT_EQ(pib.set(PibAttribute::macMinBE, true), Status::InvalidParameter);
}

TEST(MacPib, FuzzedValuesOutsideRangeAreNeverStored) {
  RngStream rng(17);
  const PibAttribute ranged[] = {PibAttribute::macMinBE, PibAttribute::macMaxBE, PibAttribute::macMaxCSMABackoffs,
                                 PibAttribute::macMaxFrameRetries, PibAttribute::macBeaconOrder,
                                 PibAttribute::macSuperframeOrder, PibAttribute::macShortAddress,
                                 PibAttribute::macTransactionPersistenceTime};
  for (int i = 0; i < 20000; ++i) {
    MacPib pib;
    const PibAttribute id = ranged[rng.below(std::size(ranged))];
    const std::int64_t v = static_cast<std::int64_t>(rng.below(200000)) - 100000;
    const auto before = pib.get(id);
    const Status s = pib.set(id, v);
    const auto after = pib.get(id);
    if (s == Status::Success) {
      ASSERT_EQ(int_of(after), v);
    } else {
      ASSERT_EQ(after.value, before.value);
    }
    ASSERT_LE(pib.min_be, pib.max_be);
    ASSERT_LE(pib.max_be, 8);
    ASSERT_LE(pib.max_csma_backoffs, 5);
    ASSERT_LE(pib.max_frame_retries, 7);
    ASSERT_LE(pib.beacon_order, 15);
    ASSERT_LE(pib.superframe_order, 15);
  }
}

TEST(MacPib, ResetRestoresDefaults) {
  MacPib pib;
  RngStream rng(1);
  pib.max_csma_backoffs = 1;
  pib.pan_id = 0x4242;
  pib.extended_address = ExtAddress{77};
  pib.reset(false, rng);
  EXPECT_EQ(pib.pan_id, 0x4242);
  EXPECT_EQ(pib.max_csma_backoffs, 1);
  pib.reset(true, rng);
  EXPECT_EQ(int_of(pib.get(PibAttribute::macMaxCSMABackoffs)), 4);
  EXPECT_EQ(pib.pan_id, 0xFFFF);
  EXPECT_EQ(pib.extended_address, ExtAddress{77});
}

TEST(MacPib, ResetIsDeterministicPerSeed) {
  MacPib a, b;
  RngStream ra(5, 1, RngPurpose::Sequence), rb(5, 1, RngPurpose::Sequence);
  a.reset(true, ra);
  b.reset(true, rb);
  EXPECT_EQ(a.dsn, b.dsn);
  EXPECT_EQ(a.bsn, b.bsn);
}

TEST(PhyPib, SetAndRanges) {
  PhyPib pib;
  EXPECT_EQ(pib.set(PibAttribute::phyCCAMode, std::int64_t{2}), Status::Success);
  EXPECT_EQ(pib.cca_mode, 2);
  EXPECT_EQ(pib.set(PibAttribute::phyCCAMode, std::int64_t{4}), Status::InvalidParameter);
  EXPECT_EQ(pib.set(PibAttribute::phyCurrentChannel, std::int64_t{27}), Status::InvalidParameter);
  EXPECT_EQ(pib.set(PibAttribute::phyCurrentChannel, std::int64_t{26}), Status::Success);
  EXPECT_EQ(pib.timing().symbol, SimTime{16});
  EXPECT_EQ(pib.set(PibAttribute::phySHRDuration, std::int64_t{5}), Status::ReadOnly);
  EXPECT_EQ(pib.get(PibAttribute::macMinBE).status, Status::UnsupportedAttribute);
}

TEST(PhyTiming, TwoPointFourGigahertz) {
  const auto t = PhyTiming::for_channel(11);
  EXPECT_EQ(t.symbol, SimTime{16});
  EXPECT_EQ(t.bits_per_symbol, 4u);
  EXPECT_EQ(t.shr_symbols, 10u);
  EXPECT_EQ(t.turnaround(), SimTime{192});
  EXPECT_EQ(t.cca_window(), SimTime{128});
  EXPECT_EQ(t.backoff_period(), SimTime{320});
}

TEST(SuperframeArithmetic, ExactInTicks) {
  const auto t = PhyTiming::for_channel(11);
  for (std::uint8_t bo = 0; bo <= 14; ++bo) {
    EXPECT_EQ(t.symbols(beacon_interval_symbols(bo)).us(), 960ull * (1ull << bo) * 16);
    for (std::uint8_t so = 0; so <= bo; ++so)
      EXPECT_EQ(t.symbols(superframe_duration_symbols(so)).us(), 960ull * (1ull << so) * 16);
  }
}

}  // namespace
}  // namespace lrwpan
