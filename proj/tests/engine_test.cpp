#include <gtest/gtest.h>

#include <vector>

#include "lrwpan/engine.hpp"
#include "lrwpan/harness.hpp"
#include "lrwpan/rng.hpp"

namespace lrwpan {
namespace {

EventTag tag(std::string_view kind = "test") { return EventTag{0, Layer::Engine, kind}; }

TEST(Scheduler, EventAtNowFiresBeforeLaterEvents) {
  Scheduler s;
  std::vector<int> order;
  s.schedule_at(SimTime{10}, tag(), [&] { order.push_back(2); });
  s.schedule_at(SimTime{0}, tag(), [&] { order.push_back(1); });
  s.run(SimTime{100});
  EXPECT_EQ(order, (std::vector<int>{1, 2}));
}

TEST(Scheduler, PastScheduleIsClockViolation) {
  Scheduler s;
  s.schedule_at(SimTime{5}, tag(), [] {});
  s.run(SimTime{5});
  EXPECT_THROW(s.schedule_at(SimTime{4}, tag(), [] {}), ClockViolation);
}

TEST(Scheduler, CancelPendingSuppressesDelivery) {
  Scheduler s;
  bool fired = false;
  const auto h = s.schedule_at(SimTime{5}, tag(), [&] { fired = true; });
  EXPECT_TRUE(s.cancel(h));
  EXPECT_FALSE(s.cancel(h));
  s.run(SimTime{10});
  EXPECT_FALSE(fired);
}

TEST(Scheduler, CancelAfterFireReturnsFalse) {
  Scheduler s;
  const auto h = s.schedule_at(SimTime{1}, tag(), [] {});
  s.run(SimTime{1});
  EXPECT_FALSE(s.cancel(h));
}

TEST(Scheduler, EmptyRunDeliversNothingAndKeepsClock) {
  Scheduler s;
  EXPECT_EQ(s.run(SimTime{1000}), 0u);
  EXPECT_EQ(s.now(), SimTime{0});
}

TEST(Scheduler, SameTickEventsFireInInsertionOrder) {
  Scheduler s;
  std::vector<char> order;
  s.schedule_at(SimTime{5}, tag(), [&] { order.push_back('a'); });
  s.schedule_at(SimTime{9}, tag(), [&] { order.push_back('c'); });
  s.schedule_at(SimTime{5}, tag(), [&] { order.push_back('b'); });
  EXPECT_EQ(s.run(SimTime{9}), 3u);
  EXPECT_EQ(order, (std::vector<char>{'a', 'b', 'c'}));
  EXPECT_EQ(s.now(), SimTime{9});
}

TEST(Scheduler, RunStopsAtBoundaryInclusive) {
  Scheduler s;
  int fired = 0;
  s.schedule_at(SimTime{10}, tag(), [&] { ++fired; });
  s.schedule_at(SimTime{11}, tag(), [&] { ++fired; });
  EXPECT_EQ(s.run(SimTime{10}), 1u);
  EXPECT_EQ(fired, 1);
  EXPECT_EQ(s.queued(), 1u);
}

TEST(Scheduler, ClockIsMonotoneUnderRandomLoad) {
  Scheduler s;
  RngStream rng(7);
  SimTime last;
  bool monotone = true;
  std::function<void()> spawn = [&] {
    if (s.now() < last) monotone = false;
    last = s.now();
    if (s.delivered() < 5000) {
      s.schedule_in(SimTime{rng.below(50)}, tag(), spawn);
      if (rng.below(3) == 0) s.cancel(s.schedule_in(SimTime{rng.below(50)}, tag(), spawn));
    }
  };
  s.schedule_at(SimTime{0}, tag(), spawn);
  s.run(SimTime::max());
  EXPECT_TRUE(monotone);
  EXPECT_GE(s.delivered(), 5000u);
}

TEST(Rng, StreamsAreReproducibleAndIndependent) {
  RngStream a(42, 1, RngPurpose::Backoff), b(42, 1, RngPurpose::Backoff);
  RngStream c(42, 1, RngPurpose::Traffic), d(42, 2, RngPurpose::Backoff);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(RngStream(42, 1, RngPurpose::Backoff).next_u64(), c.next_u64());
  EXPECT_NE(RngStream(42, 1, RngPurpose::Backoff).next_u64(), d.next_u64());
}

TEST(Rng, SplitMixKnownValue) {
  // First output of the reference SplitMix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Rng, BelowStaysInRange) {
  RngStream r(3);
  for (int i = 0; i < 10000; ++i) EXPECT_LT(r.below(7), 7u);
}

TEST(Rng, ExponentialMean) {
  RngStream r(11);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += r.exponential(2.0);
  EXPECT_NEAR(sum / n, 2.0, 0.05);
}

TEST(Replay, SameScenarioAndSeedGiveIdenticalTraces) {
  const char* text = R"(
[global]
duration_ms = 2000
[node.0]
role = coordinator
[node.1]
x = 10
[traffic.t]
node = 1
pattern = poisson
interval_ms = 40
)";
  auto run = [&] {
    Simulation sim(load_scenario(text));
    sim.run();
    std::ostringstream os;
    sim.trace().write(os);
    return os.str();
  };
  const std::string first = run();
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, run());
}

}  // namespace
}  // namespace lrwpan
