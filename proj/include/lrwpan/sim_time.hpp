#pragma once

#include <compare>
#include <cstdint>
#include <ostream>

namespace lrwpan {

/// Simulated time in integer microsecond ticks. Used both for instants and
/// for durations; every supported PHY symbol period is a whole number of ticks.
class SimTime {
 public:
  constexpr SimTime() = default;
  constexpr explicit SimTime(std::uint64_t us) : us_(us) {}

  static constexpr SimTime zero() { return SimTime{}; }
  static constexpr SimTime max() { return SimTime{~std::uint64_t{0}}; }
  static constexpr SimTime from_ms(std::uint64_t ms) { return SimTime{ms * 1000}; }

  constexpr std::uint64_t us() const { return us_; }
  constexpr double seconds() const { return static_cast<double>(us_) * 1e-6; }

  friend constexpr auto operator<=>(SimTime, SimTime) = default;

  friend constexpr SimTime operator+(SimTime a, SimTime b) { return SimTime{a.us_ + b.us_}; }
  friend constexpr SimTime operator-(SimTime a, SimTime b) { return SimTime{a.us_ - b.us_}; }
  friend constexpr SimTime operator*(SimTime a, std::uint64_t k) { return SimTime{a.us_ * k}; }
  friend constexpr SimTime operator*(std::uint64_t k, SimTime a) { return SimTime{a.us_ * k}; }
  friend constexpr SimTime operator/(SimTime a, std::uint64_t k) { return SimTime{a.us_ / k}; }
  friend constexpr std::uint64_t operator/(SimTime a, SimTime b) { return a.us_ / b.us_; }
  friend constexpr SimTime operator%(SimTime a, SimTime b) { return SimTime{a.us_ % b.us_}; }
  constexpr SimTime& operator+=(SimTime o) {
    us_ += o.us_;
    return *this;
  }

  friend std::ostream& operator<<(std::ostream& os, SimTime t) { return os << t.us_ << "us"; }

 private:
  std::uint64_t us_ = 0;
};

/// Smallest multiple of `step` measured from `origin` that is >= `t`.
constexpr SimTime align_up(SimTime t, SimTime origin, SimTime step) {
  if (t <= origin) return origin;
  const std::uint64_t elapsed = (t - origin).us();
  const std::uint64_t n = (elapsed + step.us() - 1) / step.us();
  return origin + step * n;
}

}  // namespace lrwpan
