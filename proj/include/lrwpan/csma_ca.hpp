#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "lrwpan/engine.hpp"
#include "lrwpan/status.hpp"
#include "lrwpan/superframe.hpp"
#include "lrwpan/trace.hpp"

namespace lrwpan {

struct CsmaParams {
  std::uint8_t min_be = 3;
  std::uint8_t max_be = 5;
  std::uint8_t max_backoffs = 4;
  bool battery_life_extension = false;
};

/// One backoff decision, reported before the delay starts.
struct CsmaBackoff {
  std::uint32_t nb;
  std::uint32_t be;
  std::uint32_t periods;
  bool slotted;
};

/// Slotted and unslotted CSMA-CA.
///
/// The owner supplies a CCA trigger and receives the outcome; CCA results
/// are fed back through on_cca_confirm(). In slotted mode the algorithm works
/// only inside CAP windows given by on_cap_start(); outside them the backoff
/// countdown is paused.
class CsmaCa {
 public:
  /// Returns a value in [0, n).
  using BackoffDraw = std::function<std::uint32_t(std::uint32_t n)>;

  struct Hooks {
    std::function<void()> request_cca;
    /// SUCCESS or CHANNEL_ACCESS_FAILURE. On success `tx_at` is the earliest
    /// time the frame may go on air (a backoff boundary when slotted).
    std::function<void(Status, SimTime tx_at)> done;
    std::function<void(const CsmaBackoff&)> on_backoff;
  };

  CsmaCa(NodeId node, Scheduler& scheduler, PhyTiming timing, BackoffDraw draw, Hooks hooks, Trace* trace = nullptr);

  void set_timing(PhyTiming timing) { timing_ = timing; }

  void start_unslotted(const CsmaParams& params);
  /// `transaction` is the air time the frame exchange needs after the CCAs
  /// (frame, optional acknowledgment wait, IFS).
  void start_slotted(const CsmaParams& params, SimTime transaction, std::optional<CapWindow> cap);

  void on_cca_confirm(Status status);
  /// A new CAP began; resumes a paused slotted attempt.
  void on_cap_start(const CapWindow& cap);
  void cancel();

  bool active() const { return phase_ != Phase::Idle; }
  bool waiting_for_cap() const { return phase_ == Phase::Paused || phase_ == Phase::PausedFit; }
  bool slotted() const { return slotted_; }
  std::uint32_t nb() const { return nb_; }
  std::uint32_t be() const { return be_; }
  std::uint32_t cw() const { return cw_; }

 private:
  enum class Phase { Idle, Backoff, Paused, PausedFit, Cca };

  void draw_backoff();
  void countdown();
  void fit_check();
  void perform_cca();
  void finish(Status s, SimTime tx_at);
  void trace(std::string_view event, std::string details);

  NodeId node_;
  Scheduler& scheduler_;
  PhyTiming timing_;
  BackoffDraw draw_;
  Hooks hooks_;
  Trace* trace_;

  Phase phase_ = Phase::Idle;
  CsmaParams params_;
  bool slotted_ = false;
  std::uint32_t nb_ = 0;
  std::uint32_t be_ = 0;
  std::uint32_t cw_ = 0;
  std::uint32_t remaining_ = 0;  // backoff periods still to count (slotted)
  SimTime transaction_;
  std::optional<CapWindow> cap_;
  SimTime cca_start_;
  EventHandle timer_;
};

}  // namespace lrwpan
