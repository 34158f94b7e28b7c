#include "lrwpan/csma_ca.hpp"

#include <algorithm>
#include <string>

namespace lrwpan {

CsmaCa::CsmaCa(NodeId node, Scheduler& scheduler, PhyTiming timing, BackoffDraw draw, Hooks hooks, Trace* trace)
    : node_(node), scheduler_(scheduler), timing_(timing), draw_(std::move(draw)), hooks_(std::move(hooks)),
      trace_(trace) {}

void CsmaCa::trace(std::string_view event, std::string details) {
  if (trace_) trace_->record(scheduler_.now(), node_, Layer::Mac, event, std::move(details));
}

void CsmaCa::start_unslotted(const CsmaParams& params) {
  cancel();
  params_ = params;
  slotted_ = false;
  nb_ = 0;
  be_ = params.min_be;
  draw_backoff();
}

void CsmaCa::start_slotted(const CsmaParams& params, SimTime transaction, std::optional<CapWindow> cap) {
  cancel();
  params_ = params;
  slotted_ = true;
  nb_ = 0;
  cw_ = 2;
  be_ = params.battery_life_extension ? std::min<std::uint32_t>(2, params.min_be) : params.min_be;
  transaction_ = transaction;
  cap_ = cap;
  draw_backoff();
}

void CsmaCa::cancel() {
  scheduler_.cancel(timer_);
  timer_ = {};
  phase_ = Phase::Idle;
}

void CsmaCa::draw_backoff() {
  const std::uint32_t periods = draw_(1u << be_);
  trace("CSMA_BACKOFF", "nb=" + std::to_string(nb_) + " be=" + std::to_string(be_) +
                            " periods=" + std::to_string(periods) + " slotted=" + (slotted_ ? "1" : "0"));
  if (hooks_.on_backoff) hooks_.on_backoff(CsmaBackoff{nb_, be_, periods, slotted_});
  if (!slotted_) {
    phase_ = Phase::Backoff;
    timer_ = scheduler_.schedule_in(timing_.backoff_period() * periods, EventTag{node_, Layer::Mac, "csma_backoff"},
                                    [this] { perform_cca(); });
    return;
  }
  remaining_ = periods;
  countdown();
}

void CsmaCa::countdown() {
  if (!cap_) {
    phase_ = Phase::Paused;
    return;
  }
  const SimTime unit = timing_.backoff_period();
  SimTime boundary = align_up(scheduler_.now(), cap_->origin, unit);
  boundary = std::max(boundary, cap_->begin);
  const std::uint64_t available = cap_->end > boundary ? (cap_->end - boundary) / unit : 0;
  if (remaining_ >= available) {
    // Not enough of this CAP left; continue counting in the next one.
    remaining_ -= static_cast<std::uint32_t>(available);
    phase_ = Phase::Paused;
    cap_.reset();
    return;
  }
  phase_ = Phase::Backoff;
  timer_ = scheduler_.schedule_at(boundary + unit * remaining_, EventTag{node_, Layer::Mac, "csma_backoff"},
                                  [this] { fit_check(); });
}

void CsmaCa::fit_check() {
  const SimTime unit = timing_.backoff_period();
  const SimTime now = scheduler_.now();
  if (cap_ && now + unit * cw_ + transaction_ <= cap_->end) {
    perform_cca();
    return;
  }
  trace("CSMA_DEFER", "reason=cap_end");
  phase_ = Phase::PausedFit;
  cap_.reset();
}

void CsmaCa::on_cap_start(const CapWindow& cap) {
  if (!slotted_) return;
  cap_ = cap;
  if (phase_ == Phase::Paused) {
    countdown();
  } else if (phase_ == Phase::PausedFit) {
    phase_ = Phase::Backoff;
    const SimTime at = std::max(cap.begin, align_up(scheduler_.now(), cap.origin, timing_.backoff_period()));
    timer_ = scheduler_.schedule_at(at, EventTag{node_, Layer::Mac, "csma_resume"}, [this] { fit_check(); });
  }
}

void CsmaCa::perform_cca() {
  phase_ = Phase::Cca;
  cca_start_ = scheduler_.now();
  if (hooks_.request_cca) hooks_.request_cca();
}

void CsmaCa::on_cca_confirm(Status status) {
  if (phase_ != Phase::Cca) return;
  const SimTime unit = timing_.backoff_period();
  if (status == Status::Idle) {
    if (!slotted_) {
      finish(Status::Success, scheduler_.now());
      return;
    }
    if (--cw_ == 0) {
      finish(Status::Success, cca_start_ + unit);
      return;
    }
    phase_ = Phase::Backoff;
    timer_ = scheduler_.schedule_at(cca_start_ + unit, EventTag{node_, Layer::Mac, "csma_cca"},
                                    [this] { perform_cca(); });
    return;
  }

  // Busy (or the receiver was unavailable).
  cw_ = 2;
  ++nb_;
  be_ = std::min<std::uint32_t>(be_ + 1, params_.max_be);
  if (nb_ > params_.max_backoffs) {
    finish(Status::ChannelAccessFailure, scheduler_.now());
    return;
  }
  draw_backoff();
}

void CsmaCa::finish(Status s, SimTime tx_at) {
  phase_ = Phase::Idle;
  timer_ = {};
  trace("CSMA_DONE", "status=" + std::string(to_string(s)) + " nb=" + std::to_string(nb_));
  if (hooks_.done) hooks_.done(s, tx_at);
}

}  // namespace lrwpan
