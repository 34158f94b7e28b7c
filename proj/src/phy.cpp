#include "lrwpan/phy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lrwpan {

std::string_view to_string(TrxState s) {
  switch (s) {
    case TrxState::TrxOff:
      return "TRX_OFF";
    case TrxState::RxOn:
      return "RX_ON";
    case TrxState::TxOn:
      return "TX_ON";
    case TrxState::BusyRx:
      return "BUSY_RX";
    case TrxState::BusyTx:
      return "BUSY_TX";
  }
  return "?";
}

std::string_view to_string(TrxRequest r) {
  switch (r) {
    case TrxRequest::TrxOff:
      return "TRX_OFF";
    case TrxRequest::RxOn:
      return "RX_ON";
    case TrxRequest::TxOn:
      return "TX_ON";
    case TrxRequest::ForceTrxOff:
      return "FORCE_TRX_OFF";
  }
  return "?";
}

namespace {

Status status_of(TrxState s) {
  switch (s) {
    case TrxState::TrxOff:
      return Status::TrxOff;
    case TrxState::RxOn:
      return Status::RxOn;
    case TrxState::TxOn:
      return Status::TxOn;
    case TrxState::BusyRx:
      return Status::BusyRx;
    case TrxState::BusyTx:
      return Status::BusyTx;
  }
  return Status::TrxOff;
}

std::uint8_t linear_level(double value, double lo, double hi) {
  const double scaled = 255.0 * (value - lo) / (hi - lo);
  return static_cast<std::uint8_t>(std::clamp<long>(std::lround(scaled), 0, 255));
}

}  // namespace

Phy::Phy(NodeId node, Scheduler& scheduler, Medium& medium, Trace* trace, PhyConfig config, Position position)
    : node_(node), scheduler_(scheduler), medium_(medium), trace_(trace), config_(config) {
  if (!config_.cca_threshold_dbm) config_.cca_threshold_dbm = config_.sensitivity_dbm + 10.0;
  medium_.attach(node_, position, config_.sensitivity_dbm, this);
  medium_.set_channel(node_, pib_.current_channel);
}

std::uint8_t Phy::ed_level(double dbm) { return linear_level(dbm, kNoiseFloorDbm, -20.0); }

std::uint8_t Phy::link_quality(double dbm) const {
  return linear_level(dbm, config_.sensitivity_dbm, config_.sensitivity_dbm + 40.0);
}

void Phy::trace(std::string_view event, std::string details) {
  if (trace_) trace_->record(scheduler_.now(), node_, Layer::Phy, event, std::move(details));
}

void Phy::post(std::string_view kind, std::function<void()> fn) {
  scheduler_.schedule_at(scheduler_.now(), EventTag{node_, Layer::Phy, kind}, std::move(fn));
}

void Phy::confirm_trx(Status s) {
  trace("PLME-SET-TRX-STATE.confirm", "status=" + std::string(to_string(s)));
  post("trx_confirm", [this, s] {
    if (user_) user_->plme_set_trx_state_confirm(s);
  });
}

void Phy::drop_reception(std::string_view why) {
  if (!locked_rx_) return;
  trace("RX_ABORT", "tx=" + std::to_string(*locked_rx_) + " reason=" + std::string(why));
  locked_rx_.reset();
  if (state_ == TrxState::BusyRx) state_ = TrxState::RxOn;
}

void Phy::begin_transition(TrxState target, bool turnaround) {
  if (transition_) {
    scheduler_.cancel(transition_->event);
    transition_.reset();
  }
  if (!turnaround) {
    state_ = target;
    confirm_trx(Status::Success);
    return;
  }
  const auto handle = scheduler_.schedule_in(timing().turnaround(), EventTag{node_, Layer::Phy, "turnaround"},
                                             [this] {
                                               state_ = transition_->target;
                                               transition_.reset();
                                               confirm_trx(Status::Success);
                                             });
  transition_ = Transition{target, handle};
}

void Phy::plme_set_trx_state_request(TrxRequest request) {
  trace("PLME-SET-TRX-STATE.request", "state=" + std::string(to_string(request)));

  if (request == TrxRequest::ForceTrxOff) {
    if (transition_) {
      scheduler_.cancel(transition_->event);
      transition_.reset();
    }
    deferred_.reset();
    if (state_ == TrxState::BusyTx && current_tx_) {
      scheduler_.cancel(tx_end_event_);
      medium_.abort_transmission(*current_tx_);
      trace("TX_ABORT", "tx=" + std::to_string(*current_tx_));
      current_tx_.reset();
      post("pd_data_confirm", [this] {
        if (user_) user_->pd_data_confirm(Status::TrxOff);
      });
    }
    drop_reception("force_trx_off");
    state_ = TrxState::TrxOff;
    confirm_trx(Status::Success);
    return;
  }

  const TrxState target = request == TrxRequest::RxOn   ? TrxState::RxOn
                          : request == TrxRequest::TxOn ? TrxState::TxOn
                                                        : TrxState::TrxOff;

  if (state_ == TrxState::BusyTx) {
    // The change happens once the PPDU is out.
    if (target != TrxState::TxOn) deferred_ = target;
    confirm_trx(Status::BusyTx);
    return;
  }
  if (state_ == TrxState::BusyRx) {
    if (target == TrxState::RxOn) {
      confirm_trx(Status::RxOn);
      return;
    }
    if (target == TrxState::TrxOff) {
      deferred_ = TrxState::TrxOff;
      confirm_trx(Status::BusyRx);
      return;
    }
    // Switching to transmit abandons the frame being received.
    drop_reception("tx_on");
  }

  const TrxState effective = transition_ ? transition_->target : state_;
  if (target == effective) {
    if (transition_) return;  // already heading there; its confirm follows
    confirm_trx(status_of(target));
    return;
  }
  if (transition_) {
    scheduler_.cancel(transition_->event);
    transition_.reset();
  }
  deferred_.reset();
  const bool turnaround = target == TrxState::TxOn || (state_ == TrxState::TxOn && target == TrxState::RxOn);
  begin_transition(target, turnaround);
}

void Phy::apply_deferred() {
  if (!deferred_) return;
  const TrxState target = *deferred_;
  deferred_.reset();
  if (target == state_) return;
  const bool turnaround = state_ == TrxState::TxOn && target == TrxState::RxOn;
  begin_transition(target, turnaround);
}

void Phy::pd_data_request(Bytes psdu) {
  trace("PD-DATA.request", "len=" + std::to_string(psdu.size()));
  Status fail = Status::Success;
  if (psdu.size() > kMaxPhyPacketSize) {
    fail = Status::FrameTooLong;
  } else if (state_ != TrxState::TxOn || transition_) {
    fail = state_ == TrxState::BusyRx ? Status::RxOn : status_of(state_);
  }
  if (fail != Status::Success) {
    trace("PD-DATA.confirm", "status=" + std::string(to_string(fail)));
    post("pd_data_confirm", [this, fail] {
      if (user_) user_->pd_data_confirm(fail);
    });
    return;
  }

  const auto len = psdu.size();
  const SimTime airtime = timing().airtime(static_cast<std::uint32_t>(len));
  const TxId id = medium_.begin_transmission(node_, pib_.current_channel, pib_.transmit_power_dbm, std::move(psdu));
  current_tx_ = id;
  state_ = TrxState::BusyTx;
  trace("TX_START", "tx=" + std::to_string(id) + " len=" + std::to_string(len) +
                        " ch=" + std::to_string(pib_.current_channel));
  tx_end_event_ = scheduler_.schedule_in(airtime, EventTag{node_, Layer::Phy, "tx_end"}, [this, id] {
    current_tx_.reset();
    state_ = TrxState::TxOn;
    trace("TX_END", "tx=" + std::to_string(id));
    trace("PD-DATA.confirm", "status=SUCCESS");
    post("pd_data_confirm", [this] {
      if (user_) user_->pd_data_confirm(Status::Success);
    });
    apply_deferred();
  });
}

void Phy::plme_cca_request() {
  const auto finish = [this](Status s) {
    trace("PLME-CCA.confirm", "status=" + std::string(to_string(s)));
    post("cca_confirm", [this, s] {
      if (user_) user_->plme_cca_confirm(s);
    });
  };
  if (state_ == TrxState::TrxOff && !transition_) return finish(Status::TrxOff);
  if (state_ == TrxState::TxOn || state_ == TrxState::BusyTx || transition_) {
    if (state_ == TrxState::TrxOff) return finish(Status::TrxOff);
    return finish(Status::Busy);
  }

  trace("CCA_START", "mode=" + std::to_string(pib_.cca_mode));
  const SimTime window = timing().cca_window();
  scheduler_.schedule_in(window, EventTag{node_, Layer::Phy, "cca_end"}, [this, window, finish] {
    if (state_ == TrxState::TrxOff) return finish(Status::TrxOff);
    if (state_ != TrxState::RxOn && state_ != TrxState::BusyRx) return finish(Status::Busy);
    const SimTime now = scheduler_.now();
    const std::uint8_t ch = pib_.current_channel;
    const bool energy = medium_.sense_energy(node_, ch, window, now) >= cca_threshold_dbm();
    const bool carrier = state_ == TrxState::BusyRx || medium_.carrier_present(node_, ch, window, now);
    bool busy = false;
    switch (pib_.cca_mode) {
      case 1:
        busy = energy;
        break;
      case 2:
        busy = carrier;
        break;
      default:
        busy = energy && carrier;
        break;
    }
    finish(busy ? Status::Busy : Status::Idle);
  });
}

void Phy::plme_ed_request() {
  const auto finish = [this](Status s, std::uint8_t level) {
    trace("PLME-ED.confirm", "status=" + std::string(to_string(s)) + " level=" + std::to_string(level));
    post("ed_confirm", [this, s, level] {
      if (user_) user_->plme_ed_confirm(s, level);
    });
  };
  if (state_ == TrxState::TrxOff) return finish(Status::TrxOff, 0);
  if (state_ == TrxState::TxOn || state_ == TrxState::BusyTx) return finish(Status::TxOn, 0);

  const SimTime window = timing().cca_window();
  scheduler_.schedule_in(window, EventTag{node_, Layer::Phy, "ed_end"}, [this, window, finish] {
    if (state_ == TrxState::TrxOff) return finish(Status::TrxOff, 0);
    if (state_ == TrxState::TxOn || state_ == TrxState::BusyTx) return finish(Status::TxOn, 0);
    const double dbm = medium_.sense_energy(node_, pib_.current_channel, window, scheduler_.now());
    finish(Status::Success, ed_level(dbm));
  });
}

Status Phy::plme_set(PibAttribute id, const PibValue& value) {
  const std::uint8_t old_channel = pib_.current_channel;
  const Status s = pib_.set(id, value);
  if (s == Status::Success && id == PibAttribute::phyCurrentChannel && pib_.current_channel != old_channel) {
    drop_reception("retune");
    medium_.set_channel(node_, pib_.current_channel);
    trace("CHANNEL", "ch=" + std::to_string(pib_.current_channel));
  }
  return s;
}

void Phy::on_signal_start(const Transmission& tx, double rx_power_dbm) {
  if (state_ != TrxState::RxOn || transition_ || locked_rx_) return;
  if (tx.channel != pib_.current_channel || rx_power_dbm < config_.sensitivity_dbm) return;
  locked_rx_ = tx.id;
  state_ = TrxState::BusyRx;
  trace("RX_START", "tx=" + std::to_string(tx.id) + " from=" + std::to_string(tx.source));
}

void Phy::on_signal_end(const Transmission& tx, double rx_power_dbm) {
  if (!locked_rx_ || *locked_rx_ != tx.id) return;
  locked_rx_.reset();
  state_ = TrxState::RxOn;
  const ReceiveOutcome outcome = medium_.receive_outcome(node_, tx.id);
  trace("RX_END", "tx=" + std::to_string(tx.id) + " outcome=" + std::string(to_string(outcome)));
  if (outcome == ReceiveOutcome::Delivered) {
    PdDataIndication ind{tx.psdu, link_quality(rx_power_dbm), rx_power_dbm, tx.start};
    post("pd_data_indication", [this, ind = std::move(ind)] {
      if (user_) user_->pd_data_indication(ind);
    });
  }
  apply_deferred();
}

}  // namespace lrwpan
