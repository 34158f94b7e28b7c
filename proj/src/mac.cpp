#include "lrwpan/mac.hpp"

#include <algorithm>
#include <string>

namespace lrwpan {

namespace {

std::string_view purpose_name(std::uint8_t p) {
  static constexpr std::string_view names[] = {"data",   "assoc_req", "data_req",    "beacon_req",
                                               "gts_req", "indirect",  "beacon_reply"};
  return p < std::size(names) ? names[p] : "?";
}

}  // namespace

std::string_view to_string(ScanType t) {
  switch (t) {
    case ScanType::Ed:
      return "ED";
    case ScanType::Active:
      return "ACTIVE";
    case ScanType::Passive:
      return "PASSIVE";
  }
  return "?";
}

Mac::Mac(NodeId node, Scheduler& scheduler, Phy& phy, std::uint64_t seed, Trace* trace)
    : node_(node),
      scheduler_(scheduler),
      phy_(phy),
      trace_(trace),
      backoff_rng_(seed, node, RngPurpose::Backoff),
      sequence_rng_(seed, node, RngPurpose::Sequence),
      backoff_draw_([this](std::uint32_t n) { return static_cast<std::uint32_t>(backoff_rng_.below(n)); }),
      csma_(node, scheduler, phy.timing(), [this](std::uint32_t n) { return backoff_draw_(n); }, csma_hooks(),
            trace) {
  phy_.set_user(this);
  pib_.bind_phy(&phy_.pib());
  pib_.dsn = static_cast<std::uint8_t>(sequence_rng_.below(256));
  pib_.bsn = static_cast<std::uint8_t>(sequence_rng_.below(256));
}

CsmaCa::Hooks Mac::csma_hooks() {
  return CsmaCa::Hooks{
      .request_cca =
          [this] {
            if (phy_.state() == TrxState::TrxOff && !phy_.in_transition())
              phy_.plme_set_trx_state_request(TrxRequest::RxOn);
            // An unslotted CCA waits out a receive turnaround; a slotted one
            // keeps its boundary and sees the channel as busy.
            if (phy_.in_transition() && !csma_.slotted() && jobs_.empty()) {
              cca_after_turnaround_ = true;
              return;
            }
            phy_.plme_cca_request();
          },
      .done = [this](Status s, SimTime tx_at) { on_csma_done(s, tx_at); },
      .on_backoff = {},
  };
}

void Mac::set_backoff_draw(CsmaCa::BackoffDraw draw) { backoff_draw_ = std::move(draw); }

// --- plumbing ----------------------------------------------------------------

EventHandle Mac::at(SimTime t, std::string_view kind, std::function<void()> fn) {
  return scheduler_.schedule_at(std::max(t, scheduler_.now()), EventTag{node_, Layer::Mac, kind},
                                [this, epoch = epoch_, fn = std::move(fn)] {
                                  if (epoch == epoch_) fn();
                                });
}

void Mac::notify(std::string_view kind, std::function<void(MacUser&)> fn) {
  scheduler_.schedule_at(scheduler_.now(), EventTag{node_, Layer::Mac, kind}, [this, fn = std::move(fn)] {
    if (user_) fn(*user_);
  });
}

void Mac::trace(std::string_view event, std::string details) {
  if (trace_) trace_->record(scheduler_.now(), node_, Layer::Mac, event, std::move(details));
}

MacAddress Mac::own_address() const {
  if (pib_.short_address.value < 0xFFFE) return pib_.short_address;
  return pib_.extended_address;
}

MacAddress Mac::coordinator_address() const {
  if (pib_.coord_short_address.value < 0xFFFE) return pib_.coord_short_address;
  return pib_.coord_extended_address;
}

Frame Mac::make_frame(FrameType type, std::uint16_t dst_pan, MacAddress dst, MacAddress src, bool ack) const {
  Frame f;
  f.control.frame_type = type;
  f.control.ack_request = ack;
  f.control.dst_addr_mode = mode_of(dst);
  f.control.src_addr_mode = mode_of(src);
  if (f.control.dst_addr_mode != AddrMode::None) f.dst_pan = dst_pan;
  if (f.control.src_addr_mode != AddrMode::None) {
    if (f.control.dst_addr_mode != AddrMode::None && dst_pan == pib_.pan_id) {
      f.control.pan_id_compression = true;
      f.src_pan = dst_pan;
    } else {
      f.src_pan = pib_.pan_id;
    }
  }
  f.dst = dst;
  f.src = src;
  return f;
}

SimTime Mac::ifs_after(std::size_t psdu_len) const {
  return symbols(psdu_len <= kMaxSifsFrameSize ? kSifsSymbols : kLifsSymbols);
}

bool Mac::addressed_to_me(const Frame& f) const {
  if (f.dst_pan && *f.dst_pan != pib_.pan_id && *f.dst_pan != kBroadcastPan) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, ShortAddress>) {
          return a.is_broadcast() || a == pib_.short_address;
        } else if constexpr (std::is_same_v<T, ExtAddress>) {
          return a == pib_.extended_address;
        } else {
          // No destination: only the PAN coordinator of the source PAN.
          return pan_coordinator_ && f.src_pan && *f.src_pan == pib_.pan_id;
        }
      },
      f.dst);
}

// --- PIB -----------------------------------------------------------------------

PibResult Mac::mlme_get(PibAttribute id) const {
  if (is_phy_attribute(id)) return phy_.plme_get(id);
  return pib_.get(id);
}

Status Mac::mlme_set(PibAttribute id, const PibValue& value) {
  if (is_phy_attribute(id)) {
    const Status s = phy_.plme_set(id, value);
    if (s == Status::Success) csma_.set_timing(timing());
    return s;
  }
  const Status s = pib_.set(id, value);
  if (s == Status::Success && id == PibAttribute::macRxOnWhenIdle) restore_radio();
  return s;
}

void Mac::mlme_reset(bool set_default) {
  trace("MLME-RESET.request", std::string("set_default=") + (set_default ? "1" : "0"));
  ++epoch_;
  cca_after_turnaround_ = false;
  csma_.cancel();
  for (auto& job : jobs_) scheduler_.cancel(job.timer);
  jobs_.clear();
  cap_queue_.clear();
  current_.reset();
  gts_queue_.clear();
  gts_current_.reset();
  gts_window_.reset();
  ack_wait_.reset();
  last_seq_.clear();
  sf_.reset();
  in_active_ = tracking_ = searching_ = beacon_window_ = false;
  lost_beacons_ = 0;
  coordinator_ = pan_coordinator_ = false;
  gts_table_.clear();
  denials_.clear();
  while (!indirect_.entries().empty()) indirect_.remove(indirect_.entries().front().id);
  own_gts_.clear();
  poll_.reset();
  association_.reset();
  gts_request_.reset();
  scan_.reset();
  pib_.reset(set_default, sequence_rng_);
  phy_.plme_set_trx_state_request(TrxRequest::ForceTrxOff);
  notify("reset_confirm", [](MacUser&) {});
}

// --- radio -----------------------------------------------------------------------

bool Mac::want_rx() const {
  if (scan_ || pib_.rx_on_when_idle) return true;
  if (ack_wait_ || (poll_ && poll_->waiting_data)) return true;
  if (csma_.active() && !csma_.waiting_for_cap()) return true;
  if (in_active_ || beacon_window_ || searching_) return true;
  return false;
}

void Mac::restore_radio() {
  if (!jobs_.empty()) return;
  const TrxState s = phy_.state();
  if (want_rx()) {
    if ((s == TrxState::RxOn || s == TrxState::BusyRx) && !phy_.in_transition()) return;
    phy_.plme_set_trx_state_request(TrxRequest::RxOn);
  } else {
    if (s == TrxState::TrxOff && !phy_.in_transition()) return;
    phy_.plme_set_trx_state_request(TrxRequest::TrxOff);
  }
}

void Mac::push_job(RadioJob job, bool front) {
  if (front && !jobs_.empty() && !jobs_.front().sending) {
    scheduler_.cancel(jobs_.front().timer);
    jobs_.front().active = false;
    jobs_.push_front(std::move(job));
  } else if (front && !jobs_.empty()) {
    jobs_.insert(jobs_.begin() + 1, std::move(job));
  } else {
    jobs_.push_back(std::move(job));
  }
  activate_job();
}

void Mac::activate_job() {
  if (jobs_.empty() || jobs_.front().active) return;
  RadioJob& job = jobs_.front();
  job.active = true;
  const SimTime wake = job.not_before > timing().turnaround() ? job.not_before - timing().turnaround() : SimTime{};
  if (wake > scheduler_.now()) {
    job.timer = at(wake, "radio_wake", [this] { phy_.plme_set_trx_state_request(TrxRequest::TxOn); });
  } else {
    phy_.plme_set_trx_state_request(TrxRequest::TxOn);
  }
}

void Mac::plme_set_trx_state_confirm(Status) {
  if (cca_after_turnaround_ && !phy_.in_transition() &&
      (phy_.state() == TrxState::RxOn || phy_.state() == TrxState::BusyRx)) {
    cca_after_turnaround_ = false;
    if (csma_.active()) phy_.plme_cca_request();
  }
  try_send();
}

void Mac::try_send() {
  if (jobs_.empty()) return;
  RadioJob& job = jobs_.front();
  if (!job.active || job.sending || phy_.state() != TrxState::TxOn || phy_.in_transition()) return;
  const SimTime now = scheduler_.now();
  if (now < job.not_before) {
    if (!scheduler_.pending(job.timer)) job.timer = at(job.not_before, "radio_send", [this] { try_send(); });
    return;
  }
  job.sending = true;
  if (job.kind == JobKind::Beacon) job.psdu = build_beacon();
  last_tx_start_ = now;
  phy_.pd_data_request(job.psdu);
}

void Mac::pd_data_confirm(Status status) {
  if (jobs_.empty() || !jobs_.front().sending) return;
  RadioJob job = std::move(jobs_.front());
  jobs_.pop_front();
  switch (job.kind) {
    case JobKind::Frame:
      frame_sent(status, job.gts);
      break;
    case JobKind::Ack:
      if (status == Status::Success) ++counters_.acks_sent;
      break;
    case JobKind::Beacon:
      if (status == Status::Success) beacon_sent();
      break;
  }
  if (!jobs_.empty()) {
    activate_job();
  } else {
    restore_radio();
    if (!current_) service_cap();
  }
}

void Mac::send_ack(std::uint8_t seq, bool pending) {
  if (!jobs_.empty()) {
    ++counters_.acks_skipped;
    trace("ACK_SKIP", "seq=" + std::to_string(seq));
    return;
  }
  SimTime t = scheduler_.now() + timing().turnaround();
  // Inside the CAP of a beacon-enabled PAN the ack goes out on a backoff
  // boundary.
  if (sf_ && in_active_ && t < sf_->cap_end()) t = align_up(t, sf_->start, timing().backoff_period());
  trace("ACK_TX", "seq=" + std::to_string(seq) + " pending=" + (pending ? "1" : "0"));
  push_job(RadioJob{JobKind::Ack, encode_frame(make_ack(seq, pending)), t});
}

// --- CAP transmission path ------------------------------------------------------

void Mac::enqueue(Outgoing out, bool front) {
  out.psdu = encode_frame(out.frame);
  trace("ENQUEUE", "purpose=" + std::string(purpose_name(static_cast<std::uint8_t>(out.purpose))) +
                       " seq=" + std::to_string(out.frame.sequence_number) + " len=" + std::to_string(out.psdu.size()));
  if (front) {
    cap_queue_.push_front(std::move(out));
  } else {
    cap_queue_.push_back(std::move(out));
  }
  service_cap();
}

void Mac::service_cap() {
  if (current_ || cap_queue_.empty() || !jobs_.empty()) return;
  if (scan_ && cap_queue_.front().purpose != Purpose::BeaconRequest) return;
  const SimTime now = scheduler_.now();
  if (now < cap_ready_at_) {
    if (!scheduler_.pending(cap_service_timer_)) cap_service_timer_ = at(cap_ready_at_, "cap_service", [this] { service_cap(); });
    return;
  }
  current_ = std::move(cap_queue_.front());
  cap_queue_.pop_front();
  start_attempt();
}

SimTime Mac::transaction_time(const Outgoing& out) const {
  const auto len = static_cast<std::uint32_t>(out.psdu.size());
  SimTime t = timing().airtime(len) + ifs_after(len);
  if (out.ack()) t += symbols(pib_.ack_wait_symbols());
  return t;
}

std::optional<CapWindow> Mac::current_cap() const {
  if (!sf_ || !in_active_) return std::nullopt;
  const CapWindow cap = sf_->cap_window();
  if (scheduler_.now() >= cap.end) return std::nullopt;
  return cap;
}

void Mac::start_attempt() {
  CsmaParams params{pib_.min_be, pib_.max_be, pib_.max_csma_backoffs, pib_.batt_life_ext};
  csma_.set_timing(timing());
  if (beacon_enabled() && !scan_ && current_->purpose != Purpose::BeaconReply) {
    csma_.start_slotted(params, transaction_time(*current_), current_cap());
  } else {
    csma_.start_unslotted(params);
  }
  restore_radio();
}

void Mac::on_csma_done(Status status, SimTime tx_at) {
  if (!current_) return;
  if (status != Status::Success) {
    ++counters_.csma_failures;
    complete_cap(status, false);
    return;
  }
  push_job(RadioJob{JobKind::Frame, current_->psdu, tx_at, false});
}

void Mac::frame_sent(Status status, bool gts) {
  std::optional<Outgoing>& slot = gts ? gts_current_ : current_;
  if (!slot) return;
  Outgoing& out = *slot;
  ++out.attempts;
  out.last_tx = last_tx_start_;
  ++counters_.frames_sent;
  if (out.attempts > 1) ++counters_.retries;
  if (out.frame.control.frame_type == FrameType::Data) ++counters_.data_frames_sent;
  if (gts) {
    ++counters_.gts_frames_sent;
    counters_.gts_airtime_us += timing().airtime(static_cast<std::uint32_t>(out.psdu.size())).us();
  }
  trace("FRAME_TX", "purpose=" + std::string(purpose_name(static_cast<std::uint8_t>(out.purpose))) +
                        " seq=" + std::to_string(out.frame.sequence_number) + " attempt=" +
                        std::to_string(out.attempts) + " gts=" + (gts ? "1" : "0") +
                        " tx_start=" + std::to_string(out.last_tx.us()) + " len=" + std::to_string(out.psdu.size()));
  if (status != Status::Success) {
    if (gts) {
      complete_gts(status);
    } else {
      complete_cap(Status::ChannelAccessFailure, false);
    }
    return;
  }
  if (!out.ack()) {
    if (gts) {
      complete_gts(Status::Success);
    } else {
      complete_cap(Status::Success, false);
    }
    return;
  }
  const std::uint8_t seq = out.frame.sequence_number;
  ack_wait_ = AckWait{seq, gts, at(scheduler_.now() + symbols(pib_.ack_wait_symbols()), "ack_timeout",
                                   [this] { on_ack_timeout(); })};
}

void Mac::on_ack(const Frame& ack) {
  if (!ack_wait_ || ack.sequence_number != ack_wait_->seq) {
    trace("ACK_IGNORED", "seq=" + std::to_string(ack.sequence_number));
    return;
  }
  scheduler_.cancel(ack_wait_->timer);
  const bool gts = ack_wait_->gts;
  ack_wait_.reset();
  ++counters_.acks_received;
  trace("ACK_RX", "seq=" + std::to_string(ack.sequence_number) + " pending=" + (ack.control.frame_pending ? "1" : "0"));
  if (gts) {
    complete_gts(Status::Success);
  } else {
    complete_cap(Status::Success, ack.control.frame_pending);
  }
}

void Mac::on_ack_timeout() {
  if (!ack_wait_) return;
  const bool gts = ack_wait_->gts;
  ack_wait_.reset();
  ++counters_.ack_timeouts;
  Outgoing* out = gts ? (gts_current_ ? &*gts_current_ : nullptr) : (current_ ? &*current_ : nullptr);
  if (!out) return;
  trace("ACK_TIMEOUT", "seq=" + std::to_string(out->frame.sequence_number) + " attempt=" + std::to_string(out->attempts));
  if (out->attempts >= 1u + pib_.max_frame_retries) {
    ++counters_.no_ack;
    if (gts) {
      complete_gts(Status::NoAck);
    } else {
      complete_cap(Status::NoAck, false);
    }
    return;
  }
  if (gts) {
    service_gts();
  } else {
    start_attempt();
  }
}

void Mac::complete_cap(Status status, bool ack_pending) {
  if (!current_) return;
  Outgoing out = std::move(*current_);
  current_.reset();
  cap_ready_at_ = scheduler_.now() + ifs_after(out.psdu.size());
  dispatch_result(out, status, ack_pending);
  restore_radio();
  service_cap();
}

void Mac::dispatch_result(Outgoing& out, Status status, bool ack_pending) {
  switch (out.purpose) {
    case Purpose::Msdu: {
      trace("MCPS-DATA.confirm", "handle=" + std::to_string(out.handle) + " status=" + std::string(to_string(status)));
      McpsDataConfirm c{out.handle, status, out.last_tx};
      notify("mcps_data_confirm", [c](MacUser& u) { u.mcps_data_confirm(c); });
      break;
    }
    case Purpose::AssociationRequest:
      if (!association_) break;
      if (status != Status::Success) {
        finish_association(status, ShortAddress{0xFFFF});
      } else {
        // Give the coordinator time to prepare the response, then poll.
        association_->timer = at(scheduler_.now() + symbols(std::uint64_t{pib_.response_wait_time} * kBaseSuperframeSymbols),
                                 "assoc_wait", [this] { start_poll(false); });
      }
      break;
    case Purpose::DataRequest:
      if (!poll_) break;
      if (status != Status::Success) {
        poll_done(status);
      } else if (!ack_pending) {
        poll_done(Status::NoData);
      } else {
        poll_->waiting_data = true;
        poll_->timer = at(scheduler_.now() + symbols(pib_.max_frame_total_wait_symbols()), "poll_wait",
                          [this] { poll_done(Status::NoData); });
      }
      break;
    case Purpose::GtsRequest:
      if (!gts_request_) break;
      if (status != Status::Success) {
        finish_gts_request(status);
      } else if (!gts_request_->characteristics.allocate) {
        const auto dir = gts_request_->characteristics.direction;
        std::erase_if(own_gts_, [dir](const GtsDescriptor& d) { return d.direction == dir; });
        finish_gts_request(Status::Success);
      } else {
        gts_request_->acknowledged = true;
      }
      break;
    case Purpose::Indirect:
      finish_indirect(out.indirect_id, status, out.last_tx);
      break;
    case Purpose::BeaconRequest:
    case Purpose::BeaconReply:
      break;
  }
}

// --- MCPS-DATA -------------------------------------------------------------------

void Mac::mcps_data_request(McpsDataRequest req) {
  ++counters_.data_requests;
  trace("MCPS-DATA.request", "handle=" + std::to_string(req.handle) + " dst=" + to_string(req.dst) +
                                 " len=" + std::to_string(req.msdu.size()) + " ack=" + (req.options.ack ? "1" : "0") +
                                 " gts=" + (req.options.gts ? "1" : "0") + " indirect=" +
                                 (req.options.indirect ? "1" : "0"));
  const auto fail = [&](Status s) {
    trace("MCPS-DATA.confirm", "handle=" + std::to_string(req.handle) + " status=" + std::string(to_string(s)));
    McpsDataConfirm c{req.handle, s, scheduler_.now()};
    notify("mcps_data_confirm", [c](MacUser& u) { u.mcps_data_confirm(c); });
  };

  const bool broadcast = std::holds_alternative<ShortAddress>(req.dst) && std::get<ShortAddress>(req.dst).is_broadcast();
  if (req.options.ack && broadcast) return fail(Status::InvalidParameter);

  MacAddress src;
  if (req.src_addr_mode == AddrMode::Short && pib_.short_address.value < 0xFFFE) {
    src = pib_.short_address;
  } else if (req.src_addr_mode != AddrMode::None) {
    src = pib_.extended_address;
  }
  if (std::holds_alternative<std::monostate>(req.dst) && std::holds_alternative<std::monostate>(src))
    return fail(Status::InvalidParameter);

  Frame f = make_frame(FrameType::Data, req.dst_pan, req.dst, src, req.options.ack);
  f.payload = std::move(req.msdu);
  // Payloads beyond aMaxMACSafePayloadSize need the 2006 frame version.
  if (f.payload.size() > 102) f.control.frame_version = FrameVersion::V2006;
  if (f.payload.size() > max_payload_size(f)) return fail(Status::FrameTooLong);

  if (req.options.gts) {
    bool ok = false;
    if (coordinator_) {
      if (const auto* s = std::get_if<ShortAddress>(&req.dst))
        ok = gts_table_.find(*s, GtsDirection::Receive).has_value();
    } else {
      ok = std::any_of(own_gts_.begin(), own_gts_.end(),
                       [](const GtsDescriptor& d) { return d.direction == GtsDirection::Transmit; });
    }
    if (!ok) return fail(Status::InvalidGts);
    f.sequence_number = next_dsn();
    Outgoing out{.frame = std::move(f), .purpose = Purpose::Msdu, .handle = req.handle};
    out.psdu = encode_frame(out.frame);
    gts_queue_.push_back(std::move(out));
    service_gts();
    return;
  }

  if (req.options.indirect && coordinator_) {
    f.sequence_number = next_dsn();
    const Status s = queue_indirect(std::move(f), IndirectKind::Msdu, req.handle);
    if (s != Status::Success) fail(s);
    return;
  }

  if (cap_queue_.size() >= 64) return fail(Status::TransactionOverflow);
  f.sequence_number = next_dsn();
  enqueue(Outgoing{.frame = std::move(f), .purpose = Purpose::Msdu, .handle = req.handle});
}

// --- reception -----------------------------------------------------------------------

void Mac::pd_data_indication(const PdDataIndication& ind) {
  Frame f;
  try {
    f = decode_frame(ind.psdu);
  } catch (const FrameError& e) {
    trace("RX_DROP", "reason=" + std::string(to_string(e.code())));
    return;
  }
  ++counters_.frames_received;
  if (f.control.security_enabled) {
    trace("RX_DROP", "reason=security");
    return;
  }

  if (scan_) {
    if (f.control.frame_type == FrameType::Beacon && scan_->request.type != ScanType::Ed) scan_collect(f, ind);
    return;
  }

  switch (f.control.frame_type) {
    case FrameType::Ack:
      on_ack(f);
      return;
    case FrameType::Beacon:
      handle_beacon(f, ind);
      return;
    case FrameType::Data:
    case FrameType::Command:
      break;
  }

  if (pib_.promiscuous_mode) {
    if (f.control.frame_type == FrameType::Data) handle_data(f, ind);
    return;
  }
  if (!addressed_to_me(f)) return;

  const bool broadcast = std::holds_alternative<ShortAddress>(f.dst) && std::get<ShortAddress>(f.dst).is_broadcast();
  if (f.control.ack_request && !broadcast) {
    bool pending = false;
    if (f.command == CommandId::DataRequest) pending = has_pending_for(f.src);
    send_ack(f.sequence_number, pending);
  }

  if (f.control.ack_request && !std::holds_alternative<std::monostate>(f.src)) {
    const auto it = last_seq_.find(f.src);
    if (it != last_seq_.end() && it->second == f.sequence_number) {
      ++counters_.duplicates;
      trace("DUPLICATE", "seq=" + std::to_string(f.sequence_number) + " src=" + to_string(f.src));
      return;
    }
    last_seq_[f.src] = f.sequence_number;
  }

  if (f.control.frame_type == FrameType::Data) {
    handle_data(f, ind);
  } else {
    handle_command(f, ind);
  }
}

void Mac::handle_data(const Frame& f, const PdDataIndication& ind) {
  ++counters_.data_indications;
  McpsDataIndication di;
  di.src_pan = f.src_pan.value_or(pib_.pan_id);
  di.src = f.src;
  di.dst_pan = f.dst_pan.value_or(pib_.pan_id);
  di.dst = f.dst;
  di.msdu = f.payload;
  di.link_quality = ind.link_quality;
  di.dsn = f.sequence_number;
  di.timestamp = ind.rx_start;
  trace("MCPS-DATA.indication", "src=" + to_string(f.src) + " seq=" + std::to_string(f.sequence_number) +
                                    " len=" + std::to_string(f.payload.size()) + " lqi=" +
                                    std::to_string(ind.link_quality));
  notify("mcps_data_indication", [di = std::move(di)](MacUser& u) { u.mcps_data_indication(di); });

  if (poll_ && poll_->waiting_data) {
    const bool more = f.control.frame_pending;
    poll_done(Status::Success);
    if (more) start_poll(false);
  }
}

void Mac::handle_command(const Frame& f, const PdDataIndication&) {
  trace("COMMAND_RX", "cmd=" + std::string(to_string(*f.command)) + " src=" + to_string(f.src));
  switch (*f.command) {
    case CommandId::AssociationRequest:
      if (coordinator_) handle_association_request(f);
      break;
    case CommandId::AssociationResponse:
      handle_association_response(f);
      break;
    case CommandId::DataRequest:
      if (coordinator_) handle_data_request(f);
      break;
    case CommandId::BeaconRequest:
      if (coordinator_ && !beacon_enabled()) handle_beacon_request();
      break;
    case CommandId::GtsRequest:
      if (pan_coordinator_) handle_gts_request(f);
      break;
    default:
      // Disassociation, orphan handling and realignment are not modelled.
      break;
  }
}

}  // namespace lrwpan
