// Beacon generation and tracking, superframe timing and GTS handling.
#include <algorithm>
#include <string>

#include "lrwpan/mac.hpp"

namespace lrwpan {

void Mac::schedule_beacon(SimTime when) {
  const SimTime prepare = when > timing().turnaround() ? when - timing().turnaround() : SimTime{};
  at(prepare, "beacon_prepare", [this, when] {
    if (!coordinator_ || !beacon_enabled()) return;
    push_job(RadioJob{JobKind::Beacon, {}, when}, true);
  });
}

Frame Mac::beacon_frame() {
  BeaconFields b;
  b.superframe.beacon_order = pib_.beacon_order;
  b.superframe.superframe_order = pib_.superframe_order;
  b.superframe.final_cap_slot = beacon_enabled() ? gts_table_.final_cap_slot() : 15;
  b.superframe.battery_life_extension = pib_.batt_life_ext;
  b.superframe.pan_coordinator = pan_coordinator_;
  b.superframe.association_permit = pib_.association_permit;
  b.gts_permit = pib_.gts_permit;
  for (const auto& d : denials_) {
    if (b.gts.size() < kMaxGtsDescriptors) b.gts.push_back(d.field);
  }
  for (const auto& d : gts_table_.descriptors()) {
    if (b.gts.size() < kMaxGtsDescriptors) b.gts.push_back(GtsField{d.device, d.starting_slot, d.length, d.direction});
  }
  for (const auto& dst : indirect_.destinations()) {
    if (b.pending_short.size() + b.pending_ext.size() >= kMaxBeaconPendingAddresses) break;
    if (const auto* s = std::get_if<ShortAddress>(&dst)) b.pending_short.push_back(*s);
    if (const auto* e = std::get_if<ExtAddress>(&dst)) b.pending_ext.push_back(*e);
  }

  Frame f;
  f.control.frame_type = FrameType::Beacon;
  f.control.src_addr_mode = mode_of(own_address());
  f.sequence_number = pib_.bsn++;
  f.src_pan = pib_.pan_id;
  f.src = own_address();
  f.payload = encode_beacon_fields(b);
  beacon_final_cap_ = b.superframe.final_cap_slot;
  return f;
}

Bytes Mac::build_beacon() {
  Frame f = beacon_frame();
  Bytes psdu = encode_frame(f);
  beacon_len_ = psdu.size();
  trace("BEACON_TX", "bsn=" + std::to_string(f.sequence_number) + " final_cap=" + std::to_string(beacon_final_cap_) +
                         " gts=" + std::to_string(gts_table_.descriptors().size()) +
                         " pending=" + std::to_string(indirect_.destinations().size()));
  return psdu;
}

void Mac::beacon_sent() {
  ++counters_.beacons_sent;
  sf_ = SuperframeTiming{last_tx_start_,    timing(),          pib_.beacon_order,
                         pib_.superframe_order, beacon_final_cap_, timing().airtime(static_cast<std::uint32_t>(beacon_len_))};
  for (auto& d : denials_) --d.beacons_left;
  std::erase_if(denials_, [](const DenialNotice& d) { return d.beacons_left == 0; });
  superframe_began();
  schedule_beacon(sf_->next_start());
}

void Mac::superframe_began() {
  in_active_ = true;
  const SimTime end = sf_->active_end();
  at(end, "active_end", [this, end] {
    if (sf_ && sf_->active_end() != end) return;
    in_active_ = false;
    restore_radio();
  });
  csma_.on_cap_start(sf_->cap_window());
  for (const auto& w : gts_windows()) {
    const SimTime open = w.begin > timing().turnaround() ? w.begin - timing().turnaround() : w.begin;
    at(open, "gts_open", [this, w] { open_gts_window(w); });
  }
  restore_radio();
}

// --- device side ---------------------------------------------------------------

void Mac::mlme_sync_request(bool track) {
  trace("MLME-SYNC.request", std::string("track=") + (track ? "1" : "0"));
  tracking_ = track;
  searching_ = true;
  scheduler_.cancel(search_timer_);
  const std::uint8_t bo = std::min<std::uint8_t>(pib_.beacon_order, 14);
  search_timer_ = at(scheduler_.now() + symbols(scan_dwell_symbols(bo)), "sync_search", [this] {
    if (!searching_) return;
    searching_ = false;
    tracking_ = false;
    trace("MLME-SYNC-LOSS.indication", "status=BEACON_LOSS");
    notify("sync_loss", [](MacUser& u) { u.mlme_sync_loss_indication(Status::BeaconLoss); });
    restore_radio();
  });
  restore_radio();
}

PanDescriptor Mac::make_pan_descriptor(const Frame& f, const BeaconFields& fields, const PdDataIndication& ind) const {
  PanDescriptor pd;
  pd.coord_address = f.src;
  pd.coord_pan_id = f.src_pan.value_or(0xFFFF);
  pd.logical_channel = phy_.pib().current_channel;
  pd.superframe = fields.superframe;
  pd.gts_permit = fields.gts_permit;
  pd.link_quality = ind.link_quality;
  pd.timestamp = ind.rx_start;
  return pd;
}

void Mac::handle_beacon(const Frame& f, const PdDataIndication& ind) {
  if (coordinator_) return;
  BeaconFields fields;
  try {
    fields = decode_beacon_fields(f.payload);
  } catch (const FrameError& e) {
    trace("RX_DROP", "reason=" + std::string(to_string(e.code())));
    return;
  }
  const bool pan_match = pib_.pan_id == kBroadcastPan || f.src_pan == pib_.pan_id;
  if (!pan_match) return;

  const MacAddress coord = coordinator_address();
  const bool coord_known = !(std::holds_alternative<ExtAddress>(coord) && std::get<ExtAddress>(coord).value == 0);
  if (coord_known && f.src != coord && !(std::holds_alternative<ExtAddress>(f.src) &&
                                         std::get<ExtAddress>(f.src) == pib_.coord_extended_address))
    return;

  if (tracking_ || searching_) track_beacon(f, fields, ind);

  const bool mine = std::find(fields.pending_short.begin(), fields.pending_short.end(), pib_.short_address) !=
                        fields.pending_short.end() ||
                    std::find(fields.pending_ext.begin(), fields.pending_ext.end(), pib_.extended_address) !=
                        fields.pending_ext.end();
  if (mine && pib_.auto_request && !poll_) {
    trace("PENDING_HIT", "bsn=" + std::to_string(f.sequence_number));
    start_poll(false);
  }
  if (!pib_.auto_request || !fields.beacon_payload.empty()) {
    MlmeBeaconNotify n;
    n.bsn = f.sequence_number;
    n.pan = make_pan_descriptor(f, fields, ind);
    for (const auto& s : fields.pending_short) n.pending.emplace_back(s);
    for (const auto& e : fields.pending_ext) n.pending.emplace_back(e);
    n.payload = fields.beacon_payload;
    trace("MLME-BEACON-NOTIFY.indication", "bsn=" + std::to_string(n.bsn));
    notify("beacon_notify", [n = std::move(n)](MacUser& u) { u.mlme_beacon_notify_indication(n); });
  }
}

void Mac::track_beacon(const Frame& f, const BeaconFields& fields, const PdDataIndication& ind) {
  searching_ = false;
  scheduler_.cancel(search_timer_);
  beacon_window_ = false;
  lost_beacons_ = 0;
  ++counters_.beacons_received;
  if (std::holds_alternative<ShortAddress>(f.src) && pib_.coord_short_address.value == 0xFFFF)
    pib_.coord_short_address = std::get<ShortAddress>(f.src);
  if (std::holds_alternative<ExtAddress>(f.src) && pib_.coord_extended_address.value == 0)
    pib_.coord_extended_address = std::get<ExtAddress>(f.src);
  if (pib_.pan_id == kBroadcastPan && f.src_pan) pib_.pan_id = *f.src_pan;

  const auto& spec = fields.superframe;
  pib_.beacon_order = spec.beacon_order;
  pib_.superframe_order = spec.superframe_order;
  sf_ = SuperframeTiming{ind.rx_start,          timing(),
                         spec.beacon_order,     spec.superframe_order,
                         spec.final_cap_slot,   timing().airtime(static_cast<std::uint32_t>(ind.psdu.size()))};
  expected_beacon_ = sf_->next_start();
  trace("BEACON_RX", "bsn=" + std::to_string(f.sequence_number) + " from=" + to_string(f.src) +
                         " start=" + std::to_string(ind.rx_start.us()));
  process_gts_fields(fields);
  if (spec.beacon_order < 15) superframe_began();
  if (tracking_ && spec.beacon_order < 15) schedule_tracking_timers();
}

void Mac::schedule_tracking_timers() {
  scheduler_.cancel(wake_timer_);
  scheduler_.cancel(miss_timer_);
  const SimTime lead = timing().backoff_period();
  const SimTime wake = expected_beacon_ > lead ? expected_beacon_ - lead : SimTime{};
  wake_timer_ = at(wake, "beacon_wake", [this] {
    beacon_window_ = true;
    restore_radio();
  });
  miss_timer_ = at(expected_beacon_ + symbols(timing().max_frame_symbols()), "beacon_miss", [this] { on_beacon_missed(); });
}

void Mac::on_beacon_missed() {
  if (!tracking_) return;
  beacon_window_ = false;
  ++lost_beacons_;
  ++counters_.beacons_missed;
  trace("BEACON_MISS", "lost=" + std::to_string(lost_beacons_));
  if (lost_beacons_ >= kMaxLostBeacons) {
    lose_sync();
    return;
  }
  expected_beacon_ += symbols(beacon_interval_symbols(pib_.beacon_order));
  schedule_tracking_timers();
  restore_radio();
}

void Mac::lose_sync() {
  tracking_ = false;
  in_active_ = false;
  beacon_window_ = false;
  sf_.reset();
  gts_window_.reset();
  scheduler_.cancel(wake_timer_);
  scheduler_.cancel(miss_timer_);
  trace("MLME-SYNC-LOSS.indication", "status=BEACON_LOSS");
  notify("sync_loss", [](MacUser& u) { u.mlme_sync_loss_indication(Status::BeaconLoss); });

  // Frames waiting for a CAP that will not come are given up.
  auto waiting = std::move(cap_queue_);
  cap_queue_.clear();
  if (current_ && csma_.active()) {
    csma_.cancel();
    complete_cap(Status::ChannelAccessFailure, false);
  }
  for (auto& out : waiting) dispatch_result(out, Status::ChannelAccessFailure, false);
  restore_radio();
}

// --- GTS -------------------------------------------------------------------------

void Mac::mlme_gts_request(const GtsCharacteristics& c) {
  trace("MLME-GTS.request", "len=" + std::to_string(c.length) + " dir=" +
                                (c.direction == GtsDirection::Transmit ? "tx" : "rx") + " allocate=" +
                                (c.allocate ? "1" : "0"));
  const auto fail = [&](Status s) {
    trace("MLME-GTS.confirm", "status=" + std::string(to_string(s)));
    MlmeGtsConfirm conf{c, s};
    notify("gts_confirm", [conf](MacUser& u) { u.mlme_gts_confirm(conf); });
  };
  if (pib_.short_address.value >= 0xFFFE) return fail(Status::NoShortAddress);
  if (!beacon_enabled() || !tracking_) return fail(Status::NoBeacon);
  if (gts_request_) return fail(Status::Denied);

  gts_request_ = GtsRequestState{c};
  Frame f = make_frame(FrameType::Command, pib_.pan_id, std::monostate{}, pib_.short_address, true);
  f.command = CommandId::GtsRequest;
  f.payload = {encode_gts_characteristics(c)};
  f.sequence_number = next_dsn();
  enqueue(Outgoing{.frame = std::move(f), .purpose = Purpose::GtsRequest, .gts_request = c});
}

void Mac::finish_gts_request(Status status) {
  if (!gts_request_) return;
  MlmeGtsConfirm conf{gts_request_->characteristics, status};
  gts_request_.reset();
  trace("MLME-GTS.confirm", "status=" + std::string(to_string(status)));
  notify("gts_confirm", [conf](MacUser& u) { u.mlme_gts_confirm(conf); });
}

void Mac::handle_gts_request(const Frame& f) {
  const auto* device = std::get_if<ShortAddress>(&f.src);
  if (!device || f.payload.empty()) return;
  const GtsCharacteristics c = decode_gts_characteristics(f.payload[0]);
  if (!c.allocate) {
    if (gts_table_.deallocate(*device, c.direction)) {
      trace("GTS_DEALLOC", "dev=" + to_string(*device));
      MlmeGtsIndication ind{*device, c};
      notify("gts_indication", [ind](MacUser& u) { u.mlme_gts_indication(ind); });
    }
    return;
  }
  std::optional<GtsDescriptor> d;
  if (pib_.gts_permit && beacon_enabled()) d = gts_table_.allocate(*device, c.length, c.direction);
  if (!d) {
    trace("GTS_DENY", "dev=" + to_string(*device) + " len=" + std::to_string(c.length));
    denials_.push_back(DenialNotice{GtsField{*device, 0, c.length, c.direction}});
    return;
  }
  trace("GTS_ALLOC", "dev=" + to_string(*device) + " start=" + std::to_string(d->starting_slot) +
                         " len=" + std::to_string(d->length) +
                         " dir=" + (d->direction == GtsDirection::Transmit ? "tx" : "rx"));
  MlmeGtsIndication ind{*device, c};
  notify("gts_indication", [ind](MacUser& u) { u.mlme_gts_indication(ind); });
}

void Mac::process_gts_fields(const BeaconFields& fields) {
  if (pib_.short_address.value >= 0xFFFE) return;
  std::vector<GtsDescriptor> mine;
  bool denied = false;
  bool granted = false;
  for (const auto& g : fields.gts) {
    if (g.device != pib_.short_address) continue;
    const bool requested_dir = gts_request_ && gts_request_->characteristics.direction == g.direction;
    if (g.starting_slot == 0) {
      denied = denied || requested_dir;
      continue;
    }
    mine.push_back(GtsDescriptor{g.device, g.starting_slot, g.length, g.direction});
    granted = granted || (requested_dir && gts_request_->characteristics.allocate);
  }
  own_gts_ = std::move(mine);
  if (!gts_request_ || !gts_request_->acknowledged) return;
  if (granted) {
    finish_gts_request(Status::Success);
  } else if (denied) {
    finish_gts_request(Status::Denied);
  } else if (++gts_request_->beacons_seen >= kGtsDescPersistence) {
    finish_gts_request(Status::NoData);
  }
}

std::vector<Mac::GtsWindow> Mac::gts_windows() const {
  std::vector<GtsWindow> out;
  if (!sf_) return out;
  if (coordinator_) {
    for (const auto& d : gts_table_.descriptors()) {
      if (d.direction == GtsDirection::Receive)
        out.push_back({sf_->slot_start(d.starting_slot), sf_->slot_start(d.end_slot()), d.device});
    }
  } else {
    for (const auto& d : own_gts_) {
      if (d.direction == GtsDirection::Transmit)
        out.push_back({sf_->slot_start(d.starting_slot), sf_->slot_start(d.end_slot()), coordinator_address()});
    }
  }
  return out;
}

void Mac::open_gts_window(const GtsWindow& window) {
  gts_window_ = window;
  counters_.gts_window_us += (window.end - window.begin).us();
  const SimTime end = window.end;
  at(end, "gts_close", [this, end] {
    if (gts_window_ && gts_window_->end == end) gts_window_.reset();
  });
  service_gts();
}

void Mac::service_gts() {
  if (!gts_window_ || (ack_wait_ && ack_wait_->gts)) return;
  if (std::any_of(jobs_.begin(), jobs_.end(), [](const RadioJob& j) { return j.gts; })) return;
  const auto matches = [this](const Outgoing& o) { return !coordinator_ || o.frame.dst == gts_window_->peer; };
  if (!gts_current_) {
    const auto it = std::find_if(gts_queue_.begin(), gts_queue_.end(), matches);
    if (it == gts_queue_.end()) return;
    gts_current_ = std::move(*it);
    gts_queue_.erase(it);
  } else if (!matches(*gts_current_)) {
    return;
  }
  const SimTime now = scheduler_.now();
  const SimTime tx_at = std::max(gts_window_->begin, now + timing().turnaround());
  if (tx_at + transaction_time(*gts_current_) > gts_window_->end) return;  // next superframe
  push_job(RadioJob{JobKind::Frame, gts_current_->psdu, tx_at, true});
}

void Mac::complete_gts(Status status) {
  if (!gts_current_) return;
  Outgoing out = std::move(*gts_current_);
  gts_current_.reset();
  dispatch_result(out, status, false);
  at(scheduler_.now() + ifs_after(out.psdu.size()), "gts_next", [this] { service_gts(); });
}

}  // namespace lrwpan
