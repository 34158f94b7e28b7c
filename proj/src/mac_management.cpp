// PAN start, association, polling, indirect transactions and channel scans.
#include <algorithm>
#include <string>

#include "lrwpan/mac.hpp"

namespace lrwpan {

void Mac::mlme_start_request(const MlmeStartRequest& req) {
  trace("MLME-START.request", "pan=" + std::to_string(req.pan_id) + " ch=" + std::to_string(req.channel) +
                                  " bo=" + std::to_string(req.beacon_order) +
                                  " so=" + std::to_string(req.superframe_order));
  Status s = Status::Success;
  if (pib_.short_address.value == 0xFFFF) {
    s = Status::NoShortAddress;
  } else if (req.beacon_order > 15 || req.superframe_order > 15 ||
             (req.beacon_order < 15 && req.superframe_order > req.beacon_order)) {
    s = Status::InvalidParameter;
  } else if (phy_.plme_set(PibAttribute::phyCurrentChannel, std::int64_t{req.channel}) != Status::Success) {
    s = Status::InvalidParameter;
  }
  if (s == Status::Success) {
    coordinator_ = true;
    pan_coordinator_ = req.pan_coordinator;
    csma_.set_timing(timing());
    pib_.pan_id = req.pan_id;
    pib_.beacon_order = req.beacon_order;
    pib_.superframe_order = req.beacon_order == 15 ? 15 : req.superframe_order;
    pib_.batt_life_ext = req.battery_life_extension;
    gts_table_.set_superframe_order(pib_.superframe_order);
    if (beacon_enabled()) schedule_beacon(scheduler_.now() + timing().turnaround());
    restore_radio();
  }
  trace("MLME-START.confirm", "status=" + std::string(to_string(s)));
  notify("start_confirm", [s](MacUser& u) { u.mlme_start_confirm(s); });
}

// --- association -------------------------------------------------------------------

void Mac::mlme_associate_request(const MlmeAssociateRequest& req) {
  trace("MLME-ASSOCIATE.request", "coord=" + to_string(req.coord_address) + " pan=" + std::to_string(req.coord_pan) +
                                      " ch=" + std::to_string(req.channel));
  if (association_ || phy_.plme_set(PibAttribute::phyCurrentChannel, std::int64_t{req.channel}) != Status::Success ||
      std::holds_alternative<std::monostate>(req.coord_address)) {
    trace("MLME-ASSOCIATE.confirm", "status=INVALID_PARAMETER");
    MlmeAssociateConfirm c{Status::InvalidParameter, ShortAddress{0xFFFF}};
    notify("associate_confirm", [c](MacUser& u) { u.mlme_associate_confirm(c); });
    return;
  }
  csma_.set_timing(timing());
  pib_.pan_id = req.coord_pan;
  if (const auto* s = std::get_if<ShortAddress>(&req.coord_address)) pib_.coord_short_address = *s;
  if (const auto* e = std::get_if<ExtAddress>(&req.coord_address)) pib_.coord_extended_address = *e;
  pib_.beacon_order = req.beacon_order;
  pib_.superframe_order = req.beacon_order == 15 ? 15 : req.superframe_order;
  association_ = AssociationState{req};
  if (beacon_enabled() && !tracking_) mlme_sync_request(true);

  Frame f = make_frame(FrameType::Command, req.coord_pan, req.coord_address, pib_.extended_address, true);
  f.control.pan_id_compression = false;
  f.src_pan = kBroadcastPan;
  f.command = CommandId::AssociationRequest;
  f.payload = {encode_capability(req.capability)};
  f.sequence_number = next_dsn();
  enqueue(Outgoing{.frame = std::move(f), .purpose = Purpose::AssociationRequest});
}

void Mac::finish_association(Status status, ShortAddress addr) {
  if (!association_) return;
  scheduler_.cancel(association_->timer);
  association_.reset();
  trace("MLME-ASSOCIATE.confirm", "status=" + std::string(to_string(status)) + " short=" + to_string(addr));
  MlmeAssociateConfirm c{status, addr};
  notify("associate_confirm", [c](MacUser& u) { u.mlme_associate_confirm(c); });
}

ShortAddress Mac::allocate_short(ExtAddress device) {
  if (const auto it = allocated_.find(device); it != allocated_.end()) return it->second;
  while (next_short_ < 0xFFFE) {
    const ShortAddress candidate{next_short_++};
    if (candidate == pib_.short_address) continue;
    const bool used = std::any_of(allocated_.begin(), allocated_.end(),
                                  [candidate](const auto& kv) { return kv.second == candidate; });
    if (used) continue;
    allocated_[device] = candidate;
    return candidate;
  }
  return ShortAddress{0xFFFF};
}

void Mac::handle_association_request(const Frame& f) {
  const auto* device = std::get_if<ExtAddress>(&f.src);
  if (!device || f.payload.empty()) return;
  const CapabilityInfo cap = decode_capability(f.payload[0]);
  trace("MLME-ASSOCIATE.indication", "device=" + to_string(*device));
  MlmeAssociateIndication ind{*device, cap};
  notify("associate_indication", [ind](MacUser& u) { u.mlme_associate_indication(ind); });

  AssociationResponse r;
  if (!pib_.association_permit) {
    r = {ShortAddress{0xFFFF}, AssociationStatus::PanAccessDenied};
  } else if (!cap.allocate_address) {
    r = {ShortAddress::unassigned(), AssociationStatus::Success};
  } else {
    const ShortAddress a = allocate_short(*device);
    r = a.value == 0xFFFF ? AssociationResponse{a, AssociationStatus::PanAtCapacity}
                          : AssociationResponse{a, AssociationStatus::Success};
  }

  Frame resp = make_frame(FrameType::Command, pib_.pan_id, *device, pib_.extended_address, true);
  resp.command = CommandId::AssociationResponse;
  resp.payload = encode_association_response(r);
  resp.sequence_number = next_dsn();
  const Status s = queue_indirect(std::move(resp), IndirectKind::AssociationResponse, 0);
  if (s != Status::Success) {
    trace("MLME-COMM-STATUS.indication", "status=" + std::string(to_string(s)));
    MlmeCommStatus cs{pib_.pan_id, pib_.extended_address, *device, s};
    notify("comm_status", [cs](MacUser& u) { u.mlme_comm_status_indication(cs); });
  }
}

void Mac::handle_association_response(const Frame& f) {
  if (!association_ || f.payload.size() < 3) return;
  const AssociationResponse r = decode_association_response(f.payload);
  Status s = Status::Success;
  if (r.status == AssociationStatus::PanAtCapacity) s = Status::PanAtCapacity;
  if (r.status == AssociationStatus::PanAccessDenied) s = Status::PanAccessDenied;
  if (s == Status::Success) {
    pib_.short_address = r.short_address;
    if (const auto* e = std::get_if<ExtAddress>(&f.src)) pib_.coord_extended_address = *e;
  }
  finish_association(s, s == Status::Success ? r.short_address : ShortAddress{0xFFFF});
  if (poll_ && poll_->waiting_data) poll_done(Status::Success);
}

// --- polling -------------------------------------------------------------------------

void Mac::mlme_poll_request() {
  trace("MLME-POLL.request");
  start_poll(true);
}

void Mac::start_poll(bool requested) {
  if (poll_) {
    poll_->requested = poll_->requested || requested;
    return;
  }
  if (association_ && !requested) association_->polled = true;
  poll_ = PollState{requested};
  const MacAddress coord = coordinator_address();
  if (std::holds_alternative<ExtAddress>(coord) && std::get<ExtAddress>(coord).value == 0) {
    poll_done(Status::InvalidParameter);
    return;
  }
  Frame f = make_frame(FrameType::Command, pib_.pan_id, coord, own_address(), true);
  f.command = CommandId::DataRequest;
  f.sequence_number = next_dsn();
  enqueue(Outgoing{.frame = std::move(f), .purpose = Purpose::DataRequest});
}

void Mac::poll_done(Status status) {
  if (!poll_) return;
  scheduler_.cancel(poll_->timer);
  const bool requested = poll_->requested;
  poll_.reset();
  trace("POLL_DONE", "status=" + std::string(to_string(status)));
  if (requested) {
    trace("MLME-POLL.confirm", "status=" + std::string(to_string(status)));
    notify("poll_confirm", [status](MacUser& u) { u.mlme_poll_confirm(status); });
  }
  if (association_ && association_->polled && status != Status::Success) finish_association(status, ShortAddress{0xFFFF});
  restore_radio();
}

// --- indirect transactions -------------------------------------------------------------

SimTime Mac::unit_period() const {
  return symbols(beacon_enabled() ? beacon_interval_symbols(pib_.beacon_order) : kBaseSuperframeSymbols);
}

Status Mac::queue_indirect(Frame frame, IndirectKind kind, std::uint8_t handle) {
  if (indirect_.full()) {
    trace("INDIRECT_OVERFLOW", "dst=" + to_string(frame.dst));
    return Status::TransactionOverflow;
  }
  const SimTime now = scheduler_.now();
  IndirectEntry e;
  e.destination = frame.dst;
  e.frame = std::move(frame);
  e.kind = kind;
  e.msdu_handle = handle;
  e.enqueued = now;
  e.expiry = now + unit_period() * pib_.transaction_persistence_time;
  const auto id = indirect_.push(std::move(e));
  IndirectEntry* entry = indirect_.get(*id);
  entry->expiry_event = at(entry->expiry, "indirect_expiry", [this, id = *id] { on_indirect_expired(id); });
  trace("INDIRECT_QUEUE", "id=" + std::to_string(*id) + " dst=" + to_string(entry->destination) +
                              " expiry=" + std::to_string(entry->expiry.us()));
  return Status::Success;
}

IndirectEntry* Mac::pending_entry_for(const MacAddress& addr) {
  if (IndirectEntry* e = indirect_.next_for(addr)) return e;
  // A device may poll with either of its addresses.
  if (const auto* ext = std::get_if<ExtAddress>(&addr)) {
    if (const auto it = allocated_.find(*ext); it != allocated_.end()) return indirect_.next_for(it->second);
  }
  if (const auto* s = std::get_if<ShortAddress>(&addr)) {
    for (const auto& [ext, short_addr] : allocated_) {
      if (short_addr == *s) return indirect_.next_for(ext);
    }
  }
  return nullptr;
}

bool Mac::has_pending_for(const MacAddress& addr) const {
  return const_cast<Mac*>(this)->pending_entry_for(addr) != nullptr;
}

void Mac::handle_data_request(const Frame& f) {
  IndirectEntry* e = pending_entry_for(f.src);
  if (!e) {
    trace("NO_PENDING", "src=" + to_string(f.src));
    return;
  }
  e->in_flight = true;
  Frame frame = e->frame;
  frame.control.frame_pending = indirect_.count_for(e->destination) > 1;
  Outgoing out{.frame = std::move(frame), .purpose = Purpose::Indirect, .handle = e->msdu_handle, .indirect_id = e->id};
  enqueue(std::move(out), true);
}

void Mac::on_indirect_expired(std::uint64_t id) {
  IndirectEntry* e = indirect_.get(id);
  if (!e) return;
  if (e->in_flight) {
    e->expired = true;
    return;
  }
  finish_indirect(id, Status::TransactionExpired, scheduler_.now());
}

void Mac::finish_indirect(std::uint64_t id, Status status, SimTime timestamp) {
  IndirectEntry* e = indirect_.get(id);
  if (!e) return;
  if (status != Status::Success && status != Status::TransactionExpired) {
    e->in_flight = false;
    if (!e->expired) {
      trace("INDIRECT_RETAIN", "id=" + std::to_string(id) + " status=" + std::string(to_string(status)));
      return;
    }
    status = Status::TransactionExpired;
  }
  IndirectEntry entry = *indirect_.remove(id);
  scheduler_.cancel(entry.expiry_event);
  if (status == Status::TransactionExpired) {
    ++counters_.indirect_expired;
    trace("INDIRECT_EXPIRE", "id=" + std::to_string(id) + " dst=" + to_string(entry.destination));
    timestamp = scheduler_.now();
  }
  if (entry.kind == IndirectKind::Msdu) {
    trace("MCPS-DATA.confirm", "handle=" + std::to_string(entry.msdu_handle) + " status=" + std::string(to_string(status)));
    McpsDataConfirm c{entry.msdu_handle, status, timestamp};
    notify("mcps_data_confirm", [c](MacUser& u) { u.mcps_data_confirm(c); });
  } else {
    trace("MLME-COMM-STATUS.indication", "dst=" + to_string(entry.destination) + " status=" + std::string(to_string(status)));
    MlmeCommStatus cs{pib_.pan_id, pib_.extended_address, entry.destination, status};
    notify("comm_status", [cs](MacUser& u) { u.mlme_comm_status_indication(cs); });
  }
}

void Mac::handle_beacon_request() {
  Frame f = beacon_frame();
  trace("BEACON_REPLY", "bsn=" + std::to_string(f.sequence_number));
  enqueue(Outgoing{.frame = std::move(f), .purpose = Purpose::BeaconReply});
}

// --- scans ---------------------------------------------------------------------------------

void Mac::mlme_scan_request(const MlmeScanRequest& req) {
  trace("MLME-SCAN.request", "type=" + std::string(to_string(req.type)) + " channels=" + std::to_string(req.channels) +
                                 " duration=" + std::to_string(req.duration));
  const auto fail = [&](Status s) {
    trace("MLME-SCAN.confirm", "status=" + std::string(to_string(s)));
    MlmeScanConfirm c;
    c.status = s;
    c.type = req.type;
    c.unscanned = req.channels;
    notify("scan_confirm", [c](MacUser& u) { u.mlme_scan_confirm(c); });
  };
  if (scan_) return fail(Status::ScanInProgress);
  if (req.duration > 14) return fail(Status::InvalidParameter);

  ScanState s;
  s.request = req;
  for (std::uint8_t ch = 0; ch <= 26; ++ch) {
    const std::uint32_t bit = 1u << ch;
    if ((req.channels & bit) && (phy_.pib().channels_supported & bit)) s.channels.push_back(ch);
  }
  s.saved_pan = pib_.pan_id;
  s.saved_channel = phy_.pib().current_channel;
  s.result.type = req.type;
  scan_ = std::move(s);
  if (req.type != ScanType::Ed) pib_.pan_id = kBroadcastPan;
  scan_next_channel();
}

void Mac::scan_next_channel() {
  if (scan_->index >= scan_->channels.size()) {
    finish_scan();
    return;
  }
  const std::uint8_t ch = scan_->channels[scan_->index];
  phy_.plme_set(PibAttribute::phyCurrentChannel, std::int64_t{ch});
  csma_.set_timing(timing());
  scan_->channel_end = scheduler_.now() + symbols(scan_dwell_symbols(scan_->request.duration));
  scan_->max_level = 0;
  trace("SCAN_CHANNEL", "ch=" + std::to_string(ch) + " phase=begin");
  restore_radio();
  switch (scan_->request.type) {
    case ScanType::Ed:
      ed_next();
      return;
    case ScanType::Active: {
      Frame f = make_frame(FrameType::Command, kBroadcastPan, ShortAddress::broadcast(), std::monostate{}, false);
      f.command = CommandId::BeaconRequest;
      f.sequence_number = next_dsn();
      enqueue(Outgoing{.frame = std::move(f), .purpose = Purpose::BeaconRequest}, true);
      break;
    }
    case ScanType::Passive:
      break;
  }
  scan_->timer = at(scan_->channel_end, "scan_dwell", [this] { scan_end_channel(); });
}

void Mac::ed_next() {
  if (scheduler_.now() + timing().cca_window() > scan_->channel_end) {
    scan_->timer = at(scan_->channel_end, "scan_dwell", [this] { scan_end_channel(); });
    return;
  }
  phy_.plme_ed_request();
}

void Mac::plme_ed_confirm(Status status, std::uint8_t level) {
  if (!scan_ || scan_->request.type != ScanType::Ed) return;
  if (status == Status::Success) {
    scan_->max_level = std::max(scan_->max_level, level);
  } else {
    restore_radio();
  }
  if (scheduler_.now() >= scan_->channel_end) {
    scan_end_channel();
  } else {
    ed_next();
  }
}

void Mac::plme_cca_confirm(Status status) { csma_.on_cca_confirm(status); }

void Mac::scan_end_channel() {
  if (!scan_) return;
  scheduler_.cancel(scan_->timer);
  const std::uint8_t ch = scan_->channels[scan_->index];
  std::string details = "ch=" + std::to_string(ch) + " phase=end";
  if (scan_->request.type == ScanType::Ed) {
    scan_->result.energy.emplace_back(ch, scan_->max_level);
    details += " level=" + std::to_string(scan_->max_level);
  }
  trace("SCAN_CHANNEL", details);
  if (current_ && current_->purpose == Purpose::BeaconRequest && csma_.active()) {
    csma_.cancel();
    complete_cap(Status::ChannelAccessFailure, false);
  }
  ++scan_->index;
  scan_next_channel();
}

void Mac::scan_collect(const Frame& f, const PdDataIndication& ind) {
  BeaconFields fields;
  try {
    fields = decode_beacon_fields(f.payload);
  } catch (const FrameError&) {
    return;
  }
  const PanDescriptor pd = make_pan_descriptor(f, fields, ind);
  auto& list = scan_->result.pan_descriptors;
  const bool seen = std::any_of(list.begin(), list.end(), [&](const PanDescriptor& p) {
    return p.coord_address == pd.coord_address && p.coord_pan_id == pd.coord_pan_id &&
           p.logical_channel == pd.logical_channel;
  });
  if (!seen) {
    trace("PAN_FOUND", "pan=" + std::to_string(pd.coord_pan_id) + " coord=" + to_string(pd.coord_address) +
                           " ch=" + std::to_string(pd.logical_channel));
    list.push_back(pd);
  }
}

void Mac::finish_scan() {
  MlmeScanConfirm result = std::move(scan_->result);
  pib_.pan_id = scan_->saved_pan;
  phy_.plme_set(PibAttribute::phyCurrentChannel, std::int64_t{scan_->saved_channel});
  csma_.set_timing(timing());
  scan_.reset();
  result.status = Status::Success;
  trace("MLME-SCAN.confirm", "status=SUCCESS type=" + std::string(to_string(result.type)) +
                                 " results=" + std::to_string(result.type == ScanType::Ed ? result.energy.size()
                                                                                          : result.pan_descriptors.size()));
  notify("scan_confirm", [result = std::move(result)](MacUser& u) { u.mlme_scan_confirm(result); });
  restore_radio();
  service_cap();
}

}  // namespace lrwpan
