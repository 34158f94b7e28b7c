#include "lrwpan/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lrwpan {

namespace {

constexpr std::uint64_t kExtAddressBase = 0xACDE480000000000ULL;
constexpr SimTime kJoinRetry = SimTime::from_ms(1000);
constexpr unsigned kMaxGtsAttempts = 8;

std::uint16_t default_short(const NodeConfig& n) {
  if (n.short_address) return *n.short_address;
  return n.role == NodeRole::Coordinator ? 0x0000 : static_cast<std::uint16_t>(n.id);
}

}  // namespace

Bytes traffic_payload(NodeId source, std::uint32_t seq, std::size_t size) {
  Bytes out(size);
  for (std::size_t i = 0; i < size; ++i) {
    if (i < 4) {
      out[i] = static_cast<std::uint8_t>(seq >> (8 * i));
    } else {
      out[i] = static_cast<std::uint8_t>(splitmix64((std::uint64_t{source} << 32 | seq) + i));
    }
  }
  return out;
}

// --- Node ------------------------------------------------------------------------

Node::Node(Simulation& sim, const NodeConfig& config)
    : sim_(sim),
      config_(config),
      phy_(config.id, sim.scheduler_, sim.medium_, &sim.trace_,
           PhyConfig{sim.scenario_.global.sensitivity_dbm, sim.scenario_.global.cca_threshold_dbm}, config.position),
      mac_(config.id, sim.scheduler_, phy_, sim.seed_, &sim.trace_),
      sscs_(mac_),
      traffic_rng_(sim.seed_, config.id, RngPurpose::Traffic) {
  mac_.set_user(this);
}

ExtAddress Node::ext_address() const { return ExtAddress{kExtAddressBase + config_.id}; }

MacAddress Node::address() const {
  const auto s = mac_.pib().short_address;
  if (s.value < 0xFFFE) return s;
  return ext_address();
}

bool Node::owns(const MacAddress& a) const {
  if (const auto* e = std::get_if<ExtAddress>(&a)) return *e == ext_address();
  if (const auto* s = std::get_if<ShortAddress>(&a)) return s->value < 0xFFFE && *s == mac_.pib().short_address;
  return false;
}

void Node::trace(std::string_view event, std::string details) {
  sim_.trace_.record(sim_.scheduler_.now(), id(), Layer::App, event, std::move(details));
}

void Node::load_pib() {
  const auto& g = sim_.scenario_.global;
  const auto& pan = sim_.scenario_.pan;
  phy_.plme_set(PibAttribute::phyCurrentChannel, std::int64_t{pan.channel});
  phy_.plme_set(PibAttribute::phyTransmitPower, static_cast<std::int64_t>(std::lround(g.tx_power_dbm)));

  MacPib& pib = mac_.pib();
  pib.extended_address = ext_address();
  pib.rx_on_when_idle = config_.pib.rx_on_when_idle.value_or(true);
  if (config_.pib.min_be) pib.min_be = *config_.pib.min_be;
  if (config_.pib.max_be) pib.max_be = *config_.pib.max_be;
  if (config_.pib.max_csma_backoffs) pib.max_csma_backoffs = *config_.pib.max_csma_backoffs;
  if (config_.pib.max_frame_retries) pib.max_frame_retries = *config_.pib.max_frame_retries;
  if (config_.pib.transaction_persistence_time)
    pib.transaction_persistence_time = *config_.pib.transaction_persistence_time;
  if (config_.pib.auto_request) pib.auto_request = *config_.pib.auto_request;
  if (config_.pib.battery_life_extension) pib.batt_life_ext = *config_.pib.battery_life_extension;

  if (config_.role == NodeRole::Coordinator) {
    pib.short_address = ShortAddress{default_short(config_)};
    pib.association_permit = pan.association_permit;
    pib.gts_permit = pan.gts_permit;
  } else if (config_.join == JoinMode::Static) {
    const NodeConfig& coord = sim_.scenario_.coordinator();
    pib.short_address = ShortAddress{default_short(config_)};
    pib.pan_id = pan.pan_id;
    pib.coord_short_address = ShortAddress{default_short(coord)};
    pib.coord_extended_address = ExtAddress{kExtAddressBase + coord.id};
    pib.beacon_order = pan.beacon_order;
    pib.superframe_order = pan.superframe_order;
  }
}

void Node::start_timers() {
  const auto& pan = sim_.scenario_.pan;
  if (config_.role == NodeRole::Coordinator) {
    MlmeStartRequest req;
    req.pan_id = pan.pan_id;
    req.channel = pan.channel;
    req.beacon_order = pan.beacon_order;
    req.superframe_order = pan.superframe_order;
    req.battery_life_extension = mac_.pib().batt_life_ext;
    mac_.mlme_start_request(req);
    joined_ = true;
    return;
  }
  if (config_.join == JoinMode::Associate) {
    begin_join();
    return;
  }
  joined_ = true;
  if (pan.beacon_order < 15) mac_.mlme_sync_request(true);
  if (config_.gts_slots > 0) request_gts(0);
  schedule_poll();
}

void Node::enter_rx() { mac_.mlme_set(PibAttribute::macRxOnWhenIdle, mac_.pib().rx_on_when_idle); }

void Node::start_traffic() {
  for (const auto& spec : sim_.scenario_.traffic) {
    if (spec.node != id()) continue;
    sources_.push_back(Source{&spec});
    if (const auto first = traffic_first(spec.config)) send_next(sources_.size() - 1, *first);
  }
}

void Node::send_next(std::size_t index, SimTime when) {
  sim_.scheduler_.schedule_at(when, EventTag{id(), Layer::App, "traffic"}, [this, index, when] {
    Source& src = sources_[index];
    const TrafficSpec& spec = *src.spec;
    if (sim_.checking_ && (when < spec.config.start || when >= spec.config.stop))
      sim_.violation(when, "traffic '" + spec.name + "' emitted outside its window");

    if (!joined_) {
      trace("TRAFFIC_SKIP", "source=" + spec.name + " reason=not_joined");
    } else {
      MacAddress dst;
      switch (spec.destination.kind) {
        case Destination::Kind::Coordinator: {
          const auto& pib = mac_.pib();
          dst = pib.coord_short_address.value < 0xFFFE ? MacAddress{pib.coord_short_address}
                                                        : MacAddress{pib.coord_extended_address};
          if (config_.role == NodeRole::Coordinator) dst = address();
          break;
        }
        case Destination::Kind::Node:
          dst = sim_.node(spec.destination.node).address();
          break;
        case Destination::Kind::Broadcast:
          dst = ShortAddress::broadcast();
          break;
      }
      const std::uint32_t seq = src.next_seq++;
      Bytes bytes = traffic_payload(id(), seq, spec.config.payload_size);
      const std::uint8_t handle = next_handle_++;
      const std::uint16_t pan = sim_.scenario_.pan.pan_id;
      const Status s = spec.adapter == AdapterKind::Sscs
                           ? sscs_.data_request(AppPayload{pan, dst, std::move(bytes), spec.config.options}, handle)
                           : sscs_.llc_request(std::move(bytes), pan, dst, spec.config.options, handle);
      trace("APP_TX", "source=" + spec.name + " seq=" + std::to_string(seq) + " handle=" + std::to_string(handle) +
                          " status=" + std::string(to_string(s)));
      if (s == Status::Success) {
        in_flight_[handle] = {id(), seq};
        ++generated_;
        sim_.note_generated(id(), seq, when);
      } else {
        ++rejected_;
      }
    }
    if (const auto next = traffic_next(spec.config, when, traffic_rng_)) send_next(index, *next);
  });
}

void Node::begin_join() {
  const auto& pan = sim_.scenario_.pan;
  MlmeScanRequest req;
  req.type = config_.scan_type;
  req.channels = 1u << pan.channel;
  req.duration = config_.scan_duration.value_or(pan.beacon_order < 15 ? std::max<std::uint8_t>(pan.beacon_order, 3) : 3);
  mac_.mlme_scan_request(req);
}

void Node::mlme_scan_confirm(const MlmeScanConfirm& c) {
  if (config_.join != JoinMode::Associate || joined_ || c.type == ScanType::Ed) return;
  const auto& pan = sim_.scenario_.pan;
  const auto it = std::find_if(c.pan_descriptors.begin(), c.pan_descriptors.end(),
                               [&](const PanDescriptor& d) { return d.coord_pan_id == pan.pan_id; });
  if (it == c.pan_descriptors.end()) {
    trace("JOIN_RETRY", "reason=no_pan");
    sim_.scheduler_.schedule_in(kJoinRetry, EventTag{id(), Layer::App, "join_retry"}, [this] { begin_join(); });
    return;
  }
  MlmeAssociateRequest req;
  req.channel = it->logical_channel;
  req.coord_pan = it->coord_pan_id;
  req.coord_address = it->coord_address;
  req.capability.rx_on_when_idle = mac_.pib().rx_on_when_idle;
  req.capability.allocate_address = true;
  req.beacon_order = it->superframe.beacon_order;
  req.superframe_order = it->superframe.superframe_order;
  mac_.mlme_associate_request(req);
}

void Node::mlme_associate_confirm(const MlmeAssociateConfirm& c) {
  if (c.status != Status::Success) {
    trace("JOIN_RETRY", "reason=" + std::string(to_string(c.status)));
    sim_.scheduler_.schedule_in(kJoinRetry, EventTag{id(), Layer::App, "join_retry"}, [this] { begin_join(); });
    return;
  }
  joined_ = true;
  trace("JOINED", "short=" + to_string(MacAddress{c.short_address}));
  if (config_.gts_slots > 0) request_gts(0);
  schedule_poll();
}

void Node::mlme_start_confirm(Status status) {
  if (status != Status::Success) trace("START_FAILED", "status=" + std::string(to_string(status)));
}

void Node::request_gts(unsigned attempt) {
  const auto& pan = sim_.scenario_.pan;
  const SimTime wait = SimTime{phy_.timing().symbols(beacon_interval_symbols(pan.beacon_order)).us() * 2};
  gts_attempts_ = attempt;
  sim_.scheduler_.schedule_in(wait, EventTag{id(), Layer::App, "gts_request"}, [this] {
    if (!mac_.tracking()) {
      if (gts_attempts_ + 1 < kMaxGtsAttempts) request_gts(gts_attempts_ + 1);
      return;
    }
    mac_.mlme_gts_request(GtsCharacteristics{config_.gts_slots, config_.gts_direction, true});
  });
}

void Node::mlme_gts_confirm(const MlmeGtsConfirm& c) {
  trace("GTS_RESULT", "status=" + std::string(to_string(c.status)));
  const bool transient = c.status == Status::NoBeacon || c.status == Status::NoData ||
                         c.status == Status::ChannelAccessFailure || c.status == Status::NoAck;
  if (transient && c.characteristics.allocate && gts_attempts_ + 1 < kMaxGtsAttempts) request_gts(gts_attempts_ + 1);
}

void Node::mlme_sync_loss_indication(Status) {
  // Keep trying to find the coordinator.
  if (joined_ && config_.role == NodeRole::Device) mac_.mlme_sync_request(true);
}

void Node::schedule_poll() {
  if (config_.poll_interval == SimTime{}) return;
  sim_.scheduler_.schedule_in(config_.poll_interval, EventTag{id(), Layer::App, "poll"}, [this] {
    if (joined_) mac_.mlme_poll_request();
    schedule_poll();
  });
}

void Node::mcps_data_confirm(const McpsDataConfirm& c) {
  if (c.status == Status::Success) ++confirmed_;
  in_flight_.erase(c.handle);
  sscs_.relay_confirm(c);
}

void Node::mcps_data_indication(const McpsDataIndication& ind) { sim_.note_received(*this, ind); }

// --- Simulation --------------------------------------------------------------------

Simulation::Simulation(Scenario scenario, std::optional<std::uint64_t> seed)
    : scenario_(std::move(scenario)),
      seed_(seed.value_or(scenario_.global.seed)),
      medium_(scheduler_, PathLossModel{scenario_.global.reference_loss_db, scenario_.global.path_loss_exponent, 1.0}) {
  medium_.set_observer(this);
  trace_.set_listener([this](const TraceLine& line) { on_trace_line(line); });

  // Initialisation stages: radios register on the medium, PIBs are loaded,
  // protocol timers start, receivers come up, then traffic starts.
  for (const auto& cfg : scenario_.nodes) {
    nodes_.push_back(std::make_unique<Node>(*this, cfg));
    by_id_[cfg.id] = nodes_.back().get();
  }
  for (auto& n : nodes_) n->load_pib();
  for (auto& n : nodes_) n->start_timers();
  for (auto& n : nodes_) n->enter_rx();
  for (auto& n : nodes_) n->start_traffic();
}

Simulation::~Simulation() { medium_.set_observer(nullptr); }

void Simulation::run() { run_until(scenario_.global.duration); }

void Simulation::run_until(SimTime t) { scheduler_.run(t); }

Node& Simulation::node(NodeId id) {
  const auto it = by_id_.find(id);
  if (it == by_id_.end()) throw std::out_of_range("no node " + std::to_string(id));
  return *it->second;
}

Node& Simulation::coordinator() { return node(scenario_.coordinator().id); }

Node* Simulation::owner_of(const MacAddress& a) {
  for (auto& n : nodes_) {
    if (n->owns(a)) return n.get();
  }
  return nullptr;
}

void Simulation::on_transmission_start(const Transmission& tx) {
  ++tx_count_[tx.source];
  capture_.push_back(CaptureRecord{tx.start, tx.psdu});
}

void Simulation::on_transmission_outcome(const Transmission& tx, NodeId receiver, ReceiveOutcome outcome) {
  LinkCount& c = links_[{tx.source, receiver}];
  switch (outcome) {
    case ReceiveOutcome::Delivered:
      ++c.delivered;
      break;
    case ReceiveOutcome::Collided:
      ++c.collided;
      break;
    case ReceiveOutcome::BelowSensitivity:
      ++c.below;
      break;
  }
}

void Simulation::note_generated(NodeId src, std::uint32_t seq, SimTime at) { generated_[{src, seq}] = {at, false}; }

void Simulation::note_received(Node& receiver, const McpsDataIndication& ind) {
  ++received_[receiver.id()];
  const Node* sender = owner_of(ind.src);
  if (!sender || ind.msdu.size() < 4) return;
  std::uint32_t seq = 0;
  for (int i = 0; i < 4; ++i) seq |= std::uint32_t{ind.msdu[i]} << (8 * i);
  if (checking_ && ind.msdu != traffic_payload(sender->id(), seq, ind.msdu.size()))
    violation(scheduler_.now(), "payload from node " + std::to_string(sender->id()) + " seq " + std::to_string(seq) +
                                    " altered in transit");
  const auto it = generated_.find({sender->id(), seq});
  if (it == generated_.end() || it->second.delivered) return;
  it->second.delivered = true;
  latencies_[sender->id()].push_back((scheduler_.now() - it->second.at).us());
}

void Simulation::violation(SimTime at, std::string what) {
  violations_.push_back("t=" + std::to_string(at.us()) + "us: " + std::move(what));
}

void Simulation::on_trace_line(const TraceLine& line) {
  if (!checking_) return;
  if (line.time < last_trace_time_) violation(line.time, "trace time went backwards");
  last_trace_time_ = line.time;
  if (scenario_.pan.beacon_order == 15) return;
  if (line.layer == Layer::Phy && (line.event == "TX_START" || line.event == "CCA_START")) check_slotted(line);
  if (line.layer == Layer::Mac && line.event == "FRAME_TX" && trace_field(line.details, "gts") == "1") check_gts(line);
}

void Simulation::check_slotted(const TraceLine& line) {
  Node& n = node(line.node);
  if (n.mac().scanning()) return;
  const auto sf = coordinator().mac().superframe();
  if (!sf || line.time < sf->start || line.time >= sf->cap_end()) return;
  const SimTime unit = sf->backoff();
  if ((line.time - sf->start) % unit != SimTime{})
    violation(line.time, "node " + std::to_string(line.node) + " " + line.event + " off the backoff grid (offset " +
                             std::to_string((line.time - sf->start).us()) + "us)");
}

void Simulation::check_gts(const TraceLine& line) {
  Node& coord = coordinator();
  const auto sf = coord.mac().superframe();
  const auto field_u64 = [&](std::string_view key) { return std::stoull(std::string(trace_field(line.details, key))); };
  const SimTime begin{field_u64("tx_start")};
  const SimTime end = begin + node(line.node).phy().timing().airtime(static_cast<std::uint32_t>(field_u64("len")));
  bool inside = false;
  if (sf) {
    for (const auto& d : coord.mac().gts_table().descriptors()) {
      const bool owner = line.node == coord.id() ? d.direction == GtsDirection::Receive
                                                 : d.direction == GtsDirection::Transmit &&
                                                       node(line.node).owns(MacAddress{d.device});
      if (owner && begin >= sf->slot_start(d.starting_slot) && end <= sf->slot_start(d.end_slot())) inside = true;
    }
  }
  if (!inside)
    violation(line.time, "node " + std::to_string(line.node) + " GTS frame [" + std::to_string(begin.us()) + ", " +
                             std::to_string(end.us()) + ") outside its slots");
}

std::vector<std::string> Simulation::violations() const {
  std::vector<std::string> out = violations_;
  for (const auto& l : stats().links) {
    if (!l.accounting_holds())
      out.push_back("link " + std::to_string(l.from) + "->" + std::to_string(l.to) + " outcomes exceed transmissions");
  }
  if (trace_.size() != trace_.recorded()) out.push_back("trace lost records");
  return out;
}

RunStats Simulation::stats() const {
  RunStats rs;
  rs.seed = seed_;
  rs.end = scheduler_.now();
  rs.events = scheduler_.delivered();
  rs.trace_lines = trace_.recorded();

  std::vector<std::uint64_t> all_latencies;
  for (const auto& np : nodes_) {
    const Node& n = *np;
    const MacCounters& mc = n.mac().counters();
    NodeStats s;
    s.id = n.id();
    if (const auto it = tx_count_.find(n.id()); it != tx_count_.end()) s.frames_sent = it->second;
    for (const auto& [key, c] : links_) {
      if (key.second != n.id()) continue;
      s.frames_received += c.delivered;
      s.frames_collided += c.collided;
      s.below_sensitivity += c.below;
    }
    s.acks_sent = mc.acks_sent;
    s.acks_received = mc.acks_received;
    s.retries = mc.retries;
    s.csma_failures = mc.csma_failures;
    s.no_ack = mc.no_ack;
    s.msdu_generated = n.generated_;
    s.msdu_rejected = n.rejected_;
    s.msdu_confirmed = n.confirmed_;
    for (const auto& [key, g] : generated_) {
      if (key.first == n.id() && g.delivered) ++s.msdu_delivered;
    }
    if (const auto it = received_.find(n.id()); it != received_.end()) s.msdu_received = it->second;
    s.delivery_ratio = s.msdu_generated ? static_cast<double>(s.msdu_delivered) / s.msdu_generated : 0.0;
    if (const auto it = latencies_.find(n.id()); it != latencies_.end() && !it->second.empty()) {
      const auto& v = it->second;
      s.latency.count = v.size();
      s.latency.min_us = *std::min_element(v.begin(), v.end());
      s.latency.max_us = *std::max_element(v.begin(), v.end());
      s.latency.mean_us = static_cast<double>(std::accumulate(v.begin(), v.end(), std::uint64_t{0})) / v.size();
      all_latencies.insert(all_latencies.end(), v.begin(), v.end());
    }
    s.beacons_sent = mc.beacons_sent;
    s.beacons_received = mc.beacons_received;
    s.beacons_missed = mc.beacons_missed;
    s.gts_frames = mc.gts_frames_sent;
    s.gts_utilization = mc.gts_window_us ? static_cast<double>(mc.gts_airtime_us) / mc.gts_window_us : 0.0;
    rs.nodes.push_back(s);
  }

  for (const auto& from : nodes_) {
    for (const auto& to : nodes_) {
      if (from == to) continue;
      LinkStats l;
      l.from = from->id();
      l.to = to->id();
      if (const auto it = tx_count_.find(l.from); it != tx_count_.end()) l.sent = it->second;
      if (const auto it = links_.find({l.from, l.to}); it != links_.end()) {
        l.delivered = it->second.delivered;
        l.collided = it->second.collided;
        l.below_sensitivity = it->second.below;
      }
      rs.links.push_back(l);
    }
  }

  NodeStats& t = rs.aggregate;
  std::uint64_t gts_air = 0;
  std::uint64_t gts_window = 0;
  for (const auto& s : rs.nodes) {
    t.frames_sent += s.frames_sent;
    t.frames_received += s.frames_received;
    t.frames_collided += s.frames_collided;
    t.below_sensitivity += s.below_sensitivity;
    t.acks_sent += s.acks_sent;
    t.acks_received += s.acks_received;
    t.retries += s.retries;
    t.csma_failures += s.csma_failures;
    t.no_ack += s.no_ack;
    t.msdu_generated += s.msdu_generated;
    t.msdu_rejected += s.msdu_rejected;
    t.msdu_confirmed += s.msdu_confirmed;
    t.msdu_delivered += s.msdu_delivered;
    t.msdu_received += s.msdu_received;
    t.beacons_sent += s.beacons_sent;
    t.beacons_received += s.beacons_received;
    t.beacons_missed += s.beacons_missed;
    t.gts_frames += s.gts_frames;
  }
  for (const auto& np : nodes_) {
    gts_air += np->mac().counters().gts_airtime_us;
    gts_window += np->mac().counters().gts_window_us;
  }
  t.delivery_ratio = t.msdu_generated ? static_cast<double>(t.msdu_delivered) / t.msdu_generated : 0.0;
  t.gts_utilization = gts_window ? static_cast<double>(gts_air) / gts_window : 0.0;
  if (!all_latencies.empty()) {
    t.latency.count = all_latencies.size();
    t.latency.min_us = *std::min_element(all_latencies.begin(), all_latencies.end());
    t.latency.max_us = *std::max_element(all_latencies.begin(), all_latencies.end());
    t.latency.mean_us = static_cast<double>(std::accumulate(all_latencies.begin(), all_latencies.end(), std::uint64_t{0})) /
                        all_latencies.size();
  }
  return rs;
}

}  // namespace lrwpan
