#include "lrwpan/medium.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace lrwpan {

namespace {

// Frames of any band finish well within this; older records only matter for
// overlap and energy queries.
constexpr SimTime kHistoryHorizon{200'000};

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

bool overlaps(const Transmission& a, const Transmission& b) { return a.start < b.end && b.start < a.end; }

}  // namespace

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double PathLossModel::loss_db(double distance_m) const {
  const double d = std::max(distance_m, reference_distance_m);
  return reference_loss_db + 10.0 * exponent * std::log10(d / reference_distance_m);
}

std::string_view to_string(ReceiveOutcome o) {
  switch (o) {
    case ReceiveOutcome::Delivered:
      return "DELIVERED";
    case ReceiveOutcome::Collided:
      return "COLLIDED";
    case ReceiveOutcome::BelowSensitivity:
      return "BELOW_SENSITIVITY";
  }
  return "?";
}

Medium::Medium(Scheduler& scheduler, PathLossModel model) : scheduler_(scheduler), model_(model) {}

void Medium::attach(NodeId node, Position pos, double sensitivity_dbm, MediumListener* listener) {
  ports_[node] = Port{pos, sensitivity_dbm, 11, listener};
}

const Medium::Port& Medium::port(NodeId node) const {
  auto it = ports_.find(node);
  if (it == ports_.end()) throw std::out_of_range("node " + std::to_string(node) + " is not attached to the medium");
  return it->second;
}

void Medium::set_channel(NodeId node, std::uint8_t channel) {
  auto it = ports_.find(node);
  if (it == ports_.end()) throw std::out_of_range("node " + std::to_string(node) + " is not attached to the medium");
  it->second.channel = channel;
}

std::uint8_t Medium::channel_of(NodeId node) const { return port(node).channel; }
const Position& Medium::position_of(NodeId node) const { return port(node).pos; }
double Medium::sensitivity_of(NodeId node) const { return port(node).sensitivity_dbm; }

double Medium::received_power(NodeId from, double tx_power_dbm, NodeId to) const {
  return tx_power_dbm - model_.loss_db(distance(port(from).pos, port(to).pos));
}

double Medium::received_power(const Transmission& tx, NodeId receiver) const {
  return received_power(tx.source, tx.power_dbm, receiver);
}

TxId Medium::begin_transmission(NodeId node, std::uint8_t channel, double power_dbm, Bytes psdu) {
  port(node);
  prune();
  const SimTime now = scheduler_.now();
  const TxId id = next_id_++;
  const SimTime airtime = PhyTiming::for_channel(channel).airtime(static_cast<std::uint32_t>(psdu.size()));
  Record rec;
  rec.tx = Transmission{id, node, channel, power_dbm, std::move(psdu), now, now + airtime};
  for (const auto& [other, p] : ports_) {
    if (other == node || p.channel != channel) continue;
    rec.notified.emplace_back(other, received_power(node, power_dbm, other));
  }
  rec.end_event = scheduler_.schedule_at(rec.tx.end, EventTag{node, Layer::Medium, "signal_end"},
                                         [this, id] { finish(id); });
  auto& stored = records_.emplace(id, std::move(rec)).first->second;
  if (observer_) observer_->on_transmission_start(stored.tx);
  for (const auto& [other, rx_dbm] : stored.notified) {
    if (auto* l = ports_.at(other).listener) l->on_signal_start(stored.tx, rx_dbm);
  }
  return id;
}

void Medium::abort_transmission(TxId id) {
  auto it = records_.find(id);
  if (it == records_.end() || it->second.finished) return;
  scheduler_.cancel(it->second.end_event);
  it->second.tx.end = scheduler_.now();
  it->second.tx.aborted = true;
  finish(id);
}

void Medium::finish(TxId id) {
  auto& rec = records_.at(id);
  rec.finished = true;
  for (const auto& [other, rx_dbm] : rec.notified) {
    if (observer_) observer_->on_transmission_outcome(rec.tx, other, receive_outcome(other, id));
    if (auto* l = ports_.at(other).listener) l->on_signal_end(rec.tx, rx_dbm);
  }
}

const Transmission* Medium::find(TxId id) const {
  auto it = records_.find(id);
  return it == records_.end() ? nullptr : &it->second.tx;
}

ReceiveOutcome Medium::receive_outcome(NodeId receiver, TxId id) const {
  const auto& rec = records_.at(id);
  const auto& tx = rec.tx;
  const double sensitivity = port(receiver).sensitivity_dbm;
  if (received_power(tx, receiver) < sensitivity) return ReceiveOutcome::BelowSensitivity;
  // A truncated frame is as good as corrupted.
  if (tx.aborted) return ReceiveOutcome::Collided;
  for (const auto& [other_id, other] : records_) {
    if (other_id == id || other.tx.channel != tx.channel || other.tx.source == receiver) continue;
    if (!overlaps(tx, other.tx)) continue;
    if (received_power(other.tx, receiver) >= sensitivity) return ReceiveOutcome::Collided;
  }
  return ReceiveOutcome::Delivered;
}

double Medium::sense_energy(NodeId node, std::uint8_t channel, SimTime window, SimTime now) const {
  const SimTime begin = now >= window ? now - window : SimTime::zero();
  std::vector<const Transmission*> relevant;
  for (const auto& [id, rec] : records_) {
    const auto& tx = rec.tx;
    if (tx.channel != channel || tx.source == node) continue;
    if (tx.start < now && begin < tx.end) relevant.push_back(&tx);
  }
  // Aggregate power only changes at signal onsets, so the maximum over the
  // window is attained at its start or at one of the onsets inside it.
  std::vector<SimTime> probes{begin};
  for (const auto* tx : relevant) {
    if (tx->start > begin) probes.push_back(tx->start);
  }
  double best_mw = 0.0;
  for (SimTime p : probes) {
    double sum = 0.0;
    for (const auto* tx : relevant) {
      if (tx->start <= p && p < tx->end) sum += dbm_to_mw(received_power(*tx, node));
    }
    best_mw = std::max(best_mw, sum);
  }
  if (best_mw <= 0.0) return kNoiseFloorDbm;
  return std::max(kNoiseFloorDbm, mw_to_dbm(best_mw));
}

bool Medium::carrier_present(NodeId node, std::uint8_t channel, SimTime window, SimTime now) const {
  const SimTime begin = now >= window ? now - window : SimTime::zero();
  const double sensitivity = port(node).sensitivity_dbm;
  for (const auto& [id, rec] : records_) {
    const auto& tx = rec.tx;
    if (tx.channel != channel || tx.source == node) continue;
    if (tx.start < now && begin < tx.end && received_power(tx, node) >= sensitivity) return true;
  }
  return false;
}

std::size_t Medium::active_count() const {
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [](const auto& kv) { return !kv.second.finished; }));
}

void Medium::prune() {
  const SimTime now = scheduler_.now();
  if (now < kHistoryHorizon) return;
  const SimTime cutoff = now - kHistoryHorizon;
  for (auto it = records_.begin(); it != records_.end();) {
    if (it->second.finished && it->second.tx.end < cutoff) {
      it = records_.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace lrwpan
