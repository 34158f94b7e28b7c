#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "lrwpan/constants.hpp"
#include "lrwpan/engine.hpp"
#include "lrwpan/frames.hpp"

namespace lrwpan {

inline constexpr double kNoiseFloorDbm = -100.0;
inline constexpr double kDefaultSensitivityDbm = -85.0;

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

/// Log-distance path loss: PL(d) = PL0 + 10 n log10(d / d0), d clamped to d0.
struct PathLossModel {
  double reference_loss_db = 40.2;
  double exponent = 2.0;
  double reference_distance_m = 1.0;

  double loss_db(double distance_m) const;
};

using TxId = std::uint64_t;

/// A signal on the air.
struct Transmission {
  TxId id = 0;
  NodeId source = 0;
  std::uint8_t channel = 11;
  double power_dbm = 0.0;
  Bytes psdu;
  SimTime start;
  SimTime end;
  bool aborted = false;
};

enum class ReceiveOutcome { Delivered, Collided, BelowSensitivity };

std::string_view to_string(ReceiveOutcome o);

/// Notified of signal onset and end on the channel it is tuned to.
class MediumListener {
 public:
  virtual ~MediumListener() = default;
  virtual void on_signal_start(const Transmission& tx, double rx_power_dbm) = 0;
  virtual void on_signal_end(const Transmission& tx, double rx_power_dbm) = 0;
};

/// Statistics / capture hook.
class MediumObserver {
 public:
  virtual ~MediumObserver() = default;
  virtual void on_transmission_start(const Transmission&) {}
  /// Called once per (finished transmission, other node tuned to its channel
  /// at onset) with the binary-collision outcome at that node.
  virtual void on_transmission_outcome(const Transmission&, NodeId, ReceiveOutcome) {}
};

/// Shared radio channel with static node positions, log-distance path loss
/// and a binary collision model (any overlap above sensitivity destroys both
/// frames; no capture).
class Medium {
 public:
  Medium(Scheduler& scheduler, PathLossModel model = {});

  void attach(NodeId node, Position pos, double sensitivity_dbm, MediumListener* listener);
  void set_channel(NodeId node, std::uint8_t channel);
  std::uint8_t channel_of(NodeId node) const;
  const Position& position_of(NodeId node) const;
  double sensitivity_of(NodeId node) const;
  const PathLossModel& model() const { return model_; }

  /// Starts a transmission at the current time; its end is scheduled after
  /// the PPDU airtime for the channel's band.
  TxId begin_transmission(NodeId node, std::uint8_t channel, double power_dbm, Bytes psdu);
  /// Truncates an ongoing transmission at the current time.
  void abort_transmission(TxId id);

  const Transmission* find(TxId id) const;

  double received_power(const Transmission& tx, NodeId receiver) const;
  double received_power(NodeId from, double tx_power_dbm, NodeId to) const;

  ReceiveOutcome receive_outcome(NodeId receiver, TxId tx) const;

  /// Maximum aggregate received power on `channel` over [now - window, now),
  /// excluding the node's own signals; the noise floor when idle.
  double sense_energy(NodeId node, std::uint8_t channel, SimTime window, SimTime now) const;
  /// True if any signal at or above the node's sensitivity was present on
  /// the channel during [now - window, now).
  bool carrier_present(NodeId node, std::uint8_t channel, SimTime window, SimTime now) const;

  void set_observer(MediumObserver* observer) { observer_ = observer; }

  std::size_t active_count() const;

 private:
  struct Port {
    Position pos;
    double sensitivity_dbm = kDefaultSensitivityDbm;
    std::uint8_t channel = 11;
    MediumListener* listener = nullptr;
  };
  struct Record {
    Transmission tx;
    std::vector<std::pair<NodeId, double>> notified;  // receivers tuned in at onset
    EventHandle end_event;
    bool finished = false;
  };

  void finish(TxId id);
  void prune();
  const Port& port(NodeId node) const;

  Scheduler& scheduler_;
  PathLossModel model_;
  std::map<NodeId, Port> ports_;
  std::map<TxId, Record> records_;
  TxId next_id_ = 1;
  MediumObserver* observer_ = nullptr;
};

}  // namespace lrwpan
