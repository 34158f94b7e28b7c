#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lrwpan/adapters.hpp"
#include "lrwpan/engine.hpp"
#include "lrwpan/mac.hpp"
#include "lrwpan/medium.hpp"
#include "lrwpan/pcap.hpp"
#include "lrwpan/phy.hpp"
#include "lrwpan/rng.hpp"
#include "lrwpan/scenario.hpp"
#include "lrwpan/trace.hpp"

namespace lrwpan {

struct LatencyStats {
  std::uint64_t count = 0;
  std::uint64_t min_us = 0;
  std::uint64_t max_us = 0;
  double mean_us = 0.0;
};

struct NodeStats {
  NodeId id = 0;
  std::uint64_t frames_sent = 0;  // every PPDU this radio put on air
  std::uint64_t frames_received = 0;
  std::uint64_t frames_collided = 0;
  std::uint64_t below_sensitivity = 0;
  std::uint64_t acks_sent = 0;
  std::uint64_t acks_received = 0;
  std::uint64_t retries = 0;
  std::uint64_t csma_failures = 0;
  std::uint64_t no_ack = 0;
  std::uint64_t msdu_generated = 0;   // handed to the MAC
  std::uint64_t msdu_rejected = 0;    // refused by the adapter
  std::uint64_t msdu_confirmed = 0;   // MCPS-DATA.confirm SUCCESS
  std::uint64_t msdu_delivered = 0;   // distinct MSDUs some peer received
  std::uint64_t msdu_received = 0;    // MSDUs this node received
  double delivery_ratio = 0.0;
  LatencyStats latency;
  std::uint64_t beacons_sent = 0;
  std::uint64_t beacons_received = 0;
  std::uint64_t beacons_missed = 0;
  std::uint64_t gts_frames = 0;
  double gts_utilization = 0.0;
};

/// Outcomes of one sender's transmissions at one other radio.
struct LinkStats {
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t sent = 0;  // transmissions by `from`
  std::uint64_t delivered = 0;
  std::uint64_t collided = 0;
  std::uint64_t below_sensitivity = 0;
  bool accounting_holds() const { return sent >= delivered + collided + below_sensitivity; }
};

struct RunStats {
  std::uint64_t seed = 0;
  SimTime end;
  std::uint64_t events = 0;
  std::uint64_t trace_lines = 0;
  std::vector<NodeStats> nodes;
  std::vector<LinkStats> links;
  NodeStats aggregate;

  bool accounting_holds() const;
  const LinkStats* link(NodeId from, NodeId to) const;
  const NodeStats* node(NodeId id) const;

  /// `key=value` per line; per-node keys are prefixed `node.<id>.`, link
  /// keys `link.<from>.<to>.`, aggregate keys `total.`.
  std::string to_flat() const;
  std::string to_json() const;
};

class Simulation;

/// One host: PHY, MAC, convergence adapter and traffic sources.
class Node : public MacUser {
 public:
  Node(Simulation& sim, const NodeConfig& config);
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  NodeId id() const { return config_.id; }
  const NodeConfig& config() const { return config_; }
  Phy& phy() { return phy_; }
  Mac& mac() { return mac_; }
  const Mac& mac() const { return mac_; }
  Sscs& sscs() { return sscs_; }
  ExtAddress ext_address() const;
  /// Short address when assigned, else the extended address.
  MacAddress address() const;
  bool joined() const { return joined_; }
  bool owns(const MacAddress& a) const;

  // MacUser
  void mcps_data_confirm(const McpsDataConfirm& c) override;
  void mcps_data_indication(const McpsDataIndication& ind) override;
  void mlme_associate_confirm(const MlmeAssociateConfirm& c) override;
  void mlme_start_confirm(Status status) override;
  void mlme_scan_confirm(const MlmeScanConfirm& c) override;
  void mlme_gts_confirm(const MlmeGtsConfirm& c) override;
  void mlme_sync_loss_indication(Status status) override;

 private:
  friend class Simulation;

  struct Source {
    const TrafficSpec* spec = nullptr;
    std::uint32_t next_seq = 0;
  };

  void load_pib();
  void start_timers();
  void enter_rx();
  void start_traffic();
  void send_next(std::size_t source, SimTime at);
  void begin_join();
  void request_gts(unsigned attempt);
  void schedule_poll();
  void trace(std::string_view event, std::string details = {});

  Simulation& sim_;
  NodeConfig config_;
  Phy phy_;
  Mac mac_;
  Sscs sscs_;
  RngStream traffic_rng_;
  std::vector<Source> sources_;
  bool joined_ = false;
  unsigned gts_attempts_ = 0;
  std::uint64_t generated_ = 0;
  std::uint64_t rejected_ = 0;
  std::uint64_t confirmed_ = 0;
  std::uint8_t next_handle_ = 0;
  std::map<std::uint8_t, std::pair<NodeId, std::uint32_t>> in_flight_;  // handle -> (source id, seq)
};

/// A scenario instantiated on one scheduler.
class Simulation : private MediumObserver {
 public:
  explicit Simulation(Scenario scenario, std::optional<std::uint64_t> seed = std::nullopt);
  ~Simulation() override;
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  /// Runs to the scenario duration.
  void run();
  void run_until(SimTime t);

  const Scenario& scenario() const { return scenario_; }
  std::uint64_t seed() const { return seed_; }
  Scheduler& scheduler() { return scheduler_; }
  Medium& medium() { return medium_; }
  Trace& trace() { return trace_; }
  const Trace& trace() const { return trace_; }
  Node& node(NodeId id);
  const std::vector<std::unique_ptr<Node>>& nodes() const { return nodes_; }
  Node& coordinator();
  const std::vector<CaptureRecord>& capture() const { return capture_; }

  RunStats stats() const;

  /// Turns on the invariant checks; must be called before running.
  void enable_checks() { checking_ = true; }
  /// Invariant violations found so far, plus end-of-run checks.
  std::vector<std::string> violations() const;

 private:
  friend class Node;

  struct Generated {
    SimTime at;
    bool delivered = false;
  };

  void on_transmission_start(const Transmission& tx) override;
  void on_transmission_outcome(const Transmission& tx, NodeId receiver, ReceiveOutcome outcome) override;
  void on_trace_line(const TraceLine& line);
  void check_slotted(const TraceLine& line);
  void check_gts(const TraceLine& line);
  void violation(SimTime at, std::string what);

  Node* owner_of(const MacAddress& a);
  void note_generated(NodeId src, std::uint32_t seq, SimTime at);
  void note_received(Node& receiver, const McpsDataIndication& ind);

  Scenario scenario_;
  std::uint64_t seed_;
  Scheduler scheduler_;
  Medium medium_;
  Trace trace_;
  std::vector<std::unique_ptr<Node>> nodes_;
  std::map<NodeId, Node*> by_id_;
  std::vector<CaptureRecord> capture_;

  struct LinkCount {
    std::uint64_t delivered = 0;
    std::uint64_t collided = 0;
    std::uint64_t below = 0;
  };
  std::map<NodeId, std::uint64_t> tx_count_;
  std::map<std::pair<NodeId, NodeId>, LinkCount> links_;
  std::map<std::pair<NodeId, std::uint32_t>, Generated> generated_;
  std::map<NodeId, std::vector<std::uint64_t>> latencies_;  // by source
  std::map<NodeId, std::uint64_t> received_;                // by receiver

  bool checking_ = false;
  SimTime last_trace_time_;
  std::vector<std::string> violations_;
};

/// Application payload for generated traffic: a 4-byte little-endian
/// sequence number followed by filler derived from (source, seq).
Bytes traffic_payload(NodeId source, std::uint32_t seq, std::size_t size);

}  // namespace lrwpan
