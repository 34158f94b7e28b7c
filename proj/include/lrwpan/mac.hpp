#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lrwpan/csma_ca.hpp"
#include "lrwpan/engine.hpp"
#include "lrwpan/gts.hpp"
#include "lrwpan/indirect.hpp"
#include "lrwpan/phy.hpp"
#include "lrwpan/pib.hpp"
#include "lrwpan/primitives.hpp"
#include "lrwpan/rng.hpp"
#include "lrwpan/superframe.hpp"
#include "lrwpan/trace.hpp"

namespace lrwpan {

struct MacCounters {
  std::uint64_t data_requests = 0;
  std::uint64_t frames_sent = 0;  // data and command transmissions, retries included
  std::uint64_t data_frames_sent = 0;
  std::uint64_t retries = 0;
  std::uint64_t acks_sent = 0;
  std::uint64_t acks_received = 0;
  std::uint64_t acks_skipped = 0;
  std::uint64_t ack_timeouts = 0;
  std::uint64_t no_ack = 0;
  std::uint64_t csma_failures = 0;
  std::uint64_t frames_received = 0;
  std::uint64_t data_indications = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t beacons_sent = 0;
  std::uint64_t beacons_received = 0;
  std::uint64_t beacons_missed = 0;
  std::uint64_t gts_frames_sent = 0;
  std::uint64_t gts_airtime_us = 0;  // own transmissions inside GTS windows
  std::uint64_t gts_window_us = 0;   // length of the GTS windows this node served
  std::uint64_t indirect_expired = 0;
};

/// Per-node MAC sublayer.
///
/// A node acts as a PAN coordinator after MLME-START and as a device
/// otherwise. Frames waiting for the CAP (or for unslotted channel access in
/// a beaconless PAN) are served one at a time; frames for a GTS have their own
/// queue served in the node's slots.
class Mac : public PhyUser {
 public:
  Mac(NodeId node, Scheduler& scheduler, Phy& phy, std::uint64_t seed, Trace* trace = nullptr);
  Mac(const Mac&) = delete;
  Mac& operator=(const Mac&) = delete;

  void set_user(MacUser* user) { user_ = user; }

  // MCPS-SAP
  void mcps_data_request(McpsDataRequest request);

  // MLME-SAP
  void mlme_associate_request(const MlmeAssociateRequest& request);
  void mlme_start_request(const MlmeStartRequest& request);
  void mlme_scan_request(const MlmeScanRequest& request);
  void mlme_gts_request(const GtsCharacteristics& characteristics);
  void mlme_poll_request();
  /// Searches for the coordinator's beacon and, with `track`, keeps
  /// following it.
  void mlme_sync_request(bool track);
  PibResult mlme_get(PibAttribute id) const;
  Status mlme_set(PibAttribute id, const PibValue& value);
  /// Drops all pending work without confirms, turns the receiver off and
  /// resets the PIB as MacPib::reset does.
  void mlme_reset(bool set_default);

  /// Replaces the random backoff draw (tests use fixed values).
  void set_backoff_draw(CsmaCa::BackoffDraw draw);

  NodeId node() const { return node_; }
  const MacPib& pib() const { return pib_; }
  MacPib& pib() { return pib_; }
  const MacCounters& counters() const { return counters_; }
  bool is_coordinator() const { return coordinator_; }
  bool beacon_enabled() const { return pib_.beacon_order < 15; }
  bool tracking() const { return tracking_; }
  bool scanning() const { return scan_.has_value(); }
  std::optional<SuperframeTiming> superframe() const { return sf_; }
  const GtsTable& gts_table() const { return gts_table_; }
  const IndirectQueue& indirect_queue() const { return indirect_; }
  /// GTS descriptors the coordinator has granted to this device.
  const std::vector<GtsDescriptor>& own_gts() const { return own_gts_; }
  std::size_t queued_frames() const { return cap_queue_.size() + (current_ ? 1 : 0); }

  // PhyUser
  void pd_data_confirm(Status status) override;
  void pd_data_indication(const PdDataIndication& ind) override;
  void plme_cca_confirm(Status status) override;
  void plme_ed_confirm(Status status, std::uint8_t level) override;
  void plme_set_trx_state_confirm(Status status) override;

 private:
  enum class Purpose : std::uint8_t { Msdu, AssociationRequest, DataRequest, BeaconRequest, GtsRequest, Indirect, BeaconReply };

  struct Outgoing {
    Frame frame;
    Bytes psdu;
    Purpose purpose = Purpose::Msdu;
    std::uint8_t handle = 0;
    std::uint64_t indirect_id = 0;
    GtsCharacteristics gts_request;
    unsigned attempts = 0;
    SimTime last_tx;
    bool ack() const { return frame.control.ack_request; }
  };

  enum class JobKind : std::uint8_t { Frame, Ack, Beacon };
  struct RadioJob {
    JobKind kind = JobKind::Frame;
    Bytes psdu;
    SimTime not_before;
    bool gts = false;
    bool active = false;
    bool sending = false;
    EventHandle timer;
  };

  struct AckWait {
    std::uint8_t seq = 0;
    bool gts = false;
    EventHandle timer;
  };

  struct GtsWindow {
    SimTime begin;
    SimTime end;
    MacAddress peer;
  };

  struct PollState {
    bool requested = false;  // explicit MLME-POLL.request
    bool waiting_data = false;
    EventHandle timer;
  };

  struct AssociationState {
    MlmeAssociateRequest request;
    EventHandle timer;
    bool polled = false;
  };

  struct GtsRequestState {
    GtsCharacteristics characteristics;
    bool acknowledged = false;
    unsigned beacons_seen = 0;
  };

  struct ScanState {
    MlmeScanRequest request;
    std::vector<std::uint8_t> channels;
    std::size_t index = 0;
    SimTime channel_end;
    std::uint8_t max_level = 0;
    EventHandle timer;
    std::uint16_t saved_pan = 0xFFFF;
    std::uint8_t saved_channel = 11;
    MlmeScanConfirm result;
  };

  struct DenialNotice {
    GtsField field;
    unsigned beacons_left = kGtsDescPersistence;
  };

  // --- plumbing (mac.cpp)
  CsmaCa::Hooks csma_hooks();
  EventHandle at(SimTime t, std::string_view kind, std::function<void()> fn);
  void notify(std::string_view kind, std::function<void(MacUser&)> fn);
  void trace(std::string_view event, std::string details = {});
  PhyTiming timing() const { return phy_.timing(); }
  SimTime symbols(std::uint64_t n) const { return timing().symbols(n); }
  MacAddress own_address() const;
  MacAddress coordinator_address() const;
  bool addressed_to_me(const Frame& f) const;
  std::uint8_t next_dsn() { return pib_.dsn++; }
  Frame make_frame(FrameType type, std::uint16_t dst_pan, MacAddress dst, MacAddress src, bool ack) const;
  SimTime ifs_after(std::size_t psdu_len) const;

  // --- radio
  bool want_rx() const;
  void restore_radio();
  void push_job(RadioJob job, bool front = false);
  void activate_job();
  void try_send();
  void send_ack(std::uint8_t seq, bool pending);

  // --- CAP transmission path
  void enqueue(Outgoing out, bool front = false);
  void service_cap();
  void start_attempt();
  void on_csma_done(Status status, SimTime tx_at);
  void frame_sent(Status status, bool gts);
  void on_ack_timeout();
  void on_ack(const Frame& ack);
  void complete_cap(Status status, bool ack_pending);
  void dispatch_result(Outgoing& out, Status status, bool ack_pending);
  std::optional<CapWindow> current_cap() const;
  SimTime transaction_time(const Outgoing& out) const;

  // --- reception (mac.cpp)
  void handle_data(const Frame& f, const PdDataIndication& ind);
  void handle_command(const Frame& f, const PdDataIndication& ind);

  // --- superframe, beacons, GTS (mac_superframe.cpp)
  void schedule_beacon(SimTime at);
  Frame beacon_frame();
  Bytes build_beacon();
  void beacon_sent();
  void superframe_began();
  void handle_beacon(const Frame& f, const PdDataIndication& ind);
  void track_beacon(const Frame& f, const BeaconFields& fields, const PdDataIndication& ind);
  void schedule_tracking_timers();
  void on_beacon_missed();
  void lose_sync();
  void process_gts_fields(const BeaconFields& fields);
  std::vector<GtsWindow> gts_windows() const;
  void open_gts_window(const GtsWindow& window);
  void service_gts();
  void ed_next();
  void complete_gts(Status status);
  void handle_gts_request(const Frame& f);
  void finish_gts_request(Status status);
  PanDescriptor make_pan_descriptor(const Frame& f, const BeaconFields& fields, const PdDataIndication& ind) const;

  // --- association, polling, indirect, scans (mac_management.cpp)
  void start_poll(bool requested);
  void poll_done(Status status);
  void handle_association_request(const Frame& f);
  void handle_association_response(const Frame& f);
  void finish_association(Status status, ShortAddress addr);
  void handle_data_request(const Frame& f);
  bool has_pending_for(const MacAddress& addr) const;
  IndirectEntry* pending_entry_for(const MacAddress& addr);
  Status queue_indirect(Frame frame, IndirectKind kind, std::uint8_t handle);
  void on_indirect_expired(std::uint64_t id);
  void finish_indirect(std::uint64_t id, Status status, SimTime timestamp);
  SimTime unit_period() const;
  void handle_beacon_request();
  void scan_next_channel();
  void scan_end_channel();
  void scan_collect(const Frame& f, const PdDataIndication& ind);
  void finish_scan();
  ShortAddress allocate_short(ExtAddress device);

  NodeId node_;
  Scheduler& scheduler_;
  Phy& phy_;
  Trace* trace_;
  MacUser* user_ = nullptr;
  MacPib pib_;
  RngStream backoff_rng_;
  RngStream sequence_rng_;
  CsmaCa::BackoffDraw backoff_draw_;
  CsmaCa csma_;
  MacCounters counters_;
  std::uint64_t epoch_ = 0;

  bool coordinator_ = false;
  bool pan_coordinator_ = false;

  std::deque<RadioJob> jobs_;
  bool cca_after_turnaround_ = false;
  SimTime last_tx_start_;

  std::deque<Outgoing> cap_queue_;
  std::optional<Outgoing> current_;
  SimTime cap_ready_at_;  // IFS after the previous frame
  EventHandle cap_service_timer_;
  std::deque<Outgoing> gts_queue_;
  std::optional<Outgoing> gts_current_;
  std::optional<GtsWindow> gts_window_;
  std::optional<AckWait> ack_wait_;
  std::map<MacAddress, std::uint8_t> last_seq_;

  // Superframe state (own as coordinator, tracked as device).
  std::optional<SuperframeTiming> sf_;
  bool in_active_ = false;
  bool tracking_ = false;
  bool searching_ = false;
  bool beacon_window_ = false;  // receiver on around an expected beacon
  SimTime expected_beacon_;
  unsigned lost_beacons_ = 0;
  EventHandle wake_timer_;
  EventHandle miss_timer_;
  EventHandle search_timer_;

  // Coordinator state.
  GtsTable gts_table_;
  std::vector<DenialNotice> denials_;
  std::size_t beacon_len_ = 0;
  std::uint8_t beacon_final_cap_ = 15;
  IndirectQueue indirect_;
  std::map<ExtAddress, ShortAddress> allocated_;
  std::uint16_t next_short_ = 0x0001;

  // Device state.
  std::vector<GtsDescriptor> own_gts_;
  std::optional<PollState> poll_;
  std::optional<AssociationState> association_;
  std::optional<GtsRequestState> gts_request_;
  std::optional<ScanState> scan_;
};

}  // namespace lrwpan
