#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "lrwpan/engine.hpp"
#include "lrwpan/medium.hpp"
#include "lrwpan/pib.hpp"
#include "lrwpan/status.hpp"
#include "lrwpan/trace.hpp"

namespace lrwpan {

enum class TrxState : std::uint8_t { TrxOff, RxOn, TxOn, BusyRx, BusyTx };
enum class TrxRequest : std::uint8_t { TrxOff, RxOn, TxOn, ForceTrxOff };

std::string_view to_string(TrxState s);
std::string_view to_string(TrxRequest r);

struct PdDataIndication {
  Bytes psdu;
  std::uint8_t link_quality = 0;
  double rx_power_dbm = 0.0;
  SimTime rx_start;  // onset of the SHR
};

/// Upper side of the PD-SAP and PLME-SAP. Confirms and indications are
/// always delivered from scheduled events, never re-entrantly.
class PhyUser {
 public:
  virtual ~PhyUser() = default;
  virtual void pd_data_confirm(Status) {}
  virtual void pd_data_indication(const PdDataIndication&) {}
  virtual void plme_cca_confirm(Status) {}
  virtual void plme_ed_confirm(Status, std::uint8_t) {}
  virtual void plme_set_trx_state_confirm(Status) {}
};

struct PhyConfig {
  double sensitivity_dbm = kDefaultSensitivityDbm;
  /// Energy threshold for CCA mode 1; defaults to 10 dB above sensitivity.
  std::optional<double> cca_threshold_dbm;
};

/// Per-node transceiver: TRX state machine, PD-DATA, PLME-CCA, PLME-ED and
/// PLME-GET/SET on top of the shared Medium.
class Phy : public MediumListener {
 public:
  Phy(NodeId node, Scheduler& scheduler, Medium& medium, Trace* trace = nullptr, PhyConfig config = {},
      Position position = {});

  void set_user(PhyUser* user) { user_ = user; }

  void pd_data_request(Bytes psdu);
  void plme_cca_request();
  void plme_ed_request();
  void plme_set_trx_state_request(TrxRequest request);
  PibResult plme_get(PibAttribute id) const { return pib_.get(id); }
  Status plme_set(PibAttribute id, const PibValue& value);

  NodeId node() const { return node_; }
  TrxState state() const { return state_; }
  bool in_transition() const { return transition_.has_value(); }
  const PhyPib& pib() const { return pib_; }
  PhyTiming timing() const { return pib_.timing(); }
  double sensitivity_dbm() const { return config_.sensitivity_dbm; }
  double cca_threshold_dbm() const { return *config_.cca_threshold_dbm; }

  /// ED level: linear over [-100, -20] dBm onto 0..255, saturating.
  static std::uint8_t ed_level(double dbm);
  /// LQI: linear over [sensitivity, sensitivity + 40] dB onto 0..255.
  std::uint8_t link_quality(double dbm) const;

  void on_signal_start(const Transmission& tx, double rx_power_dbm) override;
  void on_signal_end(const Transmission& tx, double rx_power_dbm) override;

 private:
  struct Transition {
    TrxState target;
    EventHandle event;
  };

  void post(std::string_view kind, std::function<void()> fn);
  void confirm_trx(Status s);
  void begin_transition(TrxState target, bool turnaround);
  void apply_deferred();
  void drop_reception(std::string_view why);
  void trace(std::string_view event, std::string details = {});

  NodeId node_;
  Scheduler& scheduler_;
  Medium& medium_;
  Trace* trace_;
  PhyConfig config_;
  PhyUser* user_ = nullptr;
  PhyPib pib_;

  TrxState state_ = TrxState::TrxOff;
  std::optional<Transition> transition_;
  std::optional<TrxState> deferred_;
  std::optional<TxId> current_tx_;
  EventHandle tx_end_event_;
  std::optional<TxId> locked_rx_;
  bool sensing_ = false;
};

}  // namespace lrwpan
