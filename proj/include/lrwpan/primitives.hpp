#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lrwpan/frames.hpp"
#include "lrwpan/status.hpp"

namespace lrwpan {

struct TxOptions {
  bool ack = true;
  bool gts = false;
  bool indirect = false;
  friend bool operator==(const TxOptions&, const TxOptions&) = default;
};

struct McpsDataRequest {
  AddrMode src_addr_mode = AddrMode::Short;  // Extended is used when no short address is assigned
  std::uint16_t dst_pan = 0xFFFF;
  MacAddress dst;
  Bytes msdu;
  std::uint8_t handle = 0;
  TxOptions options;
};

struct McpsDataConfirm {
  std::uint8_t handle = 0;
  Status status = Status::Success;
  SimTime timestamp;  // start of the last transmission attempt
};

struct McpsDataIndication {
  std::uint16_t src_pan = 0xFFFF;
  MacAddress src;
  std::uint16_t dst_pan = 0xFFFF;
  MacAddress dst;
  Bytes msdu;
  std::uint8_t link_quality = 0;
  std::uint8_t dsn = 0;
  SimTime timestamp;  // onset of the frame
};

struct MlmeAssociateRequest {
  std::uint8_t channel = 11;
  std::uint16_t coord_pan = 0xFFFF;
  MacAddress coord_address;
  CapabilityInfo capability;
  /// Superframe configuration of the PAN, usually from a PAN descriptor.
  std::uint8_t beacon_order = 15;
  std::uint8_t superframe_order = 15;
};

struct MlmeAssociateIndication {
  ExtAddress device;
  CapabilityInfo capability;
};

struct MlmeAssociateConfirm {
  Status status = Status::Success;
  ShortAddress short_address;
};

struct MlmeStartRequest {
  std::uint16_t pan_id = 0;
  std::uint8_t channel = 11;
  std::uint8_t beacon_order = 15;
  std::uint8_t superframe_order = 15;
  bool pan_coordinator = true;
  bool battery_life_extension = false;
};

enum class ScanType : std::uint8_t { Ed, Active, Passive };

std::string_view to_string(ScanType t);

struct MlmeScanRequest {
  ScanType type = ScanType::Ed;
  std::uint32_t channels = 0x07FFF800;  // 11..26
  std::uint8_t duration = 3;
};

struct MlmeScanConfirm {
  Status status = Status::Success;
  ScanType type = ScanType::Ed;
  std::uint32_t unscanned = 0;
  std::vector<std::pair<std::uint8_t, std::uint8_t>> energy;  // (channel, level)
  std::vector<PanDescriptor> pan_descriptors;
};

struct MlmeGtsConfirm {
  GtsCharacteristics characteristics;
  Status status = Status::Success;
};

struct MlmeGtsIndication {
  ShortAddress device;
  GtsCharacteristics characteristics;
};

struct MlmeBeaconNotify {
  std::uint8_t bsn = 0;
  PanDescriptor pan;
  std::vector<MacAddress> pending;
  Bytes payload;
};

struct MlmeCommStatus {
  std::uint16_t pan_id = 0xFFFF;
  MacAddress src;
  MacAddress dst;
  Status status = Status::Success;
};

/// Upper side of the MCPS-SAP and MLME-SAP. Every callback is delivered
/// from its own scheduled event.
class MacUser {
 public:
  virtual ~MacUser() = default;
  virtual void mcps_data_confirm(const McpsDataConfirm&) {}
  virtual void mcps_data_indication(const McpsDataIndication&) {}
  virtual void mlme_associate_indication(const MlmeAssociateIndication&) {}
  virtual void mlme_associate_confirm(const MlmeAssociateConfirm&) {}
  virtual void mlme_start_confirm(Status) {}
  virtual void mlme_scan_confirm(const MlmeScanConfirm&) {}
  virtual void mlme_gts_confirm(const MlmeGtsConfirm&) {}
  virtual void mlme_gts_indication(const MlmeGtsIndication&) {}
  virtual void mlme_poll_confirm(Status) {}
  virtual void mlme_sync_loss_indication(Status) {}
  virtual void mlme_beacon_notify_indication(const MlmeBeaconNotify&) {}
  virtual void mlme_comm_status_indication(const MlmeCommStatus&) {}
};

}  // namespace lrwpan
