#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "lrwpan/sim_time.hpp"

namespace lrwpan {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

struct ShortAddress {
  std::uint16_t value = 0xFFFF;

  static constexpr ShortAddress broadcast() { return {0xFFFF}; }
  /// Associated but no short address assigned; use the extended address.
  static constexpr ShortAddress unassigned() { return {0xFFFE}; }
  constexpr bool is_broadcast() const { return value == 0xFFFF; }

  friend constexpr auto operator<=>(ShortAddress, ShortAddress) = default;
};

/// EUI-64.
struct ExtAddress {
  std::uint64_t value = 0;
  friend constexpr auto operator<=>(ExtAddress, ExtAddress) = default;
};

/// An address as carried in a MAC header; monostate means "not present".
using MacAddress = std::variant<std::monostate, ShortAddress, ExtAddress>;

inline constexpr std::uint16_t kBroadcastPan = 0xFFFF;

std::string to_string(const MacAddress& a);

enum class FrameType : std::uint8_t { Beacon = 0, Data = 1, Ack = 2, Command = 3 };
enum class AddrMode : std::uint8_t { None = 0, Short = 2, Extended = 3 };
enum class FrameVersion : std::uint8_t { V2003 = 0, V2006 = 1 };

AddrMode mode_of(const MacAddress& a);
std::string_view to_string(FrameType t);

struct FrameControl {
  FrameType frame_type = FrameType::Beacon;
  bool security_enabled = false;
  bool frame_pending = false;
  bool ack_request = false;
  bool pan_id_compression = false;
  AddrMode dst_addr_mode = AddrMode::None;
  FrameVersion frame_version = FrameVersion::V2003;
  AddrMode src_addr_mode = AddrMode::None;

  friend bool operator==(const FrameControl&, const FrameControl&) = default;
};

enum class CommandId : std::uint8_t {
  AssociationRequest = 0x01,
  AssociationResponse = 0x02,
  DisassociationNotification = 0x03,
  DataRequest = 0x04,
  PanIdConflictNotification = 0x05,
  OrphanNotification = 0x06,
  BeaconRequest = 0x07,
  CoordinatorRealignment = 0x08,
  GtsRequest = 0x09,
};

std::string_view to_string(CommandId c);

enum class FrameErrc {
  FrameTooLong,
  SecurityUnsupported,
  InvalidAddressing,
  FcsMismatch,
  Truncated,
  ReservedAddrMode,
  UnknownFrameType,
  UnknownCommand,
  InvalidField,
};

std::string_view to_string(FrameErrc e);

class FrameError : public std::runtime_error {
 public:
  FrameError(FrameErrc code, const std::string& what);
  FrameErrc code() const { return code_; }

 private:
  FrameErrc code_;
};

/// A MAC frame. Address fields are present iff their variant holds an
/// address; `control`'s address modes must agree with them. For command
/// frames `command` holds the identifier and `payload` the command payload;
/// for beacons `payload` holds the encoded beacon fields.
struct Frame {
  FrameControl control;
  std::uint8_t sequence_number = 0;
  std::optional<std::uint16_t> dst_pan;
  MacAddress dst;
  std::optional<std::uint16_t> src_pan;
  MacAddress src;
  std::optional<CommandId> command;
  Bytes payload;

  friend bool operator==(const Frame&, const Frame&) = default;
};

/// CRC-16/ITU-T (x^16 + x^12 + x^5 + 1), zero initial value, LSB-first.
std::uint16_t fcs(ByteView bytes);

std::uint16_t encode_frame_control(const FrameControl& fc);
/// Throws FrameError (ReservedAddrMode, UnknownFrameType).
FrameControl decode_frame_control(std::uint16_t word);

/// MHR length implied by the addressing fields, plus the command identifier
/// for command frames.
std::size_t header_size(const Frame& f);
/// Largest payload that still fits in aMaxPHYPacketSize with this header.
std::size_t max_payload_size(const Frame& f);

/// Wire encoding including FCS. Throws FrameError on oversize frames,
/// security-enabled frames, or inconsistent addressing.
Bytes encode_frame(const Frame& f);
/// Throws FrameError (FcsMismatch, Truncated, ReservedAddrMode,
/// UnknownFrameType, UnknownCommand, InvalidAddressing).
Frame decode_frame(ByteView bytes);

// --- Composite fields --------------------------------------------------------

struct SuperframeSpec {
  std::uint8_t beacon_order = 15;
  std::uint8_t superframe_order = 15;
  std::uint8_t final_cap_slot = 15;
  bool battery_life_extension = false;
  bool pan_coordinator = false;
  bool association_permit = false;

  friend bool operator==(const SuperframeSpec&, const SuperframeSpec&) = default;
};

std::uint16_t encode_superframe_spec(const SuperframeSpec& s);
SuperframeSpec decode_superframe_spec(std::uint16_t word);

enum class GtsDirection : std::uint8_t { Transmit = 0, Receive = 1 };

/// GTS descriptor as carried in a beacon. A starting slot of 0 signals a
/// denied request.
struct GtsField {
  ShortAddress device;
  std::uint8_t starting_slot = 0;
  std::uint8_t length = 0;
  GtsDirection direction = GtsDirection::Transmit;

  friend bool operator==(const GtsField&, const GtsField&) = default;
};

/// MAC payload of a beacon frame.
struct BeaconFields {
  SuperframeSpec superframe;
  bool gts_permit = false;
  std::vector<GtsField> gts;
  std::vector<ShortAddress> pending_short;
  std::vector<ExtAddress> pending_ext;
  Bytes beacon_payload;

  friend bool operator==(const BeaconFields&, const BeaconFields&) = default;
};

Bytes encode_beacon_fields(const BeaconFields& b);
BeaconFields decode_beacon_fields(ByteView bytes);

struct CapabilityInfo {
  bool alternate_pan_coordinator = false;
  bool full_function_device = false;
  bool mains_powered = false;
  bool rx_on_when_idle = false;
  bool security = false;
  bool allocate_address = true;

  friend bool operator==(const CapabilityInfo&, const CapabilityInfo&) = default;
};

std::uint8_t encode_capability(const CapabilityInfo& c);
CapabilityInfo decode_capability(std::uint8_t b);

enum class AssociationStatus : std::uint8_t { Success = 0x00, PanAtCapacity = 0x01, PanAccessDenied = 0x02 };

struct AssociationResponse {
  ShortAddress short_address;
  AssociationStatus status = AssociationStatus::Success;
  friend bool operator==(const AssociationResponse&, const AssociationResponse&) = default;
};

Bytes encode_association_response(const AssociationResponse& r);
AssociationResponse decode_association_response(ByteView payload);

struct GtsCharacteristics {
  std::uint8_t length = 1;  // slots, 1..15
  GtsDirection direction = GtsDirection::Transmit;
  bool allocate = true;
  friend bool operator==(const GtsCharacteristics&, const GtsCharacteristics&) = default;
};

std::uint8_t encode_gts_characteristics(const GtsCharacteristics& c);
GtsCharacteristics decode_gts_characteristics(std::uint8_t b);

struct CoordinatorRealignment {
  std::uint16_t pan_id = 0;
  ShortAddress coord_short;
  std::uint8_t channel = 11;
  ShortAddress short_address;
  friend bool operator==(const CoordinatorRealignment&, const CoordinatorRealignment&) = default;
};

Bytes encode_coordinator_realignment(const CoordinatorRealignment& r);
CoordinatorRealignment decode_coordinator_realignment(ByteView payload);

/// Coordinator information gathered from a received beacon.
struct PanDescriptor {
  MacAddress coord_address;
  std::uint16_t coord_pan_id = 0;
  std::uint8_t logical_channel = 11;
  SuperframeSpec superframe;
  bool gts_permit = false;
  std::uint8_t link_quality = 0;
  SimTime timestamp;

  friend bool operator==(const PanDescriptor&, const PanDescriptor&) = default;
};

// Convenience builders.
Frame make_ack(std::uint8_t seq, bool frame_pending);

}  // namespace lrwpan
