#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "lrwpan/constants.hpp"
#include "lrwpan/frames.hpp"
#include "lrwpan/rng.hpp"
#include "lrwpan/status.hpp"

namespace lrwpan {

/// PIB attribute identifiers (2006 numbering; macExtendedAddress is an
/// addition outside the 2006 table, where the EUI-64 was a constant).
enum class PibAttribute : std::uint16_t {
  phyCurrentChannel = 0x00,
  phyChannelsSupported = 0x01,
  phyTransmitPower = 0x02,
  phyCCAMode = 0x03,
  phyCurrentPage = 0x04,
  phyMaxFrameDuration = 0x05,
  phySHRDuration = 0x06,
  phySymbolsPerOctet = 0x07,

  macAckWaitDuration = 0x40,
  macAssociationPermit = 0x41,
  macAutoRequest = 0x42,
  macBattLifeExt = 0x43,
  macBattLifeExtPeriods = 0x44,
  macBeaconOrder = 0x47,
  macBSN = 0x49,
  macCoordExtendedAddress = 0x4a,
  macCoordShortAddress = 0x4b,
  macDSN = 0x4c,
  macGTSPermit = 0x4d,
  macMaxCSMABackoffs = 0x4e,
  macMinBE = 0x4f,
  macPANId = 0x50,
  macPromiscuousMode = 0x51,
  macRxOnWhenIdle = 0x52,
  macShortAddress = 0x53,
  macSuperframeOrder = 0x54,
  macTransactionPersistenceTime = 0x55,
  macAssociatedPANCoord = 0x56,
  macMaxBE = 0x57,
  macMaxFrameTotalWaitTime = 0x58,
  macMaxFrameRetries = 0x59,
  macResponseWaitTime = 0x5a,
  macExtendedAddress = 0x80,
};

enum class PibKind { Bool, Integer, Extended };

using PibValue = std::variant<bool, std::int64_t, ExtAddress>;

struct PibResult {
  Status status = Status::Success;
  PibValue value;
  bool ok() const { return status == Status::Success; }
};

std::string_view to_string(PibAttribute a);
std::optional<PibAttribute> pib_attribute_from_name(std::string_view name);
PibKind kind_of(PibAttribute a);
bool is_phy_attribute(PibAttribute a);

/// PHY PAN information base.
struct PhyPib {
  std::uint8_t current_channel = 11;
  std::uint32_t channels_supported = 0x07FFFFFF;  // channels 0..26, page 0
  std::int8_t transmit_power_dbm = 0;
  std::uint8_t cca_mode = 1;
  std::uint8_t current_page = 0;

  PhyTiming timing() const { return PhyTiming::for_channel(current_channel); }

  /// UNSUPPORTED_ATTRIBUTE for non-PHY ids.
  PibResult get(PibAttribute id) const;
  /// SUCCESS, INVALID_PARAMETER, READ_ONLY or UNSUPPORTED_ATTRIBUTE; the
  /// stored value is unchanged unless SUCCESS is returned.
  Status set(PibAttribute id, const PibValue& value);
  void reset() { *this = PhyPib{}; }
};

/// MAC PAN information base. Security attributes are not modelled.
///
/// macAckWaitDuration and macMaxFrameTotalWaitTime are derived from the PHY
/// timing of the bound PhyPib (2.4 GHz when none is bound) and are read-only.
class MacPib {
 public:
  std::uint8_t min_be = 3;
  std::uint8_t max_be = 5;
  std::uint8_t max_csma_backoffs = 4;
  std::uint8_t max_frame_retries = 3;
  std::uint8_t beacon_order = 15;
  std::uint8_t superframe_order = 15;
  std::uint16_t pan_id = 0xFFFF;
  ShortAddress short_address{0xFFFF};
  ExtAddress extended_address{};
  bool association_permit = false;
  bool associated_pan_coord = false;
  bool auto_request = true;
  bool batt_life_ext = false;
  std::uint8_t batt_life_ext_periods = 6;
  bool rx_on_when_idle = false;
  std::uint8_t dsn = 0;
  std::uint8_t bsn = 0;
  ShortAddress coord_short_address{0xFFFF};
  ExtAddress coord_extended_address{};
  bool gts_permit = true;
  std::uint16_t transaction_persistence_time = 0x01F4;
  bool promiscuous_mode = false;
  std::uint8_t response_wait_time = 32;

  void bind_phy(const PhyPib* phy) { phy_ = phy; }
  PhyTiming timing() const { return phy_ ? phy_->timing() : PhyTiming::for_channel(11); }

  std::uint32_t ack_wait_symbols() const { return timing().ack_wait_symbols(); }
  std::uint32_t max_frame_total_wait_symbols() const;

  PibResult get(PibAttribute id) const;
  Status set(PibAttribute id, const PibValue& value);

  /// With `set_default`, every attribute except the extended address returns
  /// to its default and DSN/BSN are drawn from `rng`. Otherwise the PIB is
  /// left untouched.
  void reset(bool set_default, RngStream& rng);

 private:
  const PhyPib* phy_ = nullptr;
};

}  // namespace lrwpan
