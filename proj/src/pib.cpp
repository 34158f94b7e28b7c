#include "lrwpan/pib.hpp"

#include <algorithm>
#include <array>

namespace lrwpan {

namespace {

struct AttributeInfo {
  PibAttribute id;
  std::string_view name;
  PibKind kind;
};

constexpr std::array kAttributes{
    AttributeInfo{PibAttribute::phyCurrentChannel, "phyCurrentChannel", PibKind::Integer},
    AttributeInfo{PibAttribute::phyChannelsSupported, "phyChannelsSupported", PibKind::Integer},
    AttributeInfo{PibAttribute::phyTransmitPower, "phyTransmitPower", PibKind::Integer},
    AttributeInfo{PibAttribute::phyCCAMode, "phyCCAMode", PibKind::Integer},
    AttributeInfo{PibAttribute::phyCurrentPage, "phyCurrentPage", PibKind::Integer},
    AttributeInfo{PibAttribute::phyMaxFrameDuration, "phyMaxFrameDuration", PibKind::Integer},
    AttributeInfo{PibAttribute::phySHRDuration, "phySHRDuration", PibKind::Integer},
    AttributeInfo{PibAttribute::phySymbolsPerOctet, "phySymbolsPerOctet", PibKind::Integer},
    AttributeInfo{PibAttribute::macAckWaitDuration, "macAckWaitDuration", PibKind::Integer},
    AttributeInfo{PibAttribute::macAssociationPermit, "macAssociationPermit", PibKind::Bool},
    AttributeInfo{PibAttribute::macAutoRequest, "macAutoRequest", PibKind::Bool},
    AttributeInfo{PibAttribute::macBattLifeExt, "macBattLifeExt", PibKind::Bool},
    AttributeInfo{PibAttribute::macBattLifeExtPeriods, "macBattLifeExtPeriods", PibKind::Integer},
    AttributeInfo{PibAttribute::macBeaconOrder, "macBeaconOrder", PibKind::Integer},
    AttributeInfo{PibAttribute::macBSN, "macBSN", PibKind::Integer},
    AttributeInfo{PibAttribute::macCoordExtendedAddress, "macCoordExtendedAddress", PibKind::Extended},
    AttributeInfo{PibAttribute::macCoordShortAddress, "macCoordShortAddress", PibKind::Integer},
    AttributeInfo{PibAttribute::macDSN, "macDSN", PibKind::Integer},
    AttributeInfo{PibAttribute::macGTSPermit, "macGTSPermit", PibKind::Bool},
    AttributeInfo{PibAttribute::macMaxCSMABackoffs, "macMaxCSMABackoffs", PibKind::Integer},
    AttributeInfo{PibAttribute::macMinBE, "macMinBE", PibKind::Integer},
    AttributeInfo{PibAttribute::macPANId, "macPANId", PibKind::Integer},
    AttributeInfo{PibAttribute::macPromiscuousMode, "macPromiscuousMode", PibKind::Bool},
    AttributeInfo{PibAttribute::macRxOnWhenIdle, "macRxOnWhenIdle", PibKind::Bool},
    AttributeInfo{PibAttribute::macShortAddress, "macShortAddress", PibKind::Integer},
    AttributeInfo{PibAttribute::macSuperframeOrder, "macSuperframeOrder", PibKind::Integer},
    AttributeInfo{PibAttribute::macTransactionPersistenceTime, "macTransactionPersistenceTime", PibKind::Integer},
    AttributeInfo{PibAttribute::macAssociatedPANCoord, "macAssociatedPANCoord", PibKind::Bool},
    AttributeInfo{PibAttribute::macMaxBE, "macMaxBE", PibKind::Integer},
    AttributeInfo{PibAttribute::macMaxFrameTotalWaitTime, "macMaxFrameTotalWaitTime", PibKind::Integer},
    AttributeInfo{PibAttribute::macMaxFrameRetries, "macMaxFrameRetries", PibKind::Integer},
    AttributeInfo{PibAttribute::macResponseWaitTime, "macResponseWaitTime", PibKind::Integer},
    AttributeInfo{PibAttribute::macExtendedAddress, "macExtendedAddress", PibKind::Extended},
};

const AttributeInfo* find(PibAttribute id) {
  for (const auto& a : kAttributes) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

PibResult ok(std::int64_t v) { return {Status::Success, v}; }
PibResult ok(bool v) { return {Status::Success, v}; }
PibResult ok(ExtAddress v) { return {Status::Success, v}; }
PibResult unsupported() { return {Status::UnsupportedAttribute, std::int64_t{0}}; }

/// Integer payload of `v` if it lies in [lo, hi].
std::optional<std::int64_t> int_in(const PibValue& v, std::int64_t lo, std::int64_t hi) {
  const auto* i = std::get_if<std::int64_t>(&v);
  if (!i || *i < lo || *i > hi) return std::nullopt;
  return *i;
}

}  // namespace

std::string_view to_string(PibAttribute a) {
  const auto* info = find(a);
  return info ? info->name : "unknown";
}

std::optional<PibAttribute> pib_attribute_from_name(std::string_view name) {
  for (const auto& a : kAttributes) {
    if (a.name == name) return a.id;
  }
  return std::nullopt;
}

PibKind kind_of(PibAttribute a) {
  const auto* info = find(a);
  return info ? info->kind : PibKind::Integer;
}

bool is_phy_attribute(PibAttribute a) { return static_cast<std::uint16_t>(a) < 0x40; }

PibResult PhyPib::get(PibAttribute id) const {
  const auto t = timing();
  switch (id) {
    case PibAttribute::phyCurrentChannel:
      return ok(std::int64_t{current_channel});
    case PibAttribute::phyChannelsSupported:
      return ok(std::int64_t{channels_supported});
    case PibAttribute::phyTransmitPower:
      return ok(std::int64_t{transmit_power_dbm});
    case PibAttribute::phyCCAMode:
      return ok(std::int64_t{cca_mode});
    case PibAttribute::phyCurrentPage:
      return ok(std::int64_t{current_page});
    case PibAttribute::phyMaxFrameDuration:
      return ok(std::int64_t{t.max_frame_symbols()});
    case PibAttribute::phySHRDuration:
      return ok(std::int64_t{t.shr_symbols});
    case PibAttribute::phySymbolsPerOctet:
      return ok(std::int64_t{t.symbols_per_octet()});
    default:
      return unsupported();
  }
}

Status PhyPib::set(PibAttribute id, const PibValue& value) {
  switch (id) {
    case PibAttribute::phyCurrentChannel: {
      auto v = int_in(value, 0, 26);
      if (!v || !((channels_supported >> *v) & 1)) return Status::InvalidParameter;
      current_channel = static_cast<std::uint8_t>(*v);
      return Status::Success;
    }
    case PibAttribute::phyTransmitPower: {
      auto v = int_in(value, -32, 31);
      if (!v) return Status::InvalidParameter;
      transmit_power_dbm = static_cast<std::int8_t>(*v);
      return Status::Success;
    }
    case PibAttribute::phyCCAMode: {
      auto v = int_in(value, 1, 3);
      if (!v) return Status::InvalidParameter;
      cca_mode = static_cast<std::uint8_t>(*v);
      return Status::Success;
    }
    case PibAttribute::phyCurrentPage: {
      auto v = int_in(value, 0, 31);
      if (!v) return Status::InvalidParameter;
      current_page = static_cast<std::uint8_t>(*v);
      return Status::Success;
    }
    case PibAttribute::phyChannelsSupported:
    case PibAttribute::phyMaxFrameDuration:
    case PibAttribute::phySHRDuration:
    case PibAttribute::phySymbolsPerOctet:
      return Status::ReadOnly;
    default:
      return Status::UnsupportedAttribute;
  }
}

std::uint32_t MacPib::max_frame_total_wait_symbols() const {
  const std::uint32_t m = std::min<std::uint32_t>(max_be - min_be, max_csma_backoffs);
  std::uint32_t periods = 0;
  for (std::uint32_t k = 0; k < m; ++k) periods += 1u << (min_be + k);
  periods += ((1u << max_be) - 1) * (max_csma_backoffs - m);
  return periods * kUnitBackoffSymbols + timing().max_frame_symbols();
}

PibResult MacPib::get(PibAttribute id) const {
  switch (id) {
    case PibAttribute::macAckWaitDuration:
      return ok(std::int64_t{ack_wait_symbols()});
    case PibAttribute::macAssociationPermit:
      return ok(association_permit);
    case PibAttribute::macAutoRequest:
      return ok(auto_request);
    case PibAttribute::macBattLifeExt:
      return ok(batt_life_ext);
    case PibAttribute::macBattLifeExtPeriods:
      return ok(std::int64_t{batt_life_ext_periods});
    case PibAttribute::macBeaconOrder:
      return ok(std::int64_t{beacon_order});
    case PibAttribute::macBSN:
      return ok(std::int64_t{bsn});
    case PibAttribute::macCoordExtendedAddress:
      return ok(coord_extended_address);
    case PibAttribute::macCoordShortAddress:
      return ok(std::int64_t{coord_short_address.value});
    case PibAttribute::macDSN:
      return ok(std::int64_t{dsn});
    case PibAttribute::macGTSPermit:
      return ok(gts_permit);
    case PibAttribute::macMaxCSMABackoffs:
      return ok(std::int64_t{max_csma_backoffs});
    case PibAttribute::macMinBE:
      return ok(std::int64_t{min_be});
    case PibAttribute::macPANId:
      return ok(std::int64_t{pan_id});
    case PibAttribute::macPromiscuousMode:
      return ok(promiscuous_mode);
    case PibAttribute::macRxOnWhenIdle:
      return ok(rx_on_when_idle);
    case PibAttribute::macShortAddress:
      return ok(std::int64_t{short_address.value});
    case PibAttribute::macSuperframeOrder:
      return ok(std::int64_t{superframe_order});
    case PibAttribute::macTransactionPersistenceTime:
      return ok(std::int64_t{transaction_persistence_time});
    case PibAttribute::macAssociatedPANCoord:
      return ok(associated_pan_coord);
    case PibAttribute::macMaxBE:
      return ok(std::int64_t{max_be});
    case PibAttribute::macMaxFrameTotalWaitTime:
      return ok(std::int64_t{max_frame_total_wait_symbols()});
    case PibAttribute::macMaxFrameRetries:
      return ok(std::int64_t{max_frame_retries});
    case PibAttribute::macResponseWaitTime:
      return ok(std::int64_t{response_wait_time});
    case PibAttribute::macExtendedAddress:
      return ok(extended_address);
    default:
      return unsupported();
  }
}

Status MacPib::set(PibAttribute id, const PibValue& value) {
  const auto set_bool = [&](bool& field) {
    const auto* b = std::get_if<bool>(&value);
    if (!b) return Status::InvalidParameter;
    field = *b;
    return Status::Success;
  };
  const auto set_ext = [&](ExtAddress& field) {
    const auto* e = std::get_if<ExtAddress>(&value);
    if (!e) return Status::InvalidParameter;
    field = *e;
    return Status::Success;
  };
  const auto set_int = [&]<typename T>(T& field, std::int64_t lo, std::int64_t hi) {
    const auto v = int_in(value, lo, hi);
    if (!v) return Status::InvalidParameter;
    field = static_cast<T>(*v);
    return Status::Success;
  };

  switch (id) {
    case PibAttribute::macAckWaitDuration:
    case PibAttribute::macMaxFrameTotalWaitTime:
      return Status::ReadOnly;
    case PibAttribute::macAssociationPermit:
      return set_bool(association_permit);
    case PibAttribute::macAutoRequest:
      return set_bool(auto_request);
    case PibAttribute::macBattLifeExt:
      return set_bool(batt_life_ext);
    case PibAttribute::macBattLifeExtPeriods:
      return set_int(batt_life_ext_periods, 6, 41);
    case PibAttribute::macBeaconOrder:
      return set_int(beacon_order, 0, 15);
    case PibAttribute::macBSN:
      return set_int(bsn, 0, 0xFF);
    case PibAttribute::macCoordExtendedAddress:
      return set_ext(coord_extended_address);
    case PibAttribute::macCoordShortAddress:
      return set_int(coord_short_address.value, 0, 0xFFFF);
    case PibAttribute::macDSN:
      return set_int(dsn, 0, 0xFF);
    case PibAttribute::macGTSPermit:
      return set_bool(gts_permit);
    case PibAttribute::macMaxCSMABackoffs:
      return set_int(max_csma_backoffs, 0, 5);
    case PibAttribute::macMinBE:
      return set_int(min_be, 0, max_be);
    case PibAttribute::macPANId:
      return set_int(pan_id, 0, 0xFFFF);
    case PibAttribute::macPromiscuousMode:
      return set_bool(promiscuous_mode);
    case PibAttribute::macRxOnWhenIdle:
      return set_bool(rx_on_when_idle);
    case PibAttribute::macShortAddress:
      return set_int(short_address.value, 0, 0xFFFF);
    case PibAttribute::macSuperframeOrder:
      return set_int(superframe_order, 0, 15);
    case PibAttribute::macTransactionPersistenceTime:
      return set_int(transaction_persistence_time, 0, 0xFFFF);
    case PibAttribute::macAssociatedPANCoord:
      return set_bool(associated_pan_coord);
    case PibAttribute::macMaxBE:
      return set_int(max_be, std::max<std::int64_t>(3, min_be), 8);
    case PibAttribute::macMaxFrameRetries:
      return set_int(max_frame_retries, 0, 7);
    case PibAttribute::macResponseWaitTime:
      return set_int(response_wait_time, 2, 64);
    case PibAttribute::macExtendedAddress:
      return set_ext(extended_address);
    default:
      return Status::UnsupportedAttribute;
  }
}

void MacPib::reset(bool set_default, RngStream& rng) {
  if (!set_default) return;
  const ExtAddress ext = extended_address;
  const PhyPib* phy = phy_;
  *this = MacPib{};
  extended_address = ext;
  phy_ = phy;
  dsn = static_cast<std::uint8_t>(rng.below(256));
  bsn = static_cast<std::uint8_t>(rng.below(256));
}

}  // namespace lrwpan
