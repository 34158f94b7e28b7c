#pragma once

#include <cstdint>
#include <string_view>

namespace lrwpan {

/// Status codes carried by confirm primitives, named after the standard's
/// PHY and MAC enumerations.
enum class Status : std::uint8_t {
  Success,
  // PHY
  Busy,
  BusyRx,
  BusyTx,
  ForceTrxOff,
  Idle,
  RxOn,
  TrxOff,
  TxOn,
  // PIB access
  UnsupportedAttribute,
  InvalidParameter,
  ReadOnly,
  // MAC
  BeaconLoss,
  ChannelAccessFailure,
  Denied,
  FrameTooLong,
  InvalidGts,
  NoAck,
  NoBeacon,
  NoData,
  NoShortAddress,
  PanAccessDenied,
  PanAtCapacity,
  ScanInProgress,
  TransactionExpired,
  TransactionOverflow,
};

std::string_view to_string(Status s);

}  // namespace lrwpan
