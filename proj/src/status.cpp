#include "lrwpan/status.hpp"

namespace lrwpan {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::Success:
      return "SUCCESS";
    case Status::Busy:
      return "BUSY";
    case Status::BusyRx:
      return "BUSY_RX";
    case Status::BusyTx:
      return "BUSY_TX";
    case Status::ForceTrxOff:
      return "FORCE_TRX_OFF";
    case Status::Idle:
      return "IDLE";
    case Status::RxOn:
      return "RX_ON";
    case Status::TrxOff:
      return "TRX_OFF";
    case Status::TxOn:
      return "TX_ON";
    case Status::UnsupportedAttribute:
      return "UNSUPPORTED_ATTRIBUTE";
    case Status::InvalidParameter:
      return "INVALID_PARAMETER";
    case Status::ReadOnly:
      return "READ_ONLY";
    case Status::BeaconLoss:
      return "BEACON_LOSS";
    case Status::ChannelAccessFailure:
      return "CHANNEL_ACCESS_FAILURE";
    case Status::Denied:
      return "DENIED";
    case Status::FrameTooLong:
      return "FRAME_TOO_LONG";
    case Status::InvalidGts:
      return "INVALID_GTS";
    case Status::NoAck:
      return "NO_ACK";
    case Status::NoBeacon:
      return "NO_BEACON";
    case Status::NoData:
      return "NO_DATA";
    case Status::NoShortAddress:
      return "NO_SHORT_ADDRESS";
    case Status::PanAccessDenied:
      return "PAN_ACCESS_DENIED";
    case Status::PanAtCapacity:
      return "PAN_AT_CAPACITY";
    case Status::ScanInProgress:
      return "SCAN_IN_PROGRESS";
    case Status::TransactionExpired:
      return "TRANSACTION_EXPIRED";
    case Status::TransactionOverflow:
      return "TRANSACTION_OVERFLOW";
  }
  return "?";
}

}  // namespace lrwpan
