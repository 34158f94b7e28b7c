#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "lrwpan/frames.hpp"
#include "lrwpan/primitives.hpp"
#include "lrwpan/rng.hpp"

namespace lrwpan {

class Mac;

/// Application data unit handed to an adapter.
struct AppPayload {
  std::uint16_t dst_pan = 0xFFFF;
  MacAddress dst;
  Bytes bytes;
  TxOptions qos;
};

/// Result of mapping an application unit onto MCPS-DATA.request parameters.
/// `request` is set only when `status` is SUCCESS.
struct Adapted {
  Status status = Status::Success;
  std::optional<McpsDataRequest> request;
};

/// Largest MSDU the MAC accepts for this addressing. `src_pan` is the
/// sender's own PAN identifier (it decides PAN ID compression).
std::size_t msdu_budget(std::uint16_t dst_pan, const MacAddress& dst, AddrMode src_mode, std::uint16_t src_pan);

/// One-to-one mapping of an application unit onto MCPS-DATA.request.
Adapted sscs_map(const AppPayload& p, AddrMode src_mode, std::uint16_t src_pan, std::uint8_t handle);

/// Byte-transparent wrapping of a raw packet with the scenario's default
/// transmit options.
Adapted llc_convert(Bytes packet, std::uint16_t dst_pan, const MacAddress& dst, const TxOptions& defaults,
                    AddrMode src_mode, std::uint16_t src_pan, std::uint8_t handle);

/// Convergence sublayer bound to one MAC. Rejects oversize units before they
/// reach the MAC and relays data confirms to the application.
class Sscs {
 public:
  using ConfirmHandler = std::function<void(const McpsDataConfirm&)>;

  explicit Sscs(Mac& mac) : mac_(mac) {}

  void set_confirm_handler(ConfirmHandler handler) { on_confirm_ = std::move(handler); }

  /// SUCCESS when the request was passed to the MAC; the outcome follows as
  /// a confirm. FRAME_TOO_LONG is returned directly.
  Status data_request(const AppPayload& p, std::uint8_t handle);
  /// Same, for a raw packet with default options.
  Status llc_request(Bytes packet, std::uint16_t dst_pan, const MacAddress& dst, const TxOptions& defaults,
                     std::uint8_t handle);

  /// Called by the node for every MCPS-DATA.confirm.
  void relay_confirm(const McpsDataConfirm& c) const {
    if (on_confirm_) on_confirm_(c);
  }

 private:
  Status submit(Adapted a);
  AddrMode src_mode() const;

  Mac& mac_;
  ConfirmHandler on_confirm_;
};

enum class TrafficPattern : std::uint8_t { Periodic, Poisson };

struct TrafficConfig {
  TrafficPattern pattern = TrafficPattern::Periodic;
  SimTime interval = SimTime::from_ms(100);  // period, or mean inter-arrival
  std::size_t payload_size = 20;
  SimTime start;
  SimTime stop = SimTime::max();
  TxOptions options;
};

/// Next send time after a send at `now`, or nullopt once it reaches `stop`.
/// Poisson inter-arrivals are rounded to whole ticks.
std::optional<SimTime> traffic_next(const TrafficConfig& cfg, SimTime now, RngStream& rng);

/// First send time (the start time itself), or nullopt for an empty window.
std::optional<SimTime> traffic_first(const TrafficConfig& cfg);

}  // namespace lrwpan
