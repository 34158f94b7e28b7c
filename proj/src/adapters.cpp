#include "lrwpan/adapters.hpp"

#include <cmath>

#include "lrwpan/mac.hpp"

namespace lrwpan {

std::size_t msdu_budget(std::uint16_t dst_pan, const MacAddress& dst, AddrMode src_mode, std::uint16_t src_pan) {
  Frame f;
  f.control.frame_type = FrameType::Data;
  f.control.dst_addr_mode = mode_of(dst);
  f.control.src_addr_mode = src_mode;
  f.control.pan_id_compression = f.control.dst_addr_mode != AddrMode::None && src_mode != AddrMode::None &&
                                 dst_pan == src_pan;
  return max_payload_size(f);
}

Adapted sscs_map(const AppPayload& p, AddrMode src_mode, std::uint16_t src_pan, std::uint8_t handle) {
  if (p.bytes.size() > msdu_budget(p.dst_pan, p.dst, src_mode, src_pan)) return {Status::FrameTooLong, std::nullopt};
  McpsDataRequest r;
  r.src_addr_mode = src_mode;
  r.dst_pan = p.dst_pan;
  r.dst = p.dst;
  r.msdu = p.bytes;
  r.handle = handle;
  r.options = p.qos;
  return {Status::Success, std::move(r)};
}

Adapted llc_convert(Bytes packet, std::uint16_t dst_pan, const MacAddress& dst, const TxOptions& defaults,
                    AddrMode src_mode, std::uint16_t src_pan, std::uint8_t handle) {
  return sscs_map(AppPayload{dst_pan, dst, std::move(packet), defaults}, src_mode, src_pan, handle);
}

AddrMode Sscs::src_mode() const {
  return mac_.pib().short_address.value < 0xFFFE ? AddrMode::Short : AddrMode::Extended;
}

Status Sscs::submit(Adapted a) {
  if (a.status != Status::Success) return a.status;
  mac_.mcps_data_request(std::move(*a.request));
  return Status::Success;
}

Status Sscs::data_request(const AppPayload& p, std::uint8_t handle) {
  return submit(sscs_map(p, src_mode(), mac_.pib().pan_id, handle));
}

Status Sscs::llc_request(Bytes packet, std::uint16_t dst_pan, const MacAddress& dst, const TxOptions& defaults,
                         std::uint8_t handle) {
  return submit(llc_convert(std::move(packet), dst_pan, dst, defaults, src_mode(), mac_.pib().pan_id, handle));
}

std::optional<SimTime> traffic_first(const TrafficConfig& cfg) {
  if (cfg.start >= cfg.stop) return std::nullopt;
  return cfg.start;
}

std::optional<SimTime> traffic_next(const TrafficConfig& cfg, SimTime now, RngStream& rng) {
  SimTime gap = cfg.interval;
  if (cfg.pattern == TrafficPattern::Poisson) {
    gap = SimTime{static_cast<std::uint64_t>(std::llround(rng.exponential(static_cast<double>(cfg.interval.us()))))};
  }
  const SimTime next = now + gap;
  if (next >= cfg.stop) return std::nullopt;
  return next;
}

}  // namespace lrwpan
