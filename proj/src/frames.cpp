#include "lrwpan/frames.hpp"

#include <array>
#include <cstdio>

#include "lrwpan/constants.hpp"

namespace lrwpan {

namespace {

constexpr std::array<std::uint16_t, 256> make_crc_table() {
  std::array<std::uint16_t, 256> table{};
  for (std::uint32_t i = 0; i < 256; ++i) {
    std::uint16_t crc = static_cast<std::uint16_t>(i);
    for (int bit = 0; bit < 8; ++bit) {
      crc = (crc & 1) ? static_cast<std::uint16_t>((crc >> 1) ^ 0x8408) : static_cast<std::uint16_t>(crc >> 1);
    }
    table[i] = crc;
  }
  return table;
}

constexpr auto kCrcTable = make_crc_table();

void put16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put64(Bytes& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

/// Bounds-checked little-endian reader; running off the end is a truncation.
class Reader {
 public:
  explicit Reader(ByteView data) : data_(data) {}

  std::uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    const auto v = static_cast<std::uint16_t>(data_[pos_] | (data_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
    pos_ += 8;
    return v;
  }
  Bytes rest() {
    Bytes out(data_.begin() + static_cast<std::ptrdiff_t>(pos_), data_.end());
    pos_ = data_.size();
    return out;
  }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > data_.size()) throw FrameError(FrameErrc::Truncated, "field runs past end of buffer");
  }

  ByteView data_;
  std::size_t pos_ = 0;
};

std::size_t address_size(AddrMode m) {
  switch (m) {
    case AddrMode::None:
      return 0;
    case AddrMode::Short:
      return 2;
    case AddrMode::Extended:
      return 8;
  }
  return 0;
}

void put_address(Bytes& out, const MacAddress& a) {
  if (const auto* s = std::get_if<ShortAddress>(&a)) put16(out, s->value);
  if (const auto* e = std::get_if<ExtAddress>(&a)) put64(out, e->value);
}

MacAddress read_address(Reader& r, AddrMode m) {
  switch (m) {
    case AddrMode::Short:
      return ShortAddress{r.u16()};
    case AddrMode::Extended:
      return ExtAddress{r.u64()};
    case AddrMode::None:
      break;
  }
  return std::monostate{};
}

AddrMode decode_addr_mode(unsigned bits) {
  if (bits == 1) throw FrameError(FrameErrc::ReservedAddrMode, "addressing mode 1 is reserved");
  return static_cast<AddrMode>(bits);
}

void validate_addressing(const Frame& f) {
  const auto& fc = f.control;
  if (fc.dst_addr_mode != mode_of(f.dst) || fc.src_addr_mode != mode_of(f.src)) {
    throw FrameError(FrameErrc::InvalidAddressing, "address modes disagree with address fields");
  }
  const bool has_dst = fc.dst_addr_mode != AddrMode::None;
  const bool has_src = fc.src_addr_mode != AddrMode::None;
  if (has_dst != f.dst_pan.has_value()) {
    throw FrameError(FrameErrc::InvalidAddressing, "destination PAN present iff destination address");
  }
  if (fc.pan_id_compression) {
    if (!has_dst || !has_src) {
      throw FrameError(FrameErrc::InvalidAddressing, "PAN ID compression needs both addresses");
    }
    if (f.src_pan != f.dst_pan) {
      throw FrameError(FrameErrc::InvalidAddressing, "compressed source PAN must equal destination PAN");
    }
  } else if (has_src != f.src_pan.has_value()) {
    throw FrameError(FrameErrc::InvalidAddressing, "source PAN present iff source address");
  }
  if (fc.frame_type == FrameType::Ack && (has_dst || has_src || !f.payload.empty())) {
    throw FrameError(FrameErrc::InvalidAddressing, "acknowledgment frames carry no addressing or payload");
  }
  if ((fc.frame_type == FrameType::Command) != f.command.has_value()) {
    throw FrameError(FrameErrc::InvalidField, "command identifier present iff command frame");
  }
}

}  // namespace

std::string to_string(const MacAddress& a) {
  char buf[24];
  if (const auto* s = std::get_if<ShortAddress>(&a)) {
    std::snprintf(buf, sizeof buf, "0x%04x", s->value);
    return buf;
  }
  if (const auto* e = std::get_if<ExtAddress>(&a)) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(e->value));
    return buf;
  }
  return "-";
}

AddrMode mode_of(const MacAddress& a) {
  if (std::holds_alternative<ShortAddress>(a)) return AddrMode::Short;
  if (std::holds_alternative<ExtAddress>(a)) return AddrMode::Extended;
  return AddrMode::None;
}

std::string_view to_string(FrameType t) {
  switch (t) {
    case FrameType::Beacon:
      return "BEACON";
    case FrameType::Data:
      return "DATA";
    case FrameType::Ack:
      return "ACK";
    case FrameType::Command:
      return "CMD";
  }
  return "?";
}

std::string_view to_string(CommandId c) {
  switch (c) {
    case CommandId::AssociationRequest:
      return "ASSOCIATION_REQUEST";
    case CommandId::AssociationResponse:
      return "ASSOCIATION_RESPONSE";
    case CommandId::DisassociationNotification:
      return "DISASSOCIATION_NOTIFICATION";
    case CommandId::DataRequest:
      return "DATA_REQUEST";
    case CommandId::PanIdConflictNotification:
      return "PAN_ID_CONFLICT_NOTIFICATION";
    case CommandId::OrphanNotification:
      return "ORPHAN_NOTIFICATION";
    case CommandId::BeaconRequest:
      return "BEACON_REQUEST";
    case CommandId::CoordinatorRealignment:
      return "COORDINATOR_REALIGNMENT";
    case CommandId::GtsRequest:
      return "GTS_REQUEST";
  }
  return "?";
}

std::string_view to_string(FrameErrc e) {
  switch (e) {
    case FrameErrc::FrameTooLong:
      return "frame-too-long";
    case FrameErrc::SecurityUnsupported:
      return "security-unsupported";
    case FrameErrc::InvalidAddressing:
      return "invalid-addressing";
    case FrameErrc::FcsMismatch:
      return "fcs-mismatch";
    case FrameErrc::Truncated:
      return "truncated";
    case FrameErrc::ReservedAddrMode:
      return "reserved-addr-mode";
    case FrameErrc::UnknownFrameType:
      return "unknown-frame-type";
    case FrameErrc::UnknownCommand:
      return "unknown-command";
    case FrameErrc::InvalidField:
      return "invalid-field";
  }
  return "?";
}

FrameError::FrameError(FrameErrc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

std::uint16_t fcs(ByteView bytes) {
  std::uint16_t crc = 0;
  for (std::uint8_t b : bytes) crc = static_cast<std::uint16_t>((crc >> 8) ^ kCrcTable[(crc ^ b) & 0xFF]);
  return crc;
}

std::uint16_t encode_frame_control(const FrameControl& fc) {
  std::uint16_t w = static_cast<std::uint16_t>(fc.frame_type) & 0x7;
  if (fc.security_enabled) w |= 1u << 3;
  if (fc.frame_pending) w |= 1u << 4;
  if (fc.ack_request) w |= 1u << 5;
  if (fc.pan_id_compression) w |= 1u << 6;
  w |= static_cast<std::uint16_t>((static_cast<unsigned>(fc.dst_addr_mode) & 0x3) << 10);
  w |= static_cast<std::uint16_t>((static_cast<unsigned>(fc.frame_version) & 0x3) << 12);
  w |= static_cast<std::uint16_t>((static_cast<unsigned>(fc.src_addr_mode) & 0x3) << 14);
  return w;
}

FrameControl decode_frame_control(std::uint16_t w) {
  FrameControl fc;
  const unsigned type = w & 0x7;
  if (type > 3) throw FrameError(FrameErrc::UnknownFrameType, "frame type " + std::to_string(type));
  fc.frame_type = static_cast<FrameType>(type);
  fc.security_enabled = (w >> 3) & 1;
  fc.frame_pending = (w >> 4) & 1;
  fc.ack_request = (w >> 5) & 1;
  fc.pan_id_compression = (w >> 6) & 1;
  fc.dst_addr_mode = decode_addr_mode((w >> 10) & 0x3);
  const unsigned version = (w >> 12) & 0x3;
  if (version > 1) throw FrameError(FrameErrc::UnknownFrameType, "frame version " + std::to_string(version));
  fc.frame_version = static_cast<FrameVersion>(version);
  fc.src_addr_mode = decode_addr_mode((w >> 14) & 0x3);
  return fc;
}

std::size_t header_size(const Frame& f) {
  const auto& fc = f.control;
  std::size_t n = 3;  // frame control + sequence number
  if (fc.dst_addr_mode != AddrMode::None) n += 2 + address_size(fc.dst_addr_mode);
  if (fc.src_addr_mode != AddrMode::None) n += (fc.pan_id_compression ? 0 : 2) + address_size(fc.src_addr_mode);
  if (fc.frame_type == FrameType::Command) n += 1;
  return n;
}

std::size_t max_payload_size(const Frame& f) {
  const std::size_t overhead = header_size(f) + 2;
  return overhead >= kMaxPhyPacketSize ? 0 : kMaxPhyPacketSize - overhead;
}

Bytes encode_frame(const Frame& f) {
  if (f.control.security_enabled) {
    throw FrameError(FrameErrc::SecurityUnsupported, "auxiliary security header is not supported");
  }
  validate_addressing(f);
  const std::size_t total = header_size(f) + f.payload.size() + 2;
  if (total > kMaxPhyPacketSize) {
    throw FrameError(FrameErrc::FrameTooLong, std::to_string(total) + " bytes exceeds aMaxPHYPacketSize");
  }

  Bytes out;
  out.reserve(total);
  put16(out, encode_frame_control(f.control));
  out.push_back(f.sequence_number);
  if (f.dst_pan) put16(out, *f.dst_pan);
  put_address(out, f.dst);
  if (f.src_pan && !f.control.pan_id_compression) put16(out, *f.src_pan);
  put_address(out, f.src);
  if (f.command) out.push_back(static_cast<std::uint8_t>(*f.command));
  out.insert(out.end(), f.payload.begin(), f.payload.end());
  put16(out, fcs(out));
  return out;
}

Frame decode_frame(ByteView bytes) {
  if (bytes.size() < 5) throw FrameError(FrameErrc::Truncated, std::to_string(bytes.size()) + "-byte frame");
  if (bytes.size() > kMaxPhyPacketSize) throw FrameError(FrameErrc::FrameTooLong, "PSDU above 127 bytes");
  const auto body = bytes.first(bytes.size() - 2);
  const std::uint16_t received = static_cast<std::uint16_t>(bytes[bytes.size() - 2] | (bytes.back() << 8));
  if (fcs(body) != received) throw FrameError(FrameErrc::FcsMismatch, "frame check sequence does not match");

  Reader r(body);
  Frame f;
  f.control = decode_frame_control(r.u16());
  f.sequence_number = r.u8();
  const auto& fc = f.control;
  if (fc.pan_id_compression &&
      (fc.dst_addr_mode == AddrMode::None || fc.src_addr_mode == AddrMode::None)) {
    throw FrameError(FrameErrc::InvalidAddressing, "PAN ID compression without both addresses");
  }
  if (fc.dst_addr_mode != AddrMode::None) {
    f.dst_pan = r.u16();
    f.dst = read_address(r, fc.dst_addr_mode);
  }
  if (fc.src_addr_mode != AddrMode::None) {
    f.src_pan = fc.pan_id_compression ? f.dst_pan : std::optional<std::uint16_t>(r.u16());
    f.src = read_address(r, fc.src_addr_mode);
  }
  if (fc.frame_type == FrameType::Command && !fc.security_enabled) {
    const std::uint8_t id = r.u8();
    if (id < 0x01 || id > 0x09) throw FrameError(FrameErrc::UnknownCommand, "command id " + std::to_string(id));
    f.command = static_cast<CommandId>(id);
  }
  f.payload = r.rest();
  return f;
}

std::uint16_t encode_superframe_spec(const SuperframeSpec& s) {
  std::uint16_t w = s.beacon_order & 0xF;
  w |= static_cast<std::uint16_t>((s.superframe_order & 0xF) << 4);
  w |= static_cast<std::uint16_t>((s.final_cap_slot & 0xF) << 8);
  if (s.battery_life_extension) w |= 1u << 12;
  if (s.pan_coordinator) w |= 1u << 14;
  if (s.association_permit) w |= 1u << 15;
  return w;
}

SuperframeSpec decode_superframe_spec(std::uint16_t w) {
  SuperframeSpec s;
  s.beacon_order = w & 0xF;
  s.superframe_order = (w >> 4) & 0xF;
  s.final_cap_slot = (w >> 8) & 0xF;
  s.battery_life_extension = (w >> 12) & 1;
  s.pan_coordinator = (w >> 14) & 1;
  s.association_permit = (w >> 15) & 1;
  return s;
}

Bytes encode_beacon_fields(const BeaconFields& b) {
  if (b.gts.size() > kMaxGtsDescriptors) throw FrameError(FrameErrc::InvalidField, "more than 7 GTS descriptors");
  if (b.pending_short.size() + b.pending_ext.size() > kMaxBeaconPendingAddresses) {
    throw FrameError(FrameErrc::InvalidField, "more than 7 pending addresses");
  }
  Bytes out;
  put16(out, encode_superframe_spec(b.superframe));
  std::uint8_t gts_spec = static_cast<std::uint8_t>(b.gts.size());
  if (b.gts_permit) gts_spec |= 0x80;
  out.push_back(gts_spec);
  if (!b.gts.empty()) {
    std::uint8_t directions = 0;
    for (std::size_t i = 0; i < b.gts.size(); ++i) {
      if (b.gts[i].direction == GtsDirection::Receive) directions |= static_cast<std::uint8_t>(1u << i);
    }
    out.push_back(directions);
    for (const auto& g : b.gts) {
      if (g.starting_slot > 15 || g.length > 15) throw FrameError(FrameErrc::InvalidField, "GTS slot out of range");
      put16(out, g.device.value);
      out.push_back(static_cast<std::uint8_t>(g.starting_slot | (g.length << 4)));
    }
  }
  out.push_back(static_cast<std::uint8_t>(b.pending_short.size() | (b.pending_ext.size() << 4)));
  for (auto s : b.pending_short) put16(out, s.value);
  for (auto e : b.pending_ext) put64(out, e.value);
  out.insert(out.end(), b.beacon_payload.begin(), b.beacon_payload.end());
  return out;
}

BeaconFields decode_beacon_fields(ByteView bytes) {
  Reader r(bytes);
  BeaconFields b;
  b.superframe = decode_superframe_spec(r.u16());
  const std::uint8_t gts_spec = r.u8();
  b.gts_permit = gts_spec & 0x80;
  const unsigned gts_count = gts_spec & 0x7;
  if (gts_count > 0) {
    const std::uint8_t directions = r.u8();
    for (unsigned i = 0; i < gts_count; ++i) {
      GtsField g;
      g.device = ShortAddress{r.u16()};
      const std::uint8_t slot = r.u8();
      g.starting_slot = slot & 0xF;
      g.length = slot >> 4;
      g.direction = (directions >> i) & 1 ? GtsDirection::Receive : GtsDirection::Transmit;
      b.gts.push_back(g);
    }
  }
  const std::uint8_t pending_spec = r.u8();
  const unsigned n_short = pending_spec & 0x7;
  const unsigned n_ext = (pending_spec >> 4) & 0x7;
  for (unsigned i = 0; i < n_short; ++i) b.pending_short.push_back(ShortAddress{r.u16()});
  for (unsigned i = 0; i < n_ext; ++i) b.pending_ext.push_back(ExtAddress{r.u64()});
  b.beacon_payload = r.rest();
  return b;
}

std::uint8_t encode_capability(const CapabilityInfo& c) {
  std::uint8_t b = 0;
  if (c.alternate_pan_coordinator) b |= 1u << 0;
  if (c.full_function_device) b |= 1u << 1;
  if (c.mains_powered) b |= 1u << 2;
  if (c.rx_on_when_idle) b |= 1u << 3;
  if (c.security) b |= 1u << 6;
  if (c.allocate_address) b |= 1u << 7;
  return b;
}

CapabilityInfo decode_capability(std::uint8_t b) {
  return CapabilityInfo{static_cast<bool>(b & 0x01), static_cast<bool>(b & 0x02), static_cast<bool>(b & 0x04),
                        static_cast<bool>(b & 0x08), static_cast<bool>(b & 0x40), static_cast<bool>(b & 0x80)};
}

Bytes encode_association_response(const AssociationResponse& r) {
  Bytes out;
  put16(out, r.short_address.value);
  out.push_back(static_cast<std::uint8_t>(r.status));
  return out;
}

AssociationResponse decode_association_response(ByteView payload) {
  Reader r(payload);
  AssociationResponse resp;
  resp.short_address = ShortAddress{r.u16()};
  const std::uint8_t status = r.u8();
  if (status > 2) throw FrameError(FrameErrc::InvalidField, "association status " + std::to_string(status));
  resp.status = static_cast<AssociationStatus>(status);
  return resp;
}

std::uint8_t encode_gts_characteristics(const GtsCharacteristics& c) {
  std::uint8_t b = c.length & 0xF;
  if (c.direction == GtsDirection::Receive) b |= 1u << 4;
  if (c.allocate) b |= 1u << 5;
  return b;
}

GtsCharacteristics decode_gts_characteristics(std::uint8_t b) {
  return GtsCharacteristics{static_cast<std::uint8_t>(b & 0xF),
                            (b >> 4) & 1 ? GtsDirection::Receive : GtsDirection::Transmit,
                            static_cast<bool>((b >> 5) & 1)};
}

Bytes encode_coordinator_realignment(const CoordinatorRealignment& r) {
  Bytes out;
  put16(out, r.pan_id);
  put16(out, r.coord_short.value);
  out.push_back(r.channel);
  put16(out, r.short_address.value);
  return out;
}

CoordinatorRealignment decode_coordinator_realignment(ByteView payload) {
  Reader r(payload);
  CoordinatorRealignment c;
  c.pan_id = r.u16();
  c.coord_short = ShortAddress{r.u16()};
  c.channel = r.u8();
  c.short_address = ShortAddress{r.u16()};
  return c;
}

Frame make_ack(std::uint8_t seq, bool frame_pending) {
  Frame f;
  f.control.frame_type = FrameType::Ack;
  f.control.frame_pending = frame_pending;
  f.sequence_number = seq;
  return f;
}

}  // namespace lrwpan
