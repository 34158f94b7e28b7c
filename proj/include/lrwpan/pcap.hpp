#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lrwpan/frames.hpp"
#include "lrwpan/sim_time.hpp"

namespace lrwpan {

/// LINKTYPE_IEEE802_15_4_WITHFCS.
inline constexpr std::uint32_t kPcapLinkType = 195;

/// One PSDU as it went on air.
struct CaptureRecord {
  SimTime time;
  Bytes psdu;
  friend bool operator==(const CaptureRecord&, const CaptureRecord&) = default;
};

/// Classic little-endian pcap with microsecond timestamps.
void write_pcap(std::ostream& os, std::span<const CaptureRecord> records);
/// Throws std::runtime_error naming the path when the file cannot be written.
void write_pcap_file(const std::string& path, std::span<const CaptureRecord> records);

/// Reads a file written by write_pcap. Throws std::runtime_error on a
/// malformed stream or an unexpected link type.
std::vector<CaptureRecord> read_pcap(std::istream& is);

}  // namespace lrwpan
