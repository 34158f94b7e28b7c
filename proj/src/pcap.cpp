#include "lrwpan/pcap.hpp"

#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lrwpan {

namespace {

constexpr std::uint32_t kMagic = 0xA1B2C3D4;
constexpr std::uint32_t kSnapLen = 65535;

void put32(std::ostream& os, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v), static_cast<char>(v >> 8), static_cast<char>(v >> 16),
                              static_cast<char>(v >> 24)};
  os.write(b.data(), b.size());
}

void put16(std::ostream& os, std::uint16_t v) {
  const std::array<char, 2> b{static_cast<char>(v), static_cast<char>(v >> 8)};
  os.write(b.data(), b.size());
}

std::uint32_t get32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), b.size())) throw std::runtime_error("pcap: truncated");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

void write_pcap(std::ostream& os, std::span<const CaptureRecord> records) {
  put32(os, kMagic);
  put16(os, 2);
  put16(os, 4);
  put32(os, 0);  // thiszone
  put32(os, 0);  // sigfigs
  put32(os, kSnapLen);
  put32(os, kPcapLinkType);
  for (const auto& r : records) {
    const auto us = r.time.us();
    put32(os, static_cast<std::uint32_t>(us / 1'000'000));
    put32(os, static_cast<std::uint32_t>(us % 1'000'000));
    put32(os, static_cast<std::uint32_t>(r.psdu.size()));
    put32(os, static_cast<std::uint32_t>(r.psdu.size()));
    os.write(reinterpret_cast<const char*>(r.psdu.data()), static_cast<std::streamsize>(r.psdu.size()));
  }
}

void write_pcap_file(const std::string& path, std::span<const CaptureRecord> records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open pcap file '" + path + "' for writing");
  write_pcap(out, records);
  out.flush();
  if (!out) throw std::runtime_error("failed writing pcap file '" + path + "'");
}

std::vector<CaptureRecord> read_pcap(std::istream& is) {
  if (get32(is) != kMagic) throw std::runtime_error("pcap: bad magic");
  get32(is);  // version
  get32(is);  // thiszone
  get32(is);  // sigfigs
  get32(is);  // snaplen
  if (get32(is) != kPcapLinkType) throw std::runtime_error("pcap: unexpected link type");
  std::vector<CaptureRecord> out;
  while (is.peek() != std::char_traits<char>::eof()) {
    const std::uint64_t sec = get32(is);
    const std::uint64_t usec = get32(is);
    const std::uint32_t incl = get32(is);
    get32(is);  // orig_len
    Bytes psdu(incl);
    if (!is.read(reinterpret_cast<char*>(psdu.data()), incl)) throw std::runtime_error("pcap: truncated record");
    out.push_back({SimTime{sec * 1'000'000 + usec}, std::move(psdu)});
  }
  return out;
}

}  // namespace lrwpan
