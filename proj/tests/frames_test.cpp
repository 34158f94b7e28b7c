#include <gtest/gtest.h>

#include <string>

#include "lrwpan/frames.hpp"
#include "support.hpp"

namespace lrwpan {
namespace {

using test::crc16_bitwise;
using test::pack_frame_control;
using test::pack_superframe_spec;

Bytes ascii(std::string_view s) { return Bytes(s.begin(), s.end()); }

TEST(Fcs, CheckValue) {
  const Bytes check = ascii("123456789");
  EXPECT_EQ(crc16_bitwise(check), 0x2189);
  EXPECT_EQ(fcs(check), 0x2189);
}

TEST(Fcs, MatchesBitwiseOracleOnRandomInputs) {
  RngStream rng(5);
  for (int i = 0; i < 2000; ++i) {
    Bytes b(rng.below(128));
    for (auto& x : b) x = static_cast<std::uint8_t>(rng.below(256));
    ASSERT_EQ(fcs(b), crc16_bitwise(b));
  }
}

TEST(FrameControl, DefaultIsZero) { EXPECT_EQ(encode_frame_control(FrameControl{}), 0x0000); }

TEST(FrameControl, DataWithAckAndCompression) {
  FrameControl fc;
  fc.frame_type = FrameType::Data;
  fc.ack_request = true;
  fc.pan_id_compression = true;
  fc.dst_addr_mode = AddrMode::Short;
  fc.src_addr_mode = AddrMode::Short;
  EXPECT_EQ(pack_frame_control(1, false, false, true, true, 2, 0, 2), 0x8861);
  EXPECT_EQ(encode_frame_control(fc), 0x8861);
  EXPECT_EQ(decode_frame_control(0x8861), fc);
}

TEST(FrameControl, BeaconShortSource) {
  FrameControl fc;
  fc.frame_type = FrameType::Beacon;
  fc.src_addr_mode = AddrMode::Short;
  EXPECT_EQ(pack_frame_control(0, false, false, false, false, 0, 0, 2), 0x8000);
  EXPECT_EQ(encode_frame_control(fc), 0x8000);
}

TEST(FrameControl, EveryFieldCombinationMatchesOracle) {
  const AddrMode modes[] = {AddrMode::None, AddrMode::Short, AddrMode::Extended};
  for (unsigned type = 0; type < 4; ++type)
    for (unsigned flags = 0; flags < 16; ++flags)
      for (AddrMode d : modes)
        for (AddrMode s : modes)
          for (unsigned v = 0; v < 2; ++v) {
            FrameControl fc;
            fc.frame_type = static_cast<FrameType>(type);
            fc.security_enabled = flags & 1;
            fc.frame_pending = flags & 2;
            fc.ack_request = flags & 4;
            fc.pan_id_compression = flags & 8;
            fc.dst_addr_mode = d;
            fc.src_addr_mode = s;
            fc.frame_version = static_cast<FrameVersion>(v);
            const auto expect = pack_frame_control(type, flags & 1, flags & 2, flags & 4, flags & 8,
                                                   static_cast<unsigned>(d), v, static_cast<unsigned>(s));
            ASSERT_EQ(encode_frame_control(fc), expect);
            ASSERT_EQ(decode_frame_control(expect), fc);
          }
}

TEST(FrameControl, ReservedAddressModeRejected) {
  const auto word = pack_frame_control(1, false, false, false, false, 1, 0, 0);
  try {
    decode_frame_control(word);
    FAIL();
  } catch (const FrameError& e) {
    EXPECT_EQ(e.code(), FrameErrc::ReservedAddrMode);
  }
}

TEST(Frame, AckIsFiveBytes) {
  const Bytes wire = encode_frame(make_ack(7, false));
  ASSERT_EQ(wire.size(), 5u);
  EXPECT_EQ(wire[2], 7);
  EXPECT_EQ(decode_frame(wire), make_ack(7, false));
}

Frame command_frame(std::size_t payload) {
  // 9-byte MHR (compressed PAN, short destination, short source) plus the
  // command identifier: a 10-byte header.
  Frame f;
  f.control.frame_type = FrameType::Command;
  f.control.pan_id_compression = true;
  f.control.dst_addr_mode = AddrMode::Short;
  f.control.src_addr_mode = AddrMode::Short;
  f.dst_pan = 0x1234;
  f.src_pan = 0x1234;
  f.dst = ShortAddress{0};
  f.src = ShortAddress{1};
  f.command = CommandId::DataRequest;
  f.payload.assign(payload, 0x55);
  return f;
}

TEST(Frame, LengthLimit) {
  EXPECT_EQ(header_size(command_frame(0)), 10u);
  EXPECT_EQ(max_payload_size(command_frame(0)), 115u);
  EXPECT_EQ(encode_frame(command_frame(115)).size(), 127u);
  try {
    encode_frame(command_frame(116));
    FAIL();
  } catch (const FrameError& e) {
    EXPECT_EQ(e.code(), FrameErrc::FrameTooLong);
  }
}

TEST(Frame, OneByteInputIsTruncated) {
  const Bytes one{0x01};
  try {
    decode_frame(one);
    FAIL();
  } catch (const FrameError& e) {
    EXPECT_EQ(e.code(), FrameErrc::Truncated);
  }
}

TEST(Frame, SecurityRejected) {
  Frame f = command_frame(0);
  f.control.security_enabled = true;
  try {
    encode_frame(f);
    FAIL();
  } catch (const FrameError& e) {
    EXPECT_EQ(e.code(), FrameErrc::SecurityUnsupported);
  }
}

TEST(Frame, InconsistentAddressingRejected) {
  Frame f = command_frame(0);
  f.dst = std::monostate{};
  EXPECT_THROW(encode_frame(f), FrameError);
}

TEST(Frame, RandomRoundTrip) {
  RngStream rng(99);
  for (int i = 0; i < 5000; ++i) {
    const Frame f = test::random_frame(rng);
    const Bytes wire = encode_frame(f);
    ASSERT_EQ(wire.size(), header_size(f) + f.payload.size() + 2);
    ASSERT_EQ(decode_frame(wire), f);
  }
}

TEST(Frame, EverySingleBitFlipIsDetected) {
  const Bytes wire = encode_frame(command_frame(40));
  for (std::size_t bit = 0; bit < wire.size() * 8; ++bit) {
    Bytes bad = wire;
    bad[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
    try {
      decode_frame(bad);
      FAIL() << "bit " << bit;
    } catch (const FrameError& e) {
      ASSERT_EQ(e.code(), FrameErrc::FcsMismatch) << "bit " << bit;
    }
  }
}

TEST(SuperframeSpec, ZeroAndExample) {
  EXPECT_EQ(encode_superframe_spec(SuperframeSpec{0, 0, 0, false, false, false}), 0x0000);
  const SuperframeSpec s{6, 4, 15, false, true, true};
  EXPECT_EQ(pack_superframe_spec(6, 4, 15, false, true, true), 0xCF46);
  EXPECT_EQ(encode_superframe_spec(s), 0xCF46);
  EXPECT_EQ(decode_superframe_spec(0xCF46), s);
}

TEST(SuperframeSpec, AllFieldsMatchOracle) {
  for (unsigned bo = 0; bo < 16; ++bo)
    for (unsigned so = 0; so < 16; ++so)
      for (unsigned cap = 0; cap < 16; cap += 5)
        for (unsigned flags = 0; flags < 8; ++flags) {
          const SuperframeSpec s{static_cast<std::uint8_t>(bo), static_cast<std::uint8_t>(so),
                                 static_cast<std::uint8_t>(cap), (flags & 1) != 0, (flags & 2) != 0, (flags & 4) != 0};
          const auto w = pack_superframe_spec(bo, so, cap, flags & 1, flags & 2, flags & 4);
          ASSERT_EQ(encode_superframe_spec(s), w);
          ASSERT_EQ(decode_superframe_spec(w), s);
        }
}

TEST(BeaconFields, RoundTrip) {
  BeaconFields b;
  b.superframe = SuperframeSpec{6, 6, 13, false, true, true};
  b.gts_permit = true;
  b.gts = {GtsField{ShortAddress{1}, 14, 2, GtsDirection::Transmit},
           GtsField{ShortAddress{2}, 0, 1, GtsDirection::Receive}};
  b.pending_short = {ShortAddress{3}, ShortAddress{4}};
  b.pending_ext = {ExtAddress{0x1122334455667788ULL}};
  b.beacon_payload = {1, 2, 3};
  EXPECT_EQ(decode_beacon_fields(encode_beacon_fields(b)), b);

  const BeaconFields empty;
  EXPECT_EQ(encode_beacon_fields(empty).size(), 4u);  // superframe spec + GTS spec + pending spec
  EXPECT_EQ(decode_beacon_fields(encode_beacon_fields(empty)), empty);
}

TEST(CommandPayloads, RoundTrip) {
  for (unsigned bits = 0; bits < 64; ++bits) {
    const CapabilityInfo c{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0,
                           (bits & 8) != 0, (bits & 16) != 0, (bits & 32) != 0};
    ASSERT_EQ(decode_capability(encode_capability(c)), c);
  }
  const AssociationResponse r{ShortAddress{0x0042}, AssociationStatus::PanAtCapacity};
  EXPECT_EQ(decode_association_response(encode_association_response(r)), r);
  const GtsCharacteristics g{3, GtsDirection::Receive, false};
  EXPECT_EQ(decode_gts_characteristics(encode_gts_characteristics(g)), g);
  const CoordinatorRealignment cr{0xBEEF, ShortAddress{0}, 20, ShortAddress{7}};
  EXPECT_EQ(decode_coordinator_realignment(encode_coordinator_realignment(cr)), cr);
}

}  // namespace
}  // namespace lrwpan
