#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lrwpan/adapters.hpp"
#include "lrwpan/medium.hpp"
#include "lrwpan/primitives.hpp"

namespace lrwpan {

/// Rejected scenario text. `line` is 1-based, 0 when no single line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct GlobalConfig {
  std::uint64_t seed = 1;
  SimTime duration = SimTime::from_ms(10'000);
  double path_loss_exponent = 2.0;
  double reference_loss_db = 40.2;
  double sensitivity_dbm = kDefaultSensitivityDbm;
  double cca_threshold_dbm = -77.0;
  double tx_power_dbm = 0.0;
};

struct PanConfig {
  std::uint16_t pan_id = 0x1234;
  std::uint8_t channel = 11;
  std::uint8_t beacon_order = 15;
  std::uint8_t superframe_order = 15;
  bool gts_permit = true;
  bool association_permit = true;
};

enum class NodeRole : std::uint8_t { Coordinator, Device };

/// How a device joins: preconfigured addresses, or scan then associate.
enum class JoinMode : std::uint8_t { Static, Associate };

struct PibOverrides {
  std::optional<std::uint8_t> min_be;
  std::optional<std::uint8_t> max_be;
  std::optional<std::uint8_t> max_csma_backoffs;
  std::optional<std::uint8_t> max_frame_retries;
  std::optional<std::uint16_t> transaction_persistence_time;
  std::optional<bool> auto_request;
  std::optional<bool> rx_on_when_idle;
  std::optional<bool> battery_life_extension;
};

struct NodeConfig {
  NodeId id = 0;
  NodeRole role = NodeRole::Device;
  Position position;
  JoinMode join = JoinMode::Static;
  std::optional<std::uint16_t> short_address;
  PibOverrides pib;
  ScanType scan_type = ScanType::Active;
  std::optional<std::uint8_t> scan_duration;
  std::uint8_t gts_slots = 0;  // 0: no GTS request
  GtsDirection gts_direction = GtsDirection::Transmit;
  SimTime poll_interval;  // zero: no periodic polling
  std::size_t line = 0;
};

/// Where generated traffic goes.
struct Destination {
  enum class Kind : std::uint8_t { Coordinator, Node, Broadcast };
  Kind kind = Kind::Coordinator;
  NodeId node = 0;
};

enum class AdapterKind : std::uint8_t { Sscs, Llc };

struct TrafficSpec {
  std::string name;
  NodeId node = 0;
  Destination destination;
  AdapterKind adapter = AdapterKind::Sscs;
  TrafficConfig config;
  std::size_t line = 0;
};

struct Scenario {
  GlobalConfig global;
  PanConfig pan;
  std::vector<NodeConfig> nodes;
  std::vector<TrafficSpec> traffic;

  const NodeConfig& coordinator() const;
  const NodeConfig* find(NodeId id) const;
};

/// Parses and validates scenario text. Throws ConfigError.
Scenario load_scenario(std::string_view text);
/// Reads a scenario file. Throws ConfigError (line 0 for I/O errors).
Scenario load_scenario_file(const std::string& path);

}  // namespace lrwpan
