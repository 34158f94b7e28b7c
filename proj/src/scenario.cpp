#include "lrwpan/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace lrwpan {

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

const NodeConfig& Scenario::coordinator() const {
  const auto it = std::find_if(nodes.begin(), nodes.end(), [](const NodeConfig& n) { return n.role == NodeRole::Coordinator; });
  if (it == nodes.end()) throw ConfigError(0, "scenario has no coordinator");
  return *it;
}

const NodeConfig* Scenario::find(NodeId id) const {
  const auto it = std::find_if(nodes.begin(), nodes.end(), [id](const NodeConfig& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

/// One `key = value` line with its position.
struct Entry {
  std::string_view value;
  std::size_t line;
};

std::int64_t parse_int(const Entry& e, std::int64_t lo, std::int64_t hi) {
  std::string_view s = e.value;
  int base = 10;
  if (s.starts_with("0x") || s.starts_with("0X")) {
    s.remove_prefix(2);
    base = 16;
  }
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(e.line, "expected an integer, got '" + std::string(e.value) + "'");
  if (v < lo || v > hi)
    throw ConfigError(e.line, "value " + std::string(e.value) + " outside [" + std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
  return v;
}

double parse_double(const Entry& e) {
  double v = 0;
  const auto* end = e.value.data() + e.value.size();
  const auto [ptr, ec] = std::from_chars(e.value.data(), end, v);
  if (ec != std::errc{} || ptr != end || e.value.empty() || !std::isfinite(v))
    throw ConfigError(e.line, "expected a number, got '" + std::string(e.value) + "'");
  return v;
}

bool parse_bool(const Entry& e) {
  static const std::map<std::string_view, bool> words{{"true", true},  {"false", false}, {"yes", true}, {"no", false},
                                                      {"on", true},    {"off", false},   {"1", true},   {"0", false}};
  const auto it = words.find(e.value);
  if (it == words.end()) throw ConfigError(e.line, "expected a boolean, got '" + std::string(e.value) + "'");
  return it->second;
}

SimTime parse_ms(const Entry& e) {
  const double ms = parse_double(e);
  if (ms < 0) throw ConfigError(e.line, "time must not be negative");
  return SimTime{static_cast<std::uint64_t>(std::llround(ms * 1000.0))};
}

template <typename Enum>
Enum parse_word(const Entry& e, const std::map<std::string_view, Enum>& words) {
  const auto it = words.find(e.value);
  if (it != words.end()) return it->second;
  std::string expected;
  for (const auto& [w, _] : words) expected += (expected.empty() ? "" : "|") + std::string(w);
  throw ConfigError(e.line, "expected " + expected + ", got '" + std::string(e.value) + "'");
}

using Setter = std::function<void(const Entry&)>;
using KeyTable = std::map<std::string_view, Setter>;

/// A section header plus its key lines.
struct Section {
  std::string name;
  std::size_t line = 0;
  std::vector<std::pair<std::string, Entry>> entries;
};

void apply_keys(const Section& s, const KeyTable& keys) {
  std::set<std::string_view> seen;
  for (const auto& [key, entry] : s.entries) {
    const auto it = keys.find(key);
    if (it == keys.end()) throw ConfigError(entry.line, "unknown key '" + key + "' in [" + s.name + "]");
    if (!seen.insert(key).second) throw ConfigError(entry.line, "duplicate key '" + key + "' in [" + s.name + "]");
    it->second(entry);
  }
}

std::vector<Section> split_sections(std::string_view text) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (const auto hash = line.find_first_of("#;"); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError(line_no, "empty section name");
      sections.push_back(Section{std::string(name), line_no, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "missing key");
    if (value.empty()) throw ConfigError(line_no, "missing value for '" + std::string(key) + "'");
    if (sections.empty()) throw ConfigError(line_no, "key outside of any section");
    sections.back().entries.emplace_back(std::string(key), Entry{value, line_no});
  }
  return sections;
}

std::uint8_t u8(const Entry& e, int lo, int hi) { return static_cast<std::uint8_t>(parse_int(e, lo, hi)); }

KeyTable global_keys(GlobalConfig& g) {
  return {
      {"seed", [&g](const Entry& e) { g.seed = static_cast<std::uint64_t>(parse_int(e, 0, INT64_MAX)); }},
      {"duration_ms", [&g](const Entry& e) { g.duration = parse_ms(e); }},
      {"path_loss_exponent",
       [&g](const Entry& e) {
         g.path_loss_exponent = parse_double(e);
         if (g.path_loss_exponent <= 0) throw ConfigError(e.line, "path_loss_exponent must be positive");
       }},
      {"reference_loss_db", [&g](const Entry& e) { g.reference_loss_db = parse_double(e); }},
      {"sensitivity_dbm", [&g](const Entry& e) { g.sensitivity_dbm = parse_double(e); }},
      {"cca_threshold_dbm", [&g](const Entry& e) { g.cca_threshold_dbm = parse_double(e); }},
      {"tx_power_dbm", [&g](const Entry& e) { g.tx_power_dbm = parse_double(e); }},
  };
}

KeyTable pan_keys(PanConfig& p, std::map<std::string, std::size_t>& lines) {
  const auto track = [&lines](const char* key, const Entry& e) { lines[key] = e.line; };
  return {
      {"pan_id", [&p](const Entry& e) { p.pan_id = static_cast<std::uint16_t>(parse_int(e, 0, 0xFFFE)); }},
      {"channel", [&p](const Entry& e) { p.channel = u8(e, 0, 26); }},
      {"beacon_order",
       [&p, track](const Entry& e) {
         track("beacon_order", e);
         p.beacon_order = u8(e, 0, 15);
       }},
      {"superframe_order",
       [&p, track](const Entry& e) {
         track("superframe_order", e);
         p.superframe_order = u8(e, 0, 15);
       }},
      {"gts_permit", [&p](const Entry& e) { p.gts_permit = parse_bool(e); }},
      {"association_permit", [&p](const Entry& e) { p.association_permit = parse_bool(e); }},
  };
}

KeyTable node_keys(NodeConfig& n) {
  return {
      {"role",
       [&n](const Entry& e) {
         n.role = parse_word<NodeRole>(e, {{"coordinator", NodeRole::Coordinator}, {"device", NodeRole::Device}});
       }},
      {"x", [&n](const Entry& e) { n.position.x = parse_double(e); }},
      {"y", [&n](const Entry& e) { n.position.y = parse_double(e); }},
      {"join",
       [&n](const Entry& e) {
         n.join = parse_word<JoinMode>(e, {{"static", JoinMode::Static}, {"associate", JoinMode::Associate}});
       }},
      {"short_address",
       [&n](const Entry& e) { n.short_address = static_cast<std::uint16_t>(parse_int(e, 0, 0xFFFD)); }},
      {"min_be", [&n](const Entry& e) { n.pib.min_be = u8(e, 0, 8); }},
      {"max_be", [&n](const Entry& e) { n.pib.max_be = u8(e, 3, 8); }},
      {"max_csma_backoffs", [&n](const Entry& e) { n.pib.max_csma_backoffs = u8(e, 0, 5); }},
      {"max_frame_retries", [&n](const Entry& e) { n.pib.max_frame_retries = u8(e, 0, 7); }},
      {"transaction_persistence_time",
       [&n](const Entry& e) {
         n.pib.transaction_persistence_time = static_cast<std::uint16_t>(parse_int(e, 0, 0xFFFF));
       }},
      {"auto_request", [&n](const Entry& e) { n.pib.auto_request = parse_bool(e); }},
      {"rx_on_when_idle", [&n](const Entry& e) { n.pib.rx_on_when_idle = parse_bool(e); }},
      {"battery_life_extension", [&n](const Entry& e) { n.pib.battery_life_extension = parse_bool(e); }},
      {"scan_type",
       [&n](const Entry& e) {
         n.scan_type = parse_word<ScanType>(e, {{"active", ScanType::Active}, {"passive", ScanType::Passive}});
       }},
      {"scan_duration", [&n](const Entry& e) { n.scan_duration = u8(e, 0, 14); }},
      {"gts_slots", [&n](const Entry& e) { n.gts_slots = u8(e, 0, 15); }},
      {"gts_direction",
       [&n](const Entry& e) {
         n.gts_direction =
             parse_word<GtsDirection>(e, {{"tx", GtsDirection::Transmit}, {"rx", GtsDirection::Receive}});
       }},
      {"poll_interval_ms", [&n](const Entry& e) { n.poll_interval = parse_ms(e); }},
  };
}

KeyTable traffic_keys(TrafficSpec& t, std::map<std::string, std::size_t>& lines) {
  const auto track = [&lines](const char* key, const Entry& e) { lines[key] = e.line; };
  return {
      {"node",
       [&t, track](const Entry& e) {
         track("node", e);
         t.node = static_cast<NodeId>(parse_int(e, 0, 0xFFFD));
       }},
      {"destination",
       [&t, track](const Entry& e) {
         track("destination", e);
         if (e.value == "coordinator") {
           t.destination = {Destination::Kind::Coordinator, 0};
         } else if (e.value == "broadcast") {
           t.destination = {Destination::Kind::Broadcast, 0};
         } else {
           t.destination = {Destination::Kind::Node, static_cast<NodeId>(parse_int(e, 0, 0xFFFD))};
         }
       }},
      {"adapter",
       [&t](const Entry& e) { t.adapter = parse_word<AdapterKind>(e, {{"sscs", AdapterKind::Sscs}, {"llc", AdapterKind::Llc}}); }},
      {"pattern",
       [&t](const Entry& e) {
         t.config.pattern =
             parse_word<TrafficPattern>(e, {{"periodic", TrafficPattern::Periodic}, {"poisson", TrafficPattern::Poisson}});
       }},
      {"interval_ms",
       [&t](const Entry& e) {
         t.config.interval = parse_ms(e);
         if (t.config.interval == SimTime{}) throw ConfigError(e.line, "interval_ms must be positive");
       }},
      {"payload_size",
       [&t, track](const Entry& e) {
         track("payload_size", e);
         t.config.payload_size = static_cast<std::size_t>(parse_int(e, 4, kMaxPhyPacketSize));
       }},
      {"start_ms", [&t](const Entry& e) { t.config.start = parse_ms(e); }},
      {"stop_ms",
       [&t, track](const Entry& e) {
         track("stop_ms", e);
         t.config.stop = parse_ms(e);
       }},
      {"ack", [&t](const Entry& e) { t.config.options.ack = parse_bool(e); }},
      {"indirect",
       [&t, track](const Entry& e) {
         track("indirect", e);
         t.config.options.indirect = parse_bool(e);
       }},
      {"gts",
       [&t, track](const Entry& e) {
         track("gts", e);
         t.config.options.gts = parse_bool(e);
       }},
  };
}

std::size_t line_or(const std::map<std::string, std::size_t>& lines, const std::string& key, std::size_t fallback) {
  const auto it = lines.find(key);
  return it == lines.end() ? fallback : it->second;
}

std::uint16_t short_of(const NodeConfig& n) {
  if (n.short_address) return *n.short_address;
  return n.role == NodeRole::Coordinator ? 0x0000 : static_cast<std::uint16_t>(n.id);
}

void validate_traffic(const Scenario& s, const TrafficSpec& t, const std::map<std::string, std::size_t>& lines,
                      std::size_t section_line) {
  const NodeConfig* src = s.find(t.node);
  if (!lines.contains("node")) throw ConfigError(section_line, "[traffic." + t.name + "] needs a 'node' key");
  if (!src) throw ConfigError(line_or(lines, "node", section_line), "traffic source node " + std::to_string(t.node) + " does not exist");

  const std::size_t dst_line = line_or(lines, "destination", section_line);
  const NodeConfig* dst = nullptr;
  switch (t.destination.kind) {
    case Destination::Kind::Coordinator:
      dst = &s.coordinator();
      break;
    case Destination::Kind::Node:
      dst = s.find(t.destination.node);
      if (!dst) throw ConfigError(dst_line, "destination node " + std::to_string(t.destination.node) + " does not exist");
      break;
    case Destination::Kind::Broadcast:
      if (t.config.options.ack) throw ConfigError(dst_line, "broadcast traffic cannot request acknowledgments");
      break;
  }
  if (dst == src) throw ConfigError(dst_line, "node " + std::to_string(t.node) + " sends to itself");

  if (t.config.stop <= t.config.start)
    throw ConfigError(line_or(lines, "stop_ms", section_line), "stop_ms must be after start_ms");

  const MacAddress dst_addr =
      dst ? MacAddress{ShortAddress{short_of(*dst)}} : MacAddress{ShortAddress::broadcast()};
  const std::size_t budget = msdu_budget(s.pan.pan_id, dst_addr, AddrMode::Short, s.pan.pan_id);
  if (t.config.payload_size > budget)
    throw ConfigError(line_or(lines, "payload_size", section_line),
                      "payload_size " + std::to_string(t.config.payload_size) + " exceeds the MSDU budget of " +
                          std::to_string(budget) + " bytes");

  if (t.config.options.indirect && src->role != NodeRole::Coordinator)
    throw ConfigError(line_or(lines, "indirect", section_line), "only the coordinator can send indirectly");
  if (t.config.options.gts) {
    const std::size_t gts_line = line_or(lines, "gts", section_line);
    if (s.pan.beacon_order == 15) throw ConfigError(gts_line, "GTS traffic needs a beacon-enabled PAN");
    if (t.config.options.indirect) throw ConfigError(gts_line, "a frame cannot be both GTS and indirect");
    const NodeConfig* owner = src->role == NodeRole::Coordinator ? dst : src;
    const GtsDirection needed = src->role == NodeRole::Coordinator ? GtsDirection::Receive : GtsDirection::Transmit;
    if (!owner || owner->gts_slots == 0 || owner->gts_direction != needed)
      throw ConfigError(gts_line, "GTS traffic needs a matching gts_slots/gts_direction on the device");
  }
}

}  // namespace

Scenario load_scenario(std::string_view text) {
  Scenario s;
  bool have_global = false;
  bool have_pan = false;
  std::map<std::string, std::size_t> pan_lines;
  std::map<NodeId, std::size_t> node_lines;
  std::map<std::string, std::size_t> traffic_names;
  std::vector<std::tuple<std::size_t, std::map<std::string, std::size_t>>> traffic_lines;

  for (const Section& sec : split_sections(text)) {
    if (sec.name == "global") {
      if (have_global) throw ConfigError(sec.line, "duplicate section [global]");
      have_global = true;
      apply_keys(sec, global_keys(s.global));
    } else if (sec.name == "pan") {
      if (have_pan) throw ConfigError(sec.line, "duplicate section [pan]");
      have_pan = true;
      apply_keys(sec, pan_keys(s.pan, pan_lines));
    } else if (sec.name.starts_with("node.")) {
      NodeConfig n;
      n.line = sec.line;
      n.id = static_cast<NodeId>(parse_int(Entry{std::string_view(sec.name).substr(5), sec.line}, 0, 0xFFFD));
      if (const auto [it, fresh] = node_lines.emplace(n.id, sec.line); !fresh)
        throw ConfigError(sec.line, "duplicate node id " + std::to_string(n.id) + " (first defined on line " +
                                        std::to_string(it->second) + ")");
      apply_keys(sec, node_keys(n));
      s.nodes.push_back(n);
    } else if (sec.name.starts_with("traffic.")) {
      TrafficSpec t;
      t.name = sec.name.substr(8);
      t.line = sec.line;
      if (t.name.empty()) throw ConfigError(sec.line, "traffic section needs a name");
      if (const auto [it, fresh] = traffic_names.emplace(t.name, sec.line); !fresh)
        throw ConfigError(sec.line, "duplicate traffic section '" + t.name + "'");
      std::map<std::string, std::size_t> lines;
      apply_keys(sec, traffic_keys(t, lines));
      s.traffic.push_back(t);
      traffic_lines.emplace_back(sec.line, std::move(lines));
    } else {
      throw ConfigError(sec.line, "unknown section [" + sec.name + "]");
    }
  }

  // Cross-field constraints.
  if (s.pan.beacon_order < 15 && s.pan.superframe_order > s.pan.beacon_order) {
    throw ConfigError(line_or(pan_lines, "superframe_order", line_or(pan_lines, "beacon_order", 0)),
                      "superframe_order " + std::to_string(s.pan.superframe_order) + " exceeds beacon_order " +
                          std::to_string(s.pan.beacon_order));
  }
  if (s.pan.beacon_order == 15) s.pan.superframe_order = 15;

  const auto coordinators = std::count_if(s.nodes.begin(), s.nodes.end(),
                                          [](const NodeConfig& n) { return n.role == NodeRole::Coordinator; });
  if (coordinators != 1)
    throw ConfigError(0, "a scenario needs exactly one coordinator, found " + std::to_string(coordinators));

  std::map<std::uint16_t, NodeId> shorts;
  for (const NodeConfig& n : s.nodes) {
    if (n.role == NodeRole::Coordinator && n.join == JoinMode::Associate)
      throw ConfigError(n.line, "the coordinator cannot associate");
    if (n.role == NodeRole::Device && n.join == JoinMode::Associate) continue;
    const std::uint16_t a = short_of(n);
    if (const auto [it, fresh] = shorts.emplace(a, n.id); !fresh)
      throw ConfigError(n.line, "node " + std::to_string(n.id) + " reuses short address " + std::to_string(a) +
                                    " of node " + std::to_string(it->second));
  }
  for (const NodeConfig& n : s.nodes) {
    if (n.pib.min_be && n.pib.max_be && *n.pib.min_be > *n.pib.max_be)
      throw ConfigError(n.line, "min_be exceeds max_be");
    if (n.gts_slots > 0 && s.pan.beacon_order == 15)
      throw ConfigError(n.line, "gts_slots needs a beacon-enabled PAN");
    if (n.gts_slots > 0 && n.role == NodeRole::Coordinator) throw ConfigError(n.line, "the coordinator cannot own a GTS");
  }
  for (std::size_t i = 0; i < s.traffic.size(); ++i) {
    const auto& [line, lines] = traffic_lines[i];
    validate_traffic(s, s.traffic[i], lines, line);
  }
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(0, "cannot open scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return load_scenario(text.str());
}

}  // namespace lrwpan
