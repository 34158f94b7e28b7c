#include <algorithm>
#include <cstdio>

#include <json.hpp>

#include "lrwpan/harness.hpp"

namespace lrwpan {

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void flat_node(std::string& out, const std::string& prefix, const NodeStats& s) {
  const auto put = [&](const char* key, const std::string& value) { out += prefix + key + "=" + value + "\n"; };
  const auto num = [&](const char* key, std::uint64_t v) { put(key, std::to_string(v)); };
  num("frames_sent", s.frames_sent);
  num("frames_received", s.frames_received);
  num("frames_collided", s.frames_collided);
  num("below_sensitivity", s.below_sensitivity);
  num("acks_sent", s.acks_sent);
  num("acks_received", s.acks_received);
  num("retries", s.retries);
  num("csma_failures", s.csma_failures);
  num("no_ack", s.no_ack);
  num("msdu_generated", s.msdu_generated);
  num("msdu_rejected", s.msdu_rejected);
  num("msdu_confirmed", s.msdu_confirmed);
  num("msdu_delivered", s.msdu_delivered);
  num("msdu_received", s.msdu_received);
  put("delivery_ratio", fixed(s.delivery_ratio));
  num("latency_count", s.latency.count);
  num("latency_min_us", s.latency.min_us);
  put("latency_mean_us", fixed(s.latency.mean_us));
  num("latency_max_us", s.latency.max_us);
  num("beacons_sent", s.beacons_sent);
  num("beacons_received", s.beacons_received);
  num("beacons_missed", s.beacons_missed);
  num("gts_frames", s.gts_frames);
  put("gts_utilization", fixed(s.gts_utilization));
}

nlohmann::ordered_json json_node(const NodeStats& s) {
  return {
      {"frames_sent", s.frames_sent},
      {"frames_received", s.frames_received},
      {"frames_collided", s.frames_collided},
      {"below_sensitivity", s.below_sensitivity},
      {"acks_sent", s.acks_sent},
      {"acks_received", s.acks_received},
      {"retries", s.retries},
      {"csma_failures", s.csma_failures},
      {"no_ack", s.no_ack},
      {"msdu_generated", s.msdu_generated},
      {"msdu_rejected", s.msdu_rejected},
      {"msdu_confirmed", s.msdu_confirmed},
      {"msdu_delivered", s.msdu_delivered},
      {"msdu_received", s.msdu_received},
      {"delivery_ratio", s.delivery_ratio},
      {"latency_us",
       {{"count", s.latency.count}, {"min", s.latency.min_us}, {"mean", s.latency.mean_us}, {"max", s.latency.max_us}}},
      {"beacons_sent", s.beacons_sent},
      {"beacons_received", s.beacons_received},
      {"beacons_missed", s.beacons_missed},
      {"gts_frames", s.gts_frames},
      {"gts_utilization", s.gts_utilization},
  };
}

}  // namespace

bool RunStats::accounting_holds() const {
  return std::all_of(links.begin(), links.end(), [](const LinkStats& l) { return l.accounting_holds(); });
}

const LinkStats* RunStats::link(NodeId from, NodeId to) const {
  const auto it = std::find_if(links.begin(), links.end(), [&](const LinkStats& l) { return l.from == from && l.to == to; });
  return it == links.end() ? nullptr : &*it;
}

const NodeStats* RunStats::node(NodeId id) const {
  const auto it = std::find_if(nodes.begin(), nodes.end(), [&](const NodeStats& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

std::string RunStats::to_flat() const {
  std::string out;
  out += "seed=" + std::to_string(seed) + "\n";
  out += "end_us=" + std::to_string(end.us()) + "\n";
  out += "events=" + std::to_string(events) + "\n";
  out += "trace_lines=" + std::to_string(trace_lines) + "\n";
  out += std::string("accounting_holds=") + (accounting_holds() ? "1" : "0") + "\n";
  flat_node(out, "total.", aggregate);
  for (const auto& n : nodes) flat_node(out, "node." + std::to_string(n.id) + ".", n);
  for (const auto& l : links) {
    const std::string p = "link." + std::to_string(l.from) + "." + std::to_string(l.to) + ".";
    out += p + "sent=" + std::to_string(l.sent) + "\n";
    out += p + "delivered=" + std::to_string(l.delivered) + "\n";
    out += p + "collided=" + std::to_string(l.collided) + "\n";
    out += p + "below_sensitivity=" + std::to_string(l.below_sensitivity) + "\n";
  }
  return out;
}

std::string RunStats::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["end_us"] = end.us();
  j["events"] = events;
  j["trace_lines"] = trace_lines;
  j["accounting_holds"] = accounting_holds();
  j["total"] = json_node(aggregate);
  auto& jn = j["nodes"] = nlohmann::ordered_json::array();
  for (const auto& n : nodes) {
    auto e = json_node(n);
    e["id"] = n.id;
    jn.push_back(std::move(e));
  }
  auto& jl = j["links"] = nlohmann::ordered_json::array();
  for (const auto& l : links) {
    jl.push_back({{"from", l.from},
                  {"to", l.to},
                  {"sent", l.sent},
                  {"delivered", l.delivered},
                  {"collided", l.collided},
                  {"below_sensitivity", l.below_sensitivity}});
  }
  return j.dump(2) + "\n";
}

}  // namespace lrwpan
