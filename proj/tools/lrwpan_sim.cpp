// Command-line front end: runs one scenario and writes trace, pcap and stats.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lrwpan/harness.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitAssertion = 1;
constexpr int kExitConfig = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IEEE 802.15.4 LR-WPAN discrete-event simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration_ms;
  std::string trace_path;
  std::string pcap_path;
  std::string stats_path;
  bool check = false;

  CLI::App* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--duration", duration_ms, "Override the simulated duration (ms)")->check(CLI::NonNegativeNumber);
  run->add_option("--trace", trace_path, "Write the event trace here");
  run->add_option("--pcap", pcap_path, "Write on-air frames as pcap (link type 195)");
  run->add_option("--stats", stats_path, "Write statistics (JSON when the path ends in .json)");
  run->add_flag("--check", check, "Assert run invariants; exit 1 on a violation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  lrwpan::Scenario scenario;
  try {
    scenario = lrwpan::load_scenario_file(scenario_path);
  } catch (const lrwpan::ConfigError& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return kExitConfig;
  }
  if (duration_ms) scenario.global.duration = lrwpan::SimTime{static_cast<std::uint64_t>(*duration_ms * 1000.0 + 0.5)};

  lrwpan::Simulation sim(std::move(scenario), seed);
  if (check) sim.enable_checks();
  sim.run();
  const lrwpan::RunStats stats = sim.stats();

  try {
    if (!trace_path.empty()) {
      std::ofstream out(trace_path, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot open '" + trace_path + "' for writing");
      sim.trace().write(out);
      if (!out.flush()) throw std::runtime_error("failed writing '" + trace_path + "'");
    }
    if (!pcap_path.empty()) lrwpan::write_pcap_file(pcap_path, sim.capture());
    if (!stats_path.empty())
      write_text(stats_path, stats_path.ends_with(".json") ? stats.to_json() : stats.to_flat());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }

  const auto& t = stats.aggregate;
  std::cout << "seed=" << stats.seed << " end_us=" << stats.end.us() << " events=" << stats.events
            << " frames=" << t.frames_sent << " collided=" << t.frames_collided << " msdu=" << t.msdu_generated
            << " delivered=" << t.msdu_delivered << " delivery_ratio=" << t.delivery_ratio << "\n";

  if (check) {
    const auto violations = sim.violations();
    for (const auto& v : violations) std::cerr << "check failed: " << v << "\n";
    if (!violations.empty()) return kExitAssertion;
    std::cout << "checks passed\n";
  }
  return kExitOk;
}
