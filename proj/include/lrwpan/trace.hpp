#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lrwpan/engine.hpp"

namespace lrwpan {

struct TraceLine {
  SimTime time;
  NodeId node = 0;
  Layer layer = Layer::Engine;
  std::string event;
  std::string details;
};

/// Ordered event log. One line per record:
///   <time_us> <node> <layer> <event> <details>
class Trace {
 public:
  void record(SimTime time, NodeId node, Layer layer, std::string_view event, std::string details = {});

  const std::vector<TraceLine>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }
  void clear() { lines_.clear(); }

  /// When disabled, records are counted but not stored.
  void set_storing(bool store) { storing_ = store; }
  std::uint64_t recorded() const { return recorded_; }

  void set_listener(std::function<void(const TraceLine&)> listener) { listener_ = std::move(listener); }

  void write(std::ostream& os) const;
  static std::string format(const TraceLine& line);

  /// Lines matching node (when given), layer and event name.
  std::vector<const TraceLine*> select(std::string_view event, std::optional<NodeId> node = std::nullopt) const;

 private:
  std::vector<TraceLine> lines_;
  std::uint64_t recorded_ = 0;
  bool storing_ = true;
  std::function<void(const TraceLine&)> listener_;
};

/// Value of `key=` inside a details string, or empty.
std::string_view trace_field(std::string_view details, std::string_view key);

}  // namespace lrwpan
