#include "lrwpan/trace.hpp"

#include <algorithm>
#include <ostream>

namespace lrwpan {

void Trace::record(SimTime time, NodeId node, Layer layer, std::string_view event, std::string details) {
  ++recorded_;
  TraceLine line{time, node, layer, std::string(event), std::move(details)};
  if (listener_) listener_(line);
  if (storing_) lines_.push_back(std::move(line));
}

std::string Trace::format(const TraceLine& line) {
  std::string out = std::to_string(line.time.us());
  out += ' ';
  out += std::to_string(line.node);
  out += ' ';
  out += to_string(line.layer);
  out += ' ';
  out += line.event;
  if (!line.details.empty()) {
    out += ' ';
    out += line.details;
  }
  return out;
}

void Trace::write(std::ostream& os) const {
  for (const auto& line : lines_) os << format(line) << '\n';
}

std::vector<const TraceLine*> Trace::select(std::string_view event, std::optional<NodeId> node) const {
  std::vector<const TraceLine*> out;
  for (const auto& line : lines_) {
    if (line.event == event && (!node || line.node == *node)) out.push_back(&line);
  }
  return out;
}

std::string_view trace_field(std::string_view details, std::string_view key) {
  std::size_t pos = 0;
  while (pos < details.size()) {
    const std::size_t end = std::min(details.find(' ', pos), details.size());
    const std::string_view token = details.substr(pos, end - pos);
    if (token.size() > key.size() && token.substr(0, key.size()) == key && token[key.size()] == '=') {
      return token.substr(key.size() + 1);
    }
    pos = end + 1;
  }
  return {};
}

}  // namespace lrwpan
