#include "lrwpan/rng.hpp"

#include <cmath>

namespace lrwpan {

double RngStream::exponential(double mean) {
  // 1 - u lies in (0, 1], so the log is finite.
  return -mean * std::log1p(-uniform01());
}

}  // namespace lrwpan
