#include "dgsp/rng.hpp"

#include <cmath>

namespace dgsp::rng {

double Stream::normal(std::uint64_t i) const {
  // 1 - u keeps the argument of log strictly positive.
  const double u1 = 1.0 - uniform01(2 * i);
  const double u2 = uniform01(2 * i + 1);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return r * std::cos(2.0 * M_PI * u2);
}

std::uint64_t Stream::index_below(std::uint64_t i, std::uint64_t n) const {
  const double u = uniform01(i);
  auto idx = static_cast<std::uint64_t>(u * static_cast<double>(n));
  return idx >= n ? n - 1 : idx;
}

}  // namespace dgsp::rng
