#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <thread>
#include <vector>

#include "dgsp/parallel.hpp"
#include "dgsp/rng.hpp"

using namespace dgsp;

TEST_CASE("stream words are pure functions of (key, index)") {
  const rng::Stream a(42), b(42);
  for (std::uint64_t i : {0ULL, 1ULL, 17ULL, 1000000ULL})
    CHECK(a.word(i) == b.word(i));
  CHECK(a.word(0) != a.word(1));
  CHECK(rng::Stream(1).word(0) != rng::Stream(2).word(0));
}

TEST_CASE("substreams do not collide") {
  const auto root = rng::root(7);
  CHECK(root.substream(0).key() != root.substream(1).key());
  CHECK(root.substream(0).word(3) != root.substream(1).word(3));
}

TEST_CASE("uniform01 moments") {
  const auto s = rng::root(123);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform01(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
    sumsq += u * u;
  }
  // 5 sigma bounds on mean 1/2 and second moment 1/3
  CHECK(std::abs(sum / n - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(std::abs(sumsq / n - 1.0 / 3.0) < 5.0 * 0.3 / std::sqrt(n));
}

TEST_CASE("normal moments") {
  const auto s = rng::root(99);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(i);
    sum += z;
    sumsq += z * z;
  }
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(sumsq / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
}

TEST_CASE("parallel_for is deterministic across worker counts") {
  const int n = 1000;
  std::vector<double> one(n), four(n);
  const auto s = rng::root(5);
  parallel_for(n, 1, [&](std::int64_t i) { one[i] = s.normal(i); });
  parallel_for(n, 4, [&](std::int64_t i) { four[i] = s.normal(i); });
  CHECK(one == four);
}
