#pragma once

#include <Eigen/Dense>

#include "dgsp/dist_signal.hpp"
#include "dgsp/graph.hpp"
#include "dgsp/rng.hpp"

namespace dgsp::test {

/// Random undirected graph: each pair joined with probability p, unit
/// weights; falls back to a path when the draw comes out empty.
inline Graph random_graph(int n, std::uint64_t seed, double p = 0.4) {
  const auto s = rng::root(seed);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::uint64_t c = 0;
  bool any = false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++c)
      if (s.uniform01(c) < p) {
        w(i, j) = w(j, i) = 1.0;
        any = true;
      }
  if (!any && n > 1)
    for (int i = 0; i + 1 < n; ++i) w(i, i + 1) = w(i + 1, i) = 1.0;
  return Graph(std::move(w));
}

inline Eigen::MatrixXd random_symmetric(int n, std::uint64_t seed) {
  const auto s = rng::root(seed);
  Eigen::MatrixXd m(n, n);
  std::uint64_t c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      m(i, j) = s.normal(c++);
      m(j, i) = m(i, j);
    }
  return m;
}

inline Eigen::MatrixXd random_psd(int n, std::uint64_t seed, double scale = 1.0) {
  const auto s = rng::root(seed);
  Eigen::MatrixXd a(n, n);
  std::uint64_t c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = s.normal(c++);
  return scale * (a * a.transpose()) / n;
}

inline Eigen::VectorXd random_vector(int n, std::uint64_t seed) {
  const auto s = rng::root(seed);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = s.normal(i);
  return v;
}

inline Gaussian random_gaussian(int n, std::uint64_t seed, double cov_scale = 1.0) {
  return Gaussian(random_vector(n, seed),
                  random_psd(n, rng::mix64(seed ^ 0x5bd1e995), cov_scale));
}

}  // namespace dgsp::test
