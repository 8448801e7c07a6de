#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dgsp/graph.hpp"
#include "test_util.hpp"

using namespace dgsp;

namespace {

// independent edge-count oracle: enumerate 4-neighbor pairs directly
int lattice_edges_by_enumeration(int rows, int cols) {
  int count = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) ++count;
      if (r + 1 < rows) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("lattice shapes") {
  const Graph g22 = build_lattice(2, 2);
  CHECK(g22.size() == 4);
  CHECK(g22.edge_count() == 4);

  const Graph g13 = build_lattice(1, 3);
  CHECK(g13.size() == 3);
  CHECK(g13.edge_count() == 2);
  CHECK(g13.weights()(0, 1) == 1.0);
  CHECK(g13.weights()(1, 2) == 1.0);
  CHECK(g13.weights()(0, 2) == 0.0);

  const Graph big = build_lattice(28, 28);
  CHECK(big.size() == 784);
  CHECK(big.edge_count() == 1512);
  CHECK(big.edge_count() == lattice_edges_by_enumeration(28, 28));
}

TEST_CASE("knn construction") {
  Eigen::MatrixXd pts(3, 1);
  pts << 0.0, 1.0, 3.0;
  const Graph g = build_knn(pts, 1);
  CHECK(g.weights()(0, 1) == 1.0);
  CHECK(g.weights()(1, 2) == 1.0);
  CHECK(g.weights()(0, 2) == 0.0);

  // mutual variant drops the one-sided edge
  const Graph m = build_knn(pts, 1, false);
  CHECK(m.weights()(0, 1) == 1.0);
  CHECK(m.weights()(1, 2) == 0.0);

  // k = n-1 gives the complete graph
  Eigen::MatrixXd pts4(4, 2);
  pts4 << 0, 0, 1, 0, 0, 1, 2, 2;
  const Graph complete = build_knn(pts4, 3);
  CHECK(complete.edge_count() == 6);

  Eigen::MatrixXd dup(3, 2);
  dup << 0, 0, 1, 1, 0, 0;
  CHECK_THROWS_AS(build_knn(dup, 1), DuplicatePoints);
}

TEST_CASE("knn at station scale") {
  const auto s = rng::root(2024);
  Eigen::MatrixXd pts(194, 2);
  for (int i = 0; i < 194; ++i) {
    pts(i, 0) = s.uniform01(2 * i);
    pts(i, 1) = s.uniform01(2 * i + 1);
  }
  const Graph g = build_knn(pts, 20);
  CHECK(g.size() == 194);
  int max_degree = 0;
  for (int v = 0; v < g.size(); ++v) {
    int deg = 0;
    for (int u = 0; u < g.size(); ++u) deg += g.weights()(v, u) != 0.0;
    max_degree = std::max(max_degree, deg);
  }
  CHECK(max_degree >= 20);
}

TEST_CASE("cartesian product") {
  const Graph p2 = build_path(2);
  const Graph c4 = cartesian_product(p2, p2);
  CHECK(c4.size() == 4);
  CHECK(c4.edge_count() == 4);
  for (int v = 0; v < 4; ++v) CHECK(c4.degree(v) == 2.0);  // 4-cycle

  const Graph h = test::random_graph(19, 7);
  const Graph p10 = build_path(10);
  CHECK(cartesian_product(h, p10).size() == 190);

  const Graph single(Eigen::MatrixXd::Zero(1, 1));
  const Graph same = cartesian_product(h, single);
  CHECK(same.size() == h.size());
  CHECK((same.weights() - h.weights()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(cartesian_product(build_lattice(10, 10), build_lattice(10, 10), 2000),
                  SizeOverflow);
}

TEST_CASE("graph shift operators") {
  const Graph p2 = build_path(2);
  Eigen::MatrixXd expect(2, 2);
  expect << 1, -1, -1, 1;
  CHECK((gso(p2, GsoKind::Laplacian) - expect).cwiseAbs().maxCoeff() == 0.0);
  CHECK((gso(p2, GsoKind::NormalizedLaplacian) - expect).cwiseAbs().maxCoeff() == 0.0);

  const Graph empty(Eigen::MatrixXd::Zero(3, 3));
  CHECK(gso(empty, GsoKind::Adjacency).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(gso(empty, GsoKind::NormalizedLaplacian), ZeroDegreeVertex);
}

TEST_CASE("laplacian row sums vanish exactly for exactly-representable weights") {
  // unit weights
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const Graph g = test::random_graph(23, seed);
    const Eigen::MatrixXd l = gso(g, GsoKind::Laplacian);
    for (int i = 0; i < g.size(); ++i) CHECK(l.row(i).sum() == 0.0);
  }
  // dyadic rational weights stay exact in double arithmetic
  const auto s = rng::root(77);
  const int n = 16;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  std::uint64_t c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++c)
      if (s.uniform01(c) < 0.5) {
        const double weight = static_cast<double>(1 + s.word(c) % 64) / 64.0;
        w(i, j) = w(j, i) = weight;
      }
  const Graph g(std::move(w));
  const Eigen::MatrixXd l = gso(g, GsoKind::Laplacian);
  for (int i = 0; i < n; ++i) CHECK(l.row(i).sum() == 0.0);
}

TEST_CASE("graph validation") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_AS(Graph(bad), NotSymmetric);
  bad << 1, 0, 0, 0;
  CHECK_THROWS_AS(Graph(bad), NotSymmetric);
  bad << 0, -1, -1, 0;
  CHECK_THROWS_AS(Graph(bad), NotSymmetric);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 0, 1.0}}), NotSymmetric);
  CHECK_THROWS_AS(Graph::from_edges(2, {{0, 5, 1.0}}), IndexOutOfRange);
}
