#include "dgsp/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dgsp {

Graph::Graph(Eigen::MatrixXd weights) {
  const auto n = weights.rows();
  if (n < 1 || weights.cols() != n)
    throw NotSymmetric("weight matrix must be square, n >= 1");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0)
      throw NotSymmetric("diagonal must be exactly zero at vertex " + std::to_string(i));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (weights(i, j) != weights(j, i))
        throw NotSymmetric("weights not symmetric at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
      if (weights(i, j) < 0.0)
        throw NotSymmetric("negative weight at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")");
    }
  }
  weights_ = std::make_shared<const Eigen::MatrixXd>(std::move(weights));
}

Graph Graph::from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges) {
  if (n < 1) throw NotSymmetric("vertex count must be >= 1");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j, wt] : edges) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw IndexOutOfRange("edge endpoint out of range: (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
    if (i == j) throw NotSymmetric("self-loop at vertex " + std::to_string(i));
    w(i, j) = wt;
    w(j, i) = wt;
  }
  return Graph(std::move(w));
}

int Graph::edge_count() const {
  int count = 0;
  const auto& w = *weights_;
  for (Eigen::Index i = 0; i < w.rows(); ++i)
    for (Eigen::Index j = i + 1; j < w.cols(); ++j)
      if (w(i, j) != 0.0) ++count;
  return count;
}

Graph build_lattice(int rows, int cols) {
  if (rows < 1 || cols < 1) throw IndexOutOfRange("lattice dimensions must be >= 1");
  const int n = rows * cols;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        w(id(r, c), id(r, c + 1)) = 1.0;
        w(id(r, c + 1), id(r, c)) = 1.0;
      }
      if (r + 1 < rows) {
        w(id(r, c), id(r + 1, c)) = 1.0;
        w(id(r + 1, c), id(r, c)) = 1.0;
      }
    }
  return Graph(std::move(w));
}

Graph build_knn(const Eigen::MatrixXd& points, int k, bool symmetrize) {
  const int n = static_cast<int>(points.rows());
  if (k < 1 || k >= n) throw IndexOutOfRange("k must satisfy 1 <= k < point count");

  Eigen::MatrixXd d2(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d2(i, j) = (points.row(i) - points.row(j)).squaredNorm();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (d2(i, j) == 0.0)
        throw DuplicatePoints("points " + std::to_string(i) + " and " + std::to_string(j) +
                              " coincide");

  // neighbor lists; ties resolve to the smaller index via stable sort
  std::vector<std::vector<int>> nn(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    order.clear();
    for (int j = 0; j < n; ++j)
      if (j != i) order.push_back(j);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return d2(i, a) < d2(i, b); });
    nn[i].assign(order.begin(), order.begin() + k);
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j : nn[i]) {
      const bool mutual = std::find(nn[j].begin(), nn[j].end(), i) != nn[j].end();
      if (symmetrize || mutual) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  return Graph(std::move(w));
}

Graph cartesian_product(const Graph& g, const Graph& h, int max_vertices) {
  const int ng = g.size(), nh = h.size();
  if (static_cast<long long>(ng) * nh > max_vertices)
    throw SizeOverflow("product size " + std::to_string(static_cast<long long>(ng) * nh) +
                       " exceeds maximum " + std::to_string(max_vertices));
  const int n = ng * nh;
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  const auto& wg = g.weights();
  const auto& wh = h.weights();
  auto id = [nh](int i, int j) { return i * nh + j; };
  for (int i = 0; i < ng; ++i)
    for (int j = 0; j < nh; ++j) {
      for (int i2 = 0; i2 < ng; ++i2)
        if (wg(i, i2) != 0.0) w(id(i, j), id(i2, j)) = wg(i, i2);
      for (int j2 = 0; j2 < nh; ++j2)
        if (wh(j, j2) != 0.0) w(id(i, j), id(i, j2)) = wh(j, j2);
    }
  return Graph(std::move(w));
}

Eigen::MatrixXd gso(const Graph& g, GsoKind kind) {
  const int n = g.size();
  const Eigen::MatrixXd& a = g.weights();
  switch (kind) {
    case GsoKind::Adjacency:
      return a;
    case GsoKind::Laplacian: {
      Eigen::MatrixXd l = -a;
      for (int i = 0; i < n; ++i) {
        double deg = 0.0;
        for (int j = 0; j < n; ++j) deg += a(i, j);
        l(i, i) = deg;
      }
      return l;
    }
    case GsoKind::NormalizedLaplacian: {
      Eigen::VectorXd dinv(n);
      for (int i = 0; i < n; ++i) {
        const double deg = g.degree(i);
        if (deg <= 0.0)
          throw ZeroDegreeVertex("vertex " + std::to_string(i) +
                                 " has zero degree; normalized Laplacian undefined");
        dinv(i) = 1.0 / std::sqrt(deg);
      }
      Eigen::MatrixXd l = Eigen::MatrixXd::Identity(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && a(i, j) != 0.0) l(i, j) = -dinv(i) * a(i, j) * dinv(j);
      // enforce exact symmetry against multiplication-order rounding
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) l(j, i) = l(i, j);
      return l;
    }
  }
  throw IndexOutOfRange("unknown GSO kind");
}

Graph build_path(int n) {
  if (n < 1) throw IndexOutOfRange("path length must be >= 1");
  std::vector<std::tuple<int, int, double>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1, 1.0);
  return Graph::from_edges(n, edges);
}

}  // namespace dgsp
