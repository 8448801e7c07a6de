#pragma once

#include <Eigen/Dense>
#include <memory>
#include <tuple>
#include <vector>

#include "dgsp/errors.hpp"

namespace dgsp {

enum class GsoKind { Adjacency, Laplacian, NormalizedLaplacian };

/// Weighted undirected graph on ordered vertices.
///
/// The weight matrix is exactly symmetric with a zero diagonal and
/// nonnegative entries. Instances are immutable; copies share storage.
class Graph {
public:
  /// Validates symmetry (exact), zero diagonal, nonnegativity, n >= 1.
  explicit Graph(Eigen::MatrixXd weights);

  /// Builds from an undirected edge list (i, j, w) with i != j.
  static Graph from_edges(int n, const std::vector<std::tuple<int, int, double>>& edges);

  int size() const { return static_cast<int>(weights_->rows()); }
  const Eigen::MatrixXd& weights() const { return *weights_; }

  /// Weighted degree of vertex v.
  double degree(int v) const { return weights_->row(v).sum(); }

  /// Number of unordered vertex pairs with nonzero weight.
  int edge_count() const;

  bool same_weights(const Graph& other) const {
    return weights_ == other.weights_ || *weights_ == *other.weights_;
  }

private:
  std::shared_ptr<const Eigen::MatrixXd> weights_;
};

/// 4-neighbor grid with unit weights; vertices in row-major order.
Graph build_lattice(int rows, int cols);

/// k-nearest-neighbor graph on the given points (one point per row), unit
/// weights. Ties in distance resolve to the smaller vertex index. With
/// symmetrize an edge appears when either endpoint selects the other
/// (union); otherwise both must (mutual).
Graph build_knn(const Eigen::MatrixXd& points, int k, bool symmetrize = true);

/// Cartesian product; vertex (i, j) maps to index i * h.size() + j.
Graph cartesian_product(const Graph& g, const Graph& h, int max_vertices = 2000);

/// Graph shift operator. The Laplacian diagonal accumulates the row in
/// ascending index order so row sums cancel exactly against the
/// off-diagonal entries.
Eigen::MatrixXd gso(const Graph& g, GsoKind kind);

/// Path graph on n vertices.
Graph build_path(int n);

}  // namespace dgsp
