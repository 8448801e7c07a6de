#pragma once

#include "dgsp/dist_signal.hpp"
#include "dgsp/graph.hpp"

namespace dgsp {

/// Per-edge bivariate Gaussian model with a single-root acyclic
/// orientation for sampling.
struct EdgewiseModel {
  struct EdgeGaussian {
    int u, v;  // u < v, matching the ordering of mean/cov components
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
  };

  Graph graph;
  std::vector<EdgeGaussian> edges;
  Eigen::VectorXd vertex_mean;
  Eigen::VectorXd vertex_var;
  int root = 0;
  std::vector<int> order;  // topological order of the BFS orientation
  // incoming[v]: (tail vertex, edge index) pairs of directed edges into v
  std::vector<std::vector<std::pair<int, int>>> incoming;
};

/// Fits a bivariate Gaussian per edge plus vertex marginals from signals
/// (one per row) and orients the graph by BFS levels from the root (edges
/// between equal levels point toward the larger index).
EdgewiseModel fit_edgewise(const Eigen::MatrixXd& samples, const Graph& g, int root = 0);

/// One draw: the root from its marginal, then each vertex from the
/// conditional of every incoming edge given its tail, averaged over
/// incoming edges. Pure in (model, seed, index).
Eigen::VectorXd sample_edgewise(const EdgewiseModel& m, std::uint64_t seed,
                                std::uint64_t index = 0);

/// Indicator of value >= level, per vertex.
Eigen::VectorXd threshold(const Eigen::VectorXd& signal, double level);

}  // namespace dgsp
