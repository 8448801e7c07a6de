#include "dgsp/pipelines/edgewise.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace dgsp {

namespace {

// BFS levels from the root; unreachable vertices come back as -1.
std::vector<int> bfs_levels(const Graph& g, int root) {
  std::vector<int> level(g.size(), -1);
  std::queue<int> q;
  level[root] = 0;
  q.push(root);
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    for (int v = 0; v < g.size(); ++v)
      if (g.weights()(u, v) != 0.0 && level[v] == -1) {
        level[v] = level[u] + 1;
        q.push(v);
      }
  }
  return level;
}

}  // namespace

EdgewiseModel fit_edgewise(const Eigen::MatrixXd& samples, const Graph& g, int root) {
  const int count = static_cast<int>(samples.rows());
  const int n = g.size();
  if (count < 2) throw TooFewSamples("need >= 2 signals to fit edge Gaussians");
  if (samples.cols() != n) throw DimensionMismatch("signal width does not match graph size");
  if (root < 0 || root >= n) throw IndexOutOfRange("root vertex out of range");

  const auto level = bfs_levels(g, root);
  for (int v = 0; v < n; ++v)
    if (level[v] == -1)
      throw InvalidDistribution("graph must be connected; vertex " + std::to_string(v) +
                                " unreachable from root");

  EdgewiseModel model{g, {}, samples.colwise().mean(), Eigen::VectorXd(n), root, {}, {}};
  Eigen::MatrixXd centered = samples;
  centered.rowwise() -= model.vertex_mean.transpose();
  for (int v = 0; v < n; ++v) {
    double var = centered.col(v).squaredNorm() / count;
    if (var <= 0.0) var = 1e-12;
    model.vertex_var(v) = var;
  }

  model.incoming.resize(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) {
      if (g.weights()(u, v) == 0.0) continue;
      EdgewiseModel::EdgeGaussian eg;
      eg.u = u;
      eg.v = v;
      eg.mean << model.vertex_mean(u), model.vertex_mean(v);
      const double cuv = centered.col(u).dot(centered.col(v)) / count;
      eg.cov << model.vertex_var(u), cuv, cuv, model.vertex_var(v);
      // keep the 2x2 block safely positive definite
      const double eps = 1e-8 * eg.cov.trace() / 2.0 + 1e-12;
      eg.cov(0, 0) += eps;
      eg.cov(1, 1) += eps;
      const int idx = static_cast<int>(model.edges.size());
      model.edges.push_back(eg);
      // orientation: lower level -> higher level; equal levels by index
      const bool u_first = level[u] < level[v] || (level[u] == level[v] && u < v);
      if (u_first)
        model.incoming[v].emplace_back(u, idx);
      else
        model.incoming[u].emplace_back(v, idx);
    }

  model.order.resize(n);
  for (int v = 0; v < n; ++v) model.order[v] = v;
  std::sort(model.order.begin(), model.order.end(), [&](int a, int b) {
    return std::pair(level[a], a) < std::pair(level[b], b);
  });
  return model;
}

Eigen::VectorXd sample_edgewise(const EdgewiseModel& m, std::uint64_t seed,
                                std::uint64_t index) {
  const int n = m.graph.size();
  const auto stream = rng::root(seed).substream(index);
  Eigen::VectorXd x(n);
  std::uint64_t counter = 0;
  for (int v : m.order) {
    if (v == m.root) {
      x(v) = m.vertex_mean(v) + std::sqrt(m.vertex_var(v)) * stream.normal(counter++);
      continue;
    }
    double acc = 0.0;
    for (const auto& [tail, e] : m.incoming[v]) {
      const auto& eg = m.edges[e];
      // conditional of the head value given the tail within this edge model
      const int head_pos = (eg.v == v) ? 1 : 0;
      const int tail_pos = 1 - head_pos;
      const double mh = eg.mean(head_pos), mt = eg.mean(tail_pos);
      const double vh = eg.cov(head_pos, head_pos), vt = eg.cov(tail_pos, tail_pos);
      const double c = eg.cov(0, 1);
      const double cond_mean = mh + c / vt * (x(tail) - mt);
      const double cond_var = std::max(vh - c * c / vt, 0.0);
      acc += cond_mean + std::sqrt(cond_var) * stream.normal(counter++);
    }
    x(v) = acc / static_cast<double>(m.incoming[v].size());
  }
  return x;
}

Eigen::VectorXd threshold(const Eigen::VectorXd& signal, double level) {
  return (signal.array() >= level).cast<double>();
}

}  // namespace dgsp
