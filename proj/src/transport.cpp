#include "dgsp/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "dgsp/errors.hpp"

namespace dgsp {

namespace {

struct Cell {
  int i, j;
  double flow;
};

// Spanning-tree basis over ns supply nodes (0..ns-1) and nt demand nodes
// (ns..ns+nt-1); basic cells are the tree edges.
struct Basis {
  int ns, nt;
  std::vector<Cell> cells;

  std::vector<std::vector<std::pair<int, int>>> adjacency() const {
    std::vector<std::vector<std::pair<int, int>>> adj(ns + nt);
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
      const int a = cells[c].i, b = ns + cells[c].j;
      adj[a].emplace_back(b, c);
      adj[b].emplace_back(a, c);
    }
    return adj;
  }
};

Basis northwest_corner(Eigen::VectorXd a, Eigen::VectorXd b) {
  const int ns = static_cast<int>(a.size()), nt = static_cast<int>(b.size());
  Basis basis{ns, nt, {}};
  basis.cells.reserve(ns + nt - 1);
  int i = 0, j = 0;
  while (true) {
    const double f = std::min(a(i), b(j));
    basis.cells.push_back({i, j, f});
    a(i) = std::max(0.0, a(i) - f);
    b(j) = std::max(0.0, b(j) - f);
    if (i == ns - 1 && j == nt - 1) break;
    if (j == nt - 1)
      ++i;
    else if (i == ns - 1)
      ++j;
    else if (a(i) <= b(j))
      ++i;
    else
      ++j;
  }
  return basis;
}

// Dual potentials from the tree: u(row) + v(col) = cost on basic cells.
void compute_duals(const Basis& basis, const Eigen::MatrixXd& cost, Eigen::VectorXd& u,
                   Eigen::VectorXd& v) {
  const auto adj = basis.adjacency();
  std::vector<char> seen(basis.ns + basis.nt, 0);
  std::queue<int> queue;
  u(0) = 0.0;
  seen[0] = 1;
  queue.push(0);
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop();
    for (const auto& [next, c] : adj[node]) {
      if (seen[next]) continue;
      const auto& cell = basis.cells[c];
      if (next >= basis.ns)
        v(next - basis.ns) = cost(cell.i, cell.j) - u(cell.i);
      else
        u(next) = cost(cell.i, cell.j) - v(cell.j);
      seen[next] = 1;
      queue.push(next);
    }
  }
}

// Tree path from supply node ei to demand node ns+ej as a list of cell
// indices; signs alternate starting with '-' (the cell sharing row ei).
std::vector<int> tree_path(const Basis& basis, int ei, int ej) {
  const auto adj = basis.adjacency();
  const int target = basis.ns + ej;
  std::vector<int> parent(basis.ns + basis.nt, -1);
  std::vector<int> via_cell(basis.ns + basis.nt, -1);
  std::queue<int> queue;
  parent[ei] = ei;
  queue.push(ei);
  while (!queue.empty()) {
    const int node = queue.front();
    queue.pop();
    if (node == target) break;
    for (const auto& [next, c] : adj[node]) {
      if (parent[next] != -1) continue;
      parent[next] = node;
      via_cell[next] = c;
      queue.push(next);
    }
  }
  std::vector<int> path;
  for (int node = target; node != ei; node = parent[node]) path.push_back(via_cell[node]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

TransportPlan transport_simplex(const Eigen::VectorXd& supply,
                                const Eigen::VectorXd& demand,
                                const Eigen::MatrixXd& cost) {
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw DimensionMismatch("cost matrix shape does not match marginals");
  if ((supply.array() < 0.0).any() || (demand.array() < 0.0).any())
    throw InvalidDistribution("marginals must be nonnegative");
  const double total_a = supply.sum(), total_b = demand.sum();
  if (total_a <= 0.0 || std::abs(total_a - total_b) > 1e-9)
    throw InvalidDistribution("marginals must have equal positive totals");

  // strip zero-mass atoms; indices map back at the end
  std::vector<int> rows, cols;
  for (int i = 0; i < supply.size(); ++i)
    if (supply(i) > 0.0) rows.push_back(i);
  for (int j = 0; j < demand.size(); ++j)
    if (demand(j) > 0.0) cols.push_back(j);
  const int ns = static_cast<int>(rows.size()), nt = static_cast<int>(cols.size());

  Eigen::VectorXd a(ns), b(nt);
  Eigen::MatrixXd c(ns, nt);
  for (int i = 0; i < ns; ++i) a(i) = supply(rows[i]);
  for (int j = 0; j < nt; ++j) b(j) = demand(cols[j]);
  b *= total_a / b.sum();
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nt; ++j) c(i, j) = cost(rows[i], cols[j]);

  Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(supply.size(), demand.size());
  auto finish = [&](const Basis& basis) {
    double value = 0.0;
    for (const auto& cell : basis.cells) {
      plan(rows[cell.i], cols[cell.j]) += cell.flow;
      value += cell.flow * c(cell.i, cell.j);
    }
    return TransportPlan{std::move(plan), value};
  };

  if (ns == 1 || nt == 1) {
    Basis trivial{ns, nt, {}};
    if (ns == 1)
      for (int j = 0; j < nt; ++j) trivial.cells.push_back({0, j, b(j)});
    else
      for (int i = 0; i < ns; ++i) trivial.cells.push_back({i, 0, a(i)});
    return finish(trivial);
  }

  Basis basis = northwest_corner(a, b);
  Eigen::VectorXd u(ns), v(nt);
  const double tol = 1e-11 * std::max(1.0, c.cwiseAbs().maxCoeff());
  const long bland_after = 50L * (ns + nt + 1);
  const long max_pivots = 2000L * (ns + nt + 1);

  for (long iter = 0;; ++iter) {
    if (iter > max_pivots)
      throw NotConverged("transport simplex exceeded pivot budget", 0.0);
    compute_duals(basis, c, u, v);

    // entering arc: most negative reduced cost (first negative once the
    // Bland fallback kicks in, which cannot cycle)
    int ei = -1, ej = -1;
    double best = -tol;
    const bool bland = iter > bland_after;
    for (int i = 0; i < ns && (ei == -1 || !bland); ++i)
      for (int j = 0; j < nt; ++j) {
        const double r = c(i, j) - u(i) - v(j);
        if (r < best) {
          best = r;
          ei = i;
          ej = j;
          if (bland) break;
        }
      }
    if (ei == -1) break;  // optimal

    const auto path = tree_path(basis, ei, ej);
    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (size_t t = 0; t < path.size(); t += 2) {  // '-' positions
      if (basis.cells[path[t]].flow < theta) {
        theta = basis.cells[path[t]].flow;
        leaving = path[t];
      }
    }
    for (size_t t = 0; t < path.size(); ++t) {
      auto& cell = basis.cells[path[t]];
      cell.flow = (t % 2 == 0) ? std::max(0.0, cell.flow - theta) : cell.flow + theta;
    }
    basis.cells[leaving] = {ei, ej, theta};
  }
  return finish(basis);
}

double sinkhorn_cost(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                     const Eigen::MatrixXd& cost, double reg, int max_iter) {
  if (reg <= 0.0) throw InvalidDistribution("regularization must be positive");
  const int ns = static_cast<int>(supply.size()), nt = static_cast<int>(demand.size());
  const Eigen::VectorXd log_a = supply.array().max(1e-300).log();
  const Eigen::VectorXd log_b = demand.array().max(1e-300).log();
  Eigen::VectorXd f = Eigen::VectorXd::Zero(ns), g = Eigen::VectorXd::Zero(nt);

  auto lse_rows = [&](const Eigen::MatrixXd& m) -> Eigen::VectorXd {
    const Eigen::VectorXd mx = m.rowwise().maxCoeff();
    return ((m.colwise() - mx).array().exp().rowwise().sum().log() + mx.array()).matrix();
  };

  double violation = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd log_pi(ns, nt);
  for (int it = 0; it < max_iter; ++it) {
    // f-update makes row marginals exact; then g; then check rows again
    Eigen::MatrixXd k = (g.transpose().replicate(ns, 1) - cost) / reg;
    f = reg * (log_a - lse_rows(k));
    k = ((f.replicate(1, nt) - cost).transpose()) / reg;
    g = reg * (log_b - lse_rows(k));

    log_pi = ((f.replicate(1, nt) + g.transpose().replicate(ns, 1) - cost) / reg);
    const Eigen::VectorXd row_sums = log_pi.array().exp().matrix().rowwise().sum();
    violation = (row_sums - supply).cwiseAbs().sum();
    if (violation < 1e-9) {
      const Eigen::MatrixXd pi = log_pi.array().exp();
      return (pi.array() * cost.array()).sum();
    }
  }
  throw NotConverged("sinkhorn did not reach marginal tolerance", violation);
}

}  // namespace dgsp
