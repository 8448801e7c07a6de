#pragma once

#include <Eigen/Dense>

namespace dgsp {

struct TransportPlan {
  Eigen::MatrixXd plan;  // rows index supply atoms, cols demand atoms
  double cost;           // <plan, cost_matrix>
};

/// Exact solution of the balanced transportation problem
///   min <pi, cost>  s.t.  pi 1 = supply, pi^T 1 = demand, pi >= 0
/// by the network simplex specialized to the bipartite support graph
/// (northwest-corner start, spanning-tree pivots, Bland fallback against
/// degenerate cycling). Supply and demand must be nonnegative with equal
/// totals within 1e-9; demand is rescaled to balance exactly.
TransportPlan transport_simplex(const Eigen::VectorXd& supply,
                                const Eigen::VectorXd& demand,
                                const Eigen::MatrixXd& cost);

/// Entropic-regularized transport cost <pi, cost> via log-domain Sinkhorn
/// iterations; stops when the L1 marginal violation drops below 1e-9.
/// The value upper-bounds the exact cost up to O(reg * log support).
double sinkhorn_cost(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                     const Eigen::MatrixXd& cost, double reg, int max_iter);

}  // namespace dgsp
