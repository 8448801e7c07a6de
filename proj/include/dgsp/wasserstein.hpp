#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "dgsp/dist_signal.hpp"

namespace dgsp {

/// Optimal coupling between two finite supports: row sums reproduce the
/// first marginal and column sums the second, within 1e-9.
struct CouplingPlan {
  Eigen::MatrixXd pi;
  double cost;  // sum_ij pi(i,j) * |x_i - y_j|^2
};

/// Symmetric PSD square root R with R*R = m. Eigenvalues in [-1e-6, 0)
/// are clipped to zero; below that the input is rejected.
Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m);

/// W2 distance from mu to the point mass at y, by moment expansion:
/// sqrt(|mean(mu) - y|^2 + trace(cov(mu))).
double w2_delta(const DistSignal& mu, const Eigen::VectorXd& y);

/// Closed-form W2 between Gaussians:
/// sqrt(|x1-x2|^2 + trace(S1 + S2 - 2 (S2^1/2 S1 S2^1/2)^1/2)), with the
/// trace term clamped to zero when rounding pushes it within -1e-8.
double w2_gaussian(const Gaussian& a, const Gaussian& b);

struct ExactW2 {
  double distance;  // sqrt of the optimal cost
  CouplingPlan plan;
};

/// Exact discrete W2 via the network simplex; rejects instances with more
/// than `support_cap` combined support points.
ExactW2 w2_empirical_exact(const Empirical& a, const Empirical& b, int support_cap = 512);

/// Entropic approximation of the squared W2 cost (not its square root);
/// single-atom supports give the exact |x-y|^2 regardless of reg.
double w2_sinkhorn(const Empirical& a, const Empirical& b, double reg, int max_iter = 20000);

enum class W2Route { DeltaClosedForm, GaussianClosedForm, ExactEmpirical, Sinkhorn };

struct W2Budget {
  int samples = 256;
  std::uint64_t seed = 0;
  int support_cap = 512;
};

struct W2Result {
  double value;
  W2Route route;
};

/// W2 dispatcher: delta pairs and any-vs-delta use the moment expansion,
/// Gaussian pairs the closed form; anything else is reduced to empiricals
/// of at most `budget.samples` points per side (sampling with the given
/// seed) and solved exactly, or by Sinkhorn above the support cap.
W2Result w2(const DistSignal& a, const DistSignal& b, const W2Budget& budget);

const char* w2_route_name(W2Route route);

}  // namespace dgsp
