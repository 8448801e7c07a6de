#include "dgsp/wasserstein.hpp"

#include <cmath>
#include <string>

#include "dgsp/transport.hpp"

namespace dgsp {

Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  if (m.cols() != n) throw NotSymmetric("matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw NotSymmetric("matrix deviates from symmetry");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (m + m.transpose()));
  Eigen::VectorXd lambda = solver.eigenvalues();
  if (lambda.size() > 0 && lambda(0) < -1e-6 * scale)
    throw NotPSD("eigenvalue " + std::to_string(lambda(0)) + " below PSD tolerance");
  lambda = lambda.cwiseMax(0.0);
  return solver.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
         solver.eigenvectors().transpose();
}

double w2_delta(const DistSignal& mu, const Eigen::VectorXd& y) {
  if (mu.dim() != y.size()) throw DimensionMismatch("point dimension does not match signal");
  if (mu.is<Delta>()) return (mu.as<Delta>().point - y).norm();
  const Moments m = moments(mu);
  return std::sqrt((m.mean - y).squaredNorm() + m.cov.trace());
}

double w2_gaussian(const Gaussian& a, const Gaussian& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("Gaussian dimensions differ");
  const Eigen::MatrixXd rb = spd_sqrt(b.cov());
  const Eigen::MatrixXd cross = spd_sqrt(rb * a.cov() * rb);
  double bures = a.cov().trace() + b.cov().trace() - 2.0 * cross.trace();
  if (bures < 0.0) {
    if (bures < -1e-8)
      throw NotPSD("Bures trace term " + std::to_string(bures) + " below clamp tolerance");
    bures = 0.0;
  }
  return std::sqrt((a.mean() - b.mean()).squaredNorm() + bures);
}

namespace {

Eigen::MatrixXd squared_distance_matrix(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys) {
  Eigen::MatrixXd c(xs.rows(), ys.rows());
  for (Eigen::Index i = 0; i < xs.rows(); ++i)
    for (Eigen::Index j = 0; j < ys.rows(); ++j)
      c(i, j) = (xs.row(i) - ys.row(j)).squaredNorm();
  return c;
}

}  // namespace

ExactW2 w2_empirical_exact(const Empirical& a, const Empirical& b, int support_cap) {
  if (a.dim() != b.dim()) throw DimensionMismatch("empirical dimensions differ");
  if (a.count() + b.count() > support_cap)
    throw SupportTooLarge("combined support " + std::to_string(a.count() + b.count()) +
                          " exceeds cap " + std::to_string(support_cap) +
                          "; use w2_sinkhorn");
  const Eigen::MatrixXd cost = squared_distance_matrix(a.points(), b.points());
  TransportPlan t = transport_simplex(a.weights(), b.weights(), cost);
  const double c = std::max(0.0, t.cost);
  return {std::sqrt(c), CouplingPlan{std::move(t.plan), t.cost}};
}

double w2_sinkhorn(const Empirical& a, const Empirical& b, double reg, int max_iter) {
  if (a.dim() != b.dim()) throw DimensionMismatch("empirical dimensions differ");
  const Eigen::MatrixXd cost = squared_distance_matrix(a.points(), b.points());
  return sinkhorn_cost(a.weights(), b.weights(), cost, reg, max_iter);
}

namespace {

// Reduce any signal to an empirical of at most `budget` points; existing
// empiricals at or below the budget pass through unchanged.
Empirical to_empirical(const DistSignal& d, int budget, std::uint64_t seed) {
  if (d.is<Empirical>() && d.as<Empirical>().count() <= budget) return d.as<Empirical>();
  return Empirical::uniform(sample(d, budget, seed).points);
}

}  // namespace

W2Result w2(const DistSignal& a, const DistSignal& b, const W2Budget& budget) {
  if (a.dim() != b.dim()) throw DimensionMismatch("signal dimensions differ");
  if (a.is<Delta>()) return {w2_delta(b, a.as<Delta>().point), W2Route::DeltaClosedForm};
  if (b.is<Delta>()) return {w2_delta(a, b.as<Delta>().point), W2Route::DeltaClosedForm};
  if (a.is<Gaussian>() && b.is<Gaussian>())
    return {w2_gaussian(a.as<Gaussian>(), b.as<Gaussian>()), W2Route::GaussianClosedForm};

  const auto root = rng::root(budget.seed);
  const Empirical ea = to_empirical(a, budget.samples, root.substream(0).key());
  const Empirical eb = to_empirical(b, budget.samples, root.substream(1).key());
  if (ea.count() + eb.count() <= budget.support_cap)
    return {w2_empirical_exact(ea, eb, budget.support_cap).distance, W2Route::ExactEmpirical};

  const Eigen::MatrixXd cost = squared_distance_matrix(ea.points(), eb.points());
  const double reg = 1e-3 * std::max(1.0, cost.maxCoeff());
  const double value = sinkhorn_cost(ea.weights(), eb.weights(), cost, reg, 20000);
  return {std::sqrt(std::max(0.0, value)), W2Route::Sinkhorn};
}

const char* w2_route_name(W2Route route) {
  switch (route) {
    case W2Route::DeltaClosedForm: return "delta_closed_form";
    case W2Route::GaussianClosedForm: return "gaussian_closed_form";
    case W2Route::ExactEmpirical: return "exact_empirical";
    case W2Route::Sinkhorn: return "sinkhorn";
  }
  return "unknown";
}

}  // namespace dgsp
