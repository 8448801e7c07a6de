#include "dgsp/pipelines/filter_learning.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dgsp {

namespace {

std::vector<Eigen::MatrixXd> powers_of_shift(const Graph& g, GsoKind kind, int degree) {
  const Eigen::MatrixXd s = gso(g, kind);
  std::vector<Eigen::MatrixXd> powers;
  powers.push_back(Eigen::MatrixXd::Identity(g.size(), g.size()));
  for (int k = 1; k <= degree; ++k) powers.push_back(powers.back() * s);
  return powers;
}

Eigen::MatrixXd assemble_filter(const Eigen::MatrixXd& theta,
                                const std::vector<Eigen::MatrixXd>& powers, double a,
                                int coeff_degree) {
  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(powers[0].rows(), powers[0].cols());
  for (int k = 0; k < theta.rows(); ++k) {
    double c = 0.0, ap = 1.0;
    for (int q = 0; q <= coeff_degree; ++q, ap *= a) c += theta(k, q) * ap;
    f += c * powers[k];
  }
  return f;
}

}  // namespace

std::vector<double> FilterFamily::coeffs_at(double a) const {
  std::vector<double> c(degree + 1, 0.0);
  for (int k = 0; k <= degree; ++k) {
    double ap = 1.0;
    for (int q = 0; q <= coeff_degree; ++q, ap *= a) c[k] += theta(k, q) * ap;
  }
  return c;
}

Eigen::MatrixXd FilterFamily::filter_at(const Graph& g, double a) const {
  return assemble_filter(theta, powers_of_shift(g, gso, degree), a, coeff_degree);
}

GroupStats group_stats(const SignalGroup& g) {
  GroupStats s;
  const auto days_in = static_cast<double>(g.inputs.rows());
  const auto days_out = static_cast<double>(g.targets.rows());
  s.a = g.inputs.row(0).mean();
  s.mean_in = g.inputs.colwise().mean();
  s.mean_out = g.targets.colwise().mean();
  Eigen::MatrixXd c = g.inputs;
  c.rowwise() -= s.mean_in.transpose();
  s.var_in = c.colwise().squaredNorm() / days_in;
  c = g.targets;
  c.rowwise() -= s.mean_out.transpose();
  s.var_out = c.colwise().squaredNorm() / days_out;
  return s;
}

double diagonal_w2_loss(const Eigen::MatrixXd& theta, const std::vector<GroupStats>& stats,
                        const std::vector<Eigen::MatrixXd>& shift_powers, int coeff_degree) {
  double loss = 0.0;
  for (const auto& s : stats) {
    const Eigen::MatrixXd f = assemble_filter(theta, shift_powers, s.a, coeff_degree);
    const Eigen::VectorXd mean_err = f * s.mean_in - s.mean_out;
    const Eigen::VectorXd pred_var = (f.array().square().matrix() * s.var_in).cwiseMax(0.0);
    const Eigen::VectorXd std_err =
        pred_var.cwiseSqrt() - s.var_out.cwiseMax(0.0).cwiseSqrt();
    loss += mean_err.squaredNorm() + std_err.squaredNorm();
  }
  return loss;
}

namespace {

Eigen::MatrixXd pointwise_least_squares(const std::vector<SignalGroup>& groups,
                                        const std::vector<Eigen::MatrixXd>& powers,
                                        int degree, int coeff_degree) {
  const int n = static_cast<int>(powers[0].rows());
  const int unknowns = (degree + 1) * (coeff_degree + 1);
  long rows = 0;
  for (const auto& g : groups) rows += g.inputs.rows() * n;

  Eigen::MatrixXd design(rows, unknowns);
  Eigen::VectorXd rhs(rows);
  long at = 0;
  for (const auto& g : groups) {
    const double a = g.inputs.row(0).mean();
    for (Eigen::Index day = 0; day < g.inputs.rows(); ++day) {
      const Eigen::VectorXd x = g.inputs.row(day).transpose();
      int col = 0;
      for (int k = 0; k <= degree; ++k) {
        const Eigen::VectorXd sx = powers[k] * x;
        double ap = 1.0;
        for (int q = 0; q <= coeff_degree; ++q, ap *= a)
          design.block(at, col++, n, 1) = ap * sx;
      }
      rhs.segment(at, n) = g.targets.row(day).transpose();
      at += n;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < unknowns)
    throw SingularNormalEquations("design matrix rank " + std::to_string(qr.rank()) +
                                  " below unknown count " + std::to_string(unknowns));
  const Eigen::VectorXd flat = qr.solve(rhs);
  Eigen::MatrixXd theta(degree + 1, coeff_degree + 1);
  int col = 0;
  for (int k = 0; k <= degree; ++k)
    for (int q = 0; q <= coeff_degree; ++q) theta(k, q) = flat(col++);
  return theta;
}

// Analytic gradient of the diagonal W2 loss.
Eigen::MatrixXd loss_gradient(const Eigen::MatrixXd& theta,
                              const std::vector<GroupStats>& stats,
                              const std::vector<Eigen::MatrixXd>& powers, int coeff_degree) {
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(theta.rows(), theta.cols());
  for (const auto& s : stats) {
    const Eigen::MatrixXd f = assemble_filter(theta, powers, s.a, coeff_degree);
    const Eigen::VectorXd mean_err = f * s.mean_in - s.mean_out;
    const Eigen::VectorXd pred_var =
        ((f.array().square().matrix()) * s.var_in).cwiseMax(1e-18);
    const Eigen::VectorXd pred_std = pred_var.cwiseSqrt();
    const Eigen::VectorXd target_std = s.var_out.cwiseMax(0.0).cwiseSqrt();
    // d/dv (sqrt(v) - t)^2 = 1 - t/sqrt(v)
    const Eigen::VectorXd wv =
        (Eigen::VectorXd::Ones(pred_std.size()) - target_std.cwiseQuotient(pred_std));
    const Eigen::MatrixXd f_ds = f * s.var_in.asDiagonal();
    for (int k = 0; k < theta.rows(); ++k) {
      const double mean_part = 2.0 * mean_err.dot(powers[k] * s.mean_in);
      // dv_i/dc_k = 2 (F diag(var_in) P_k^T)_ii
      const double var_part =
          2.0 * wv.dot((f_ds.array() * powers[k].array()).rowwise().sum().matrix());
      double ap = 1.0;
      for (int q = 0; q <= coeff_degree; ++q, ap *= s.a)
        grad(k, q) += ap * (mean_part + var_part);
    }
  }
  return grad;
}

}  // namespace

LearnResult learn_predictive_filter(const std::vector<SignalGroup>& groups, const Graph& g,
                                    const LearnOptions& options) {
  if (groups.empty()) throw InvalidDistribution("no training groups");
  for (const auto& grp : groups)
    if (grp.inputs.cols() != g.size() || grp.targets.cols() != g.size() ||
        grp.inputs.rows() < 1 || grp.inputs.rows() != grp.targets.rows())
      throw DimensionMismatch("group shape does not match graph size");

  const auto powers = powers_of_shift(g, options.gso, options.degree);

  LearnResult result;
  result.family.gso = options.gso;
  result.family.degree = options.degree;
  result.family.coeff_degree = options.coeff_degree;

  if (options.mode == LearnMode::Pointwise) {
    result.family.theta =
        pointwise_least_squares(groups, powers, options.degree, options.coeff_degree);
    double loss = 0.0;
    for (const auto& grp : groups) {
      const double a = grp.inputs.row(0).mean();
      const Eigen::MatrixXd f =
          assemble_filter(result.family.theta, powers, a, options.coeff_degree);
      loss += (grp.inputs * f.transpose() - grp.targets).squaredNorm();
    }
    result.final_loss = loss;
    return result;
  }

  // distributional mode
  std::vector<GroupStats> stats;
  stats.reserve(groups.size());
  for (const auto& grp : groups) stats.push_back(group_stats(grp));

  Eigen::MatrixXd theta =
      options.init ? *options.init
                   : pointwise_least_squares(groups, powers, options.degree,
                                             options.coeff_degree);
  if (theta.rows() != options.degree + 1 || theta.cols() != options.coeff_degree + 1)
    throw DimensionMismatch("init coefficient shape mismatch");

  double loss = diagonal_w2_loss(theta, stats, powers, options.coeff_degree);
  result.loss_history.push_back(loss);
  double step = 1.0;
  bool converged = false;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Eigen::MatrixXd grad =
        loss_gradient(theta, stats, powers, options.coeff_degree);
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 < 1e-24) {
      converged = true;
      break;
    }
    // backtracking line search (Armijo)
    double trial_loss;
    Eigen::MatrixXd trial;
    step *= 2.0;  // allow growth after a good step
    while (true) {
      trial = theta - step * grad;
      trial_loss = diagonal_w2_loss(trial, stats, powers, options.coeff_degree);
      if (trial_loss <= loss - 1e-4 * step * gnorm2 || step < 1e-18) break;
      step *= 0.5;
    }
    if (trial_loss >= loss) break;  // no descent direction at machine precision
    const double improvement = (loss - trial_loss) / std::max(loss, 1e-300);
    theta = trial;
    loss = trial_loss;
    result.loss_history.push_back(loss);
    if (improvement < options.tol) {
      converged = true;
      break;
    }
  }
  if (!converged && result.loss_history.size() >= static_cast<size_t>(options.max_iter))
    throw NotConverged("distributional filter fit hit the iteration cap", loss);

  result.family.theta = theta;
  result.final_loss = loss;
  return result;
}

SnrTable evaluate_snr(const FilterFamily& family, const Graph& g,
                      const std::vector<SignalGroup>& test_groups) {
  const auto powers = powers_of_shift(g, family.gso, family.degree);
  SnrTable table;
  for (const auto& grp : test_groups) {
    for (Eigen::Index day = 0; day < grp.inputs.rows(); ++day) {
      const Eigen::VectorXd x = grp.inputs.row(day).transpose();
      const Eigen::VectorXd y = grp.targets.row(day).transpose();
      const double a = x.mean();
      const Eigen::MatrixXd f = assemble_filter(family.theta, powers, a, family.coeff_degree);
      const double err = (y - f * x).norm();
      double snr;
      if (err == 0.0)
        snr = 300.0;
      else if (y.norm() == 0.0)
        snr = -300.0;
      else
        snr = std::clamp(20.0 * std::log10(y.norm() / err), -300.0, 300.0);
      table.per_signal_db.push_back(snr);
    }
  }
  if (!table.per_signal_db.empty()) {
    double total = 0.0;
    for (double v : table.per_signal_db) total += v;
    table.mean_db = total / static_cast<double>(table.per_signal_db.size());
  }
  return table;
}

}  // namespace dgsp
