#pragma once

#include <optional>
#include <vector>

#include "dgsp/graph.hpp"
#include "dgsp/operators.hpp"

namespace dgsp {

/// Polynomial filter family in a shift operator whose coefficients are
/// themselves polynomials in a scalar summary a of the input signal:
/// F(a) = sum_k c_k(a) S^k with c_k(a) = sum_q theta(k, q) a^q.
struct FilterFamily {
  GsoKind gso = GsoKind::NormalizedLaplacian;
  int degree = 2;        // filter degree in the shift operator, <= 2
  int coeff_degree = 0;  // 0 (constant) or 2 (quadratic in a)
  Eigen::MatrixXd theta;  // (degree+1) x (coeff_degree+1), monomial basis in a

  std::vector<double> coeffs_at(double a) const;
  Eigen::MatrixXd filter_at(const Graph& g, double a) const;
  PolynomialFilter to_filter_map(double a) const { return {coeffs_at(a), gso}; }
};

/// A training group: input signals (one day per row) and the matching
/// future readings (same shape).
struct SignalGroup {
  Eigen::MatrixXd inputs;
  Eigen::MatrixXd targets;
};

enum class LearnMode { Pointwise, Distributional };

struct LearnOptions {
  LearnMode mode = LearnMode::Pointwise;
  int degree = 2;
  int coeff_degree = 0;
  GsoKind gso = GsoKind::NormalizedLaplacian;
  // distributional mode (gradient descent with backtracking)
  int max_iter = 2000;
  double tol = 1e-8;                        // relative improvement stop
  std::optional<Eigen::MatrixXd> init;      // defaults to the pointwise solution
};

struct LearnResult {
  FilterFamily family;
  double final_loss = 0.0;
  std::vector<double> loss_history;  // distributional mode only
};

/// Pointwise mode: closed-form least squares over all (signal, target)
/// pairs. Distributional mode: per-group diagonal Gaussians (per-station
/// mean/variance over the group days) fitted by minimizing the separable
/// diagonal W2 loss with gradient descent.
LearnResult learn_predictive_filter(const std::vector<SignalGroup>& groups, const Graph& g,
                                    const LearnOptions& options);

/// Per-group summary statistics used by the distributional loss.
struct GroupStats {
  double a = 0.0;            // mean of the first input day over stations
  Eigen::VectorXd mean_in, var_in;
  Eigen::VectorXd mean_out, var_out;
};

GroupStats group_stats(const SignalGroup& g);

/// Diagonal W2 loss at theta for precomputed group statistics.
double diagonal_w2_loss(const Eigen::MatrixXd& theta, const std::vector<GroupStats>& stats,
                        const std::vector<Eigen::MatrixXd>& shift_powers, int coeff_degree);

struct SnrTable {
  std::vector<double> per_signal_db;
  double mean_db = 0.0;
};

/// Per test pair (x, y): evaluate the family at a_x (the station average
/// of x) and report 20 log10(|y| / |y - F x|), capped at +-300 dB.
SnrTable evaluate_snr(const FilterFamily& family, const Graph& g,
                      const std::vector<SignalGroup>& test_groups);

}  // namespace dgsp
