#pragma once

#include "dgsp/operators.hpp"
#include "dgsp/wasserstein.hpp"

namespace dgsp {

/// Operator pair whose filter is a spectral projection; every matrix in
/// any of its matrix laws is a symmetric idempotent.
class ProjectionOperatorPair {
public:
  explicit ProjectionOperatorPair(OperatorPair base);
  const OperatorPair& base() const { return base_; }

private:
  OperatorPair base_;
};

/// Observed vertices (distinct, sorted ascending) and their values.
struct SampleSet {
  std::vector<int> indices;
  Eigen::VectorXd values;
};

SampleSet make_sample_set(std::vector<int> indices, Eigen::VectorXd values);

/// W2 distance between mu and its projection pushforward; zero means the
/// signal is invariant under the projection pair.
double invariance_deficit(const DistSignal& mu, const ProjectionOperatorPair& p,
                          const W2Budget& budget);

/// Greedy vertex selection for a rank-m subspace basis (n x m): each step
/// keeps the row maximizing the smallest singular value of the selected
/// submatrix; returns m + extra indices, sorted.
std::vector<int> choose_sample_set(const Eigen::MatrixXd& basis, int extra = 0);

/// Least-squares reconstruction of a subspace signal from vertex samples;
/// exact when the observations are consistent with the subspace.
Eigen::VectorXd recover_bandlimited(const Eigen::MatrixXd& basis, const SampleSet& samples);

struct SubspaceMatch {
  int index;
  Eigen::VectorXd signal;
  std::vector<double> residuals;  // per-candidate LS residual, for reporting
};

/// Candidate indices whose restricted least-squares residual is below
/// tau = tau_rel * |observations|.
std::vector<int> consistent_candidates(const std::vector<Eigen::MatrixXd>& candidates,
                                       const SampleSet& samples, double tau_rel = 1e-6);

/// Identification with m+1 samples among candidate m-dimensional bases:
/// exactly one candidate may fit the observations. Throws Ambiguous (with
/// all passing indices) or NoMatch otherwise.
SubspaceMatch identify_subspace(const std::vector<Eigen::MatrixXd>& candidates,
                                const SampleSet& samples);

}  // namespace dgsp
