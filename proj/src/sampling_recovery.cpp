#include "dgsp/sampling_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dgsp {

ProjectionOperatorPair::ProjectionOperatorPair(OperatorPair base) : base_(std::move(base)) {
  if (!std::holds_alternative<ProjectionFilter>(base_.filter.v))
    throw FilterEvaluationFailed("projection operator pair requires a projection filter");
}

SampleSet make_sample_set(std::vector<int> indices, Eigen::VectorXd values) {
  if (indices.size() != static_cast<size_t>(values.size()))
    throw DimensionMismatch("sample index and value counts differ");
  std::vector<size_t> order(indices.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return indices[a] < indices[b]; });
  SampleSet out;
  out.indices.reserve(indices.size());
  out.values.resize(values.size());
  for (size_t i = 0; i < order.size(); ++i) {
    out.indices.push_back(indices[order[i]]);
    out.values(i) = values(order[i]);
  }
  for (size_t i = 0; i + 1 < out.indices.size(); ++i)
    if (out.indices[i] == out.indices[i + 1])
      throw IndexOutOfRange("duplicate sample vertex " + std::to_string(out.indices[i]));
  return out;
}

double invariance_deficit(const DistSignal& mu, const ProjectionOperatorPair& p,
                          const W2Budget& budget) {
  PushOptions opt;
  opt.budget = budget.samples;
  opt.seed = budget.seed;
  const DistSignal pushed = pushforward(p.base(), mu, opt);
  return w2(mu, pushed, budget).value;
}

namespace {

double smallest_singular_value(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().minCoeff();
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& m, const std::vector<int>& rows) {
  Eigen::MatrixXd out(rows.size(), m.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= m.rows())
      throw IndexOutOfRange("vertex index " + std::to_string(rows[i]) + " out of range");
    out.row(i) = m.row(rows[i]);
  }
  return out;
}

}  // namespace

std::vector<int> choose_sample_set(const Eigen::MatrixXd& basis, int extra) {
  const int n = static_cast<int>(basis.rows());
  const int m = static_cast<int>(basis.cols());
  const int target = m + extra;
  if (target > n) throw RankDeficient("not enough vertices for the requested sample count");

  std::vector<int> selected;
  std::vector<char> used(n, 0);
  for (int step = 0; step < target; ++step) {
    int best_row = -1;
    double best_sigma = -1.0;
    for (int r = 0; r < n; ++r) {
      if (used[r]) continue;
      selected.push_back(r);
      const double sigma = smallest_singular_value(select_rows(basis, selected));
      selected.pop_back();
      if (sigma > best_sigma + 1e-15) {  // strict improvement keeps ties at the smaller index
        best_sigma = sigma;
        best_row = r;
      }
    }
    selected.push_back(best_row);
    used[best_row] = 1;
    if (step == m - 1 && best_sigma <= 1e-8)
      throw RankDeficient("no sample set reaches singular value above 1e-8");
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

Eigen::VectorXd recover_bandlimited(const Eigen::MatrixXd& basis, const SampleSet& samples) {
  const int m = static_cast<int>(basis.cols());
  if (static_cast<int>(samples.indices.size()) < m)
    throw RankDeficient("need at least as many samples as the subspace dimension");
  const Eigen::MatrixXd sub = select_rows(basis, samples.indices);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
  qr.setThreshold(1e-10);
  if (qr.rank() < m) throw RankDeficient("selected rows do not span the subspace");
  return basis * qr.solve(samples.values);
}

std::vector<int> consistent_candidates(const std::vector<Eigen::MatrixXd>& candidates,
                                       const SampleSet& samples, double tau_rel) {
  const double tau = tau_rel * std::max(samples.values.norm(), 1e-12);
  std::vector<int> passing;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const Eigen::MatrixXd sub = select_rows(candidates[i], samples.indices);
    const Eigen::VectorXd coeff = sub.colPivHouseholderQr().solve(samples.values);
    if ((sub * coeff - samples.values).norm() < tau) passing.push_back(static_cast<int>(i));
  }
  return passing;
}

SubspaceMatch identify_subspace(const std::vector<Eigen::MatrixXd>& candidates,
                                const SampleSet& samples) {
  if (candidates.empty()) throw NoMatch("no candidate subspaces given");
  const int m = static_cast<int>(candidates.front().cols());
  for (const auto& c : candidates)
    if (c.cols() != m) throw DimensionMismatch("candidate subspace dimensions differ");
  if (static_cast<int>(samples.indices.size()) != m + 1)
    throw DimensionMismatch("identification needs exactly m+1 samples, got " +
                            std::to_string(samples.indices.size()));

  std::vector<double> residuals;
  residuals.reserve(candidates.size());
  for (const auto& c : candidates) {
    const Eigen::MatrixXd sub = select_rows(c, samples.indices);
    const Eigen::VectorXd coeff = sub.colPivHouseholderQr().solve(samples.values);
    residuals.push_back((sub * coeff - samples.values).norm());
  }
  const std::vector<int> passing = consistent_candidates(candidates, samples);
  if (passing.empty()) throw NoMatch("no candidate subspace fits the observations");
  if (passing.size() > 1)
    throw Ambiguous(std::to_string(passing.size()) + " candidates fit the observations",
                    passing);
  const int j = passing.front();
  return SubspaceMatch{j, recover_bandlimited(candidates[j], samples), std::move(residuals)};
}

}  // namespace dgsp
