#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "dgsp/dist_signal.hpp"

namespace dgsp {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kLogLikTol = 1e-7;

struct RawComponent {
  double weight;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

struct FitResult {
  std::vector<RawComponent> components;
  double loglik;
};

double ridge_for(const Eigen::MatrixXd& cov) {
  const double tr = cov.trace();
  const double eps = 1e-8 * tr / static_cast<double>(cov.rows());
  return eps > 0.0 ? eps : 1e-12;
}

// log N(x; mean, cov) for all points at once; cov must be PD (caller adds ridge)
Eigen::VectorXd log_density(const Eigen::MatrixXd& points, const RawComponent& c) {
  const int n = static_cast<int>(points.cols());
  Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
  Eigen::MatrixXd cov = c.cov;
  double ridge = ridge_for(cov);
  while (llt.info() != Eigen::Success) {
    cov += ridge * Eigen::MatrixXd::Identity(n, n);
    ridge *= 10.0;
    llt.compute(cov);
  }
  double logdet = 0.0;
  for (int i = 0; i < n; ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  Eigen::MatrixXd centered = points;
  centered.rowwise() -= c.mean.transpose();
  // solve L y = x per point; quadratic form is |y|^2
  const Eigen::MatrixXd y = llt.matrixL().solve(centered.transpose());
  const Eigen::VectorXd quad = y.colwise().squaredNorm();
  const double norm_const = -0.5 * (n * std::log(2.0 * M_PI) + logdet);
  return (norm_const - 0.5 * quad.array()).matrix();
}

std::vector<int> kmeanspp_seeds(const Eigen::MatrixXd& points, int k, rng::Stream stream) {
  const int count = static_cast<int>(points.rows());
  std::vector<int> centers;
  centers.push_back(static_cast<int>(stream.index_below(0, count)));
  Eigen::VectorXd d2 =
      (points.rowwise() - points.row(centers[0])).rowwise().squaredNorm();
  for (int t = 1; t < k; ++t) {
    const double total = d2.sum();
    int pick;
    if (total <= 0.0) {
      pick = static_cast<int>(stream.index_below(t, count));
    } else {
      pick = categorical(d2 / total, stream.uniform01(t));
    }
    centers.push_back(pick);
    d2 = d2.cwiseMin((points.rowwise() - points.row(pick)).rowwise().squaredNorm());
  }
  return centers;
}

FitResult fit_k(const Eigen::MatrixXd& points, const Eigen::VectorXd& point_weights, int k,
                rng::Stream stream) {
  const int count = static_cast<int>(points.rows());
  const int n = static_cast<int>(points.cols());

  // shared initial covariance: global weighted scatter
  const Eigen::VectorXd gmean = points.transpose() * point_weights;
  Eigen::MatrixXd centered = points;
  centered.rowwise() -= gmean.transpose();
  Eigen::MatrixXd gcov = centered.transpose() * point_weights.asDiagonal() * centered;
  gcov += ridge_for(gcov) * Eigen::MatrixXd::Identity(n, n);

  std::vector<RawComponent> comps(k);
  const auto seeds = kmeanspp_seeds(points, k, stream);
  for (int j = 0; j < k; ++j)
    comps[j] = {1.0 / k, points.row(seeds[j]).transpose(), gcov};

  Eigen::MatrixXd logp(count, k);
  double prev = -std::numeric_limits<double>::infinity();
  double loglik = prev;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    // E step in the log domain
    for (int j = 0; j < k; ++j)
      logp.col(j) = log_density(points, comps[j]).array() + std::log(comps[j].weight);
    const Eigen::VectorXd rowmax = logp.rowwise().maxCoeff();
    const Eigen::VectorXd lse =
        ((logp.colwise() - rowmax).array().exp().rowwise().sum().log() + rowmax.array())
            .matrix();
    loglik = point_weights.dot(lse) * count;  // weighted total log-likelihood
    Eigen::MatrixXd resp = (logp.colwise() - lse).array().exp();
    resp.array().colwise() *= point_weights.array();

    // M step
    for (int j = 0; j < k; ++j) {
      const double mass = resp.col(j).sum();
      comps[j].weight = mass;
      if (mass < 1e-300) continue;  // empty component; dropped by the weight rule
      comps[j].mean = points.transpose() * resp.col(j) / mass;
      Eigen::MatrixXd c = points;
      c.rowwise() -= comps[j].mean.transpose();
      comps[j].cov = c.transpose() * resp.col(j).asDiagonal() * c / mass;
      comps[j].cov += ridge_for(comps[j].cov) * Eigen::MatrixXd::Identity(n, n);
    }

    if (loglik - prev < kLogLikTol && iter > 0) break;
    prev = loglik;
  }
  return {std::move(comps), loglik};
}

Mixture to_mixture(std::vector<RawComponent> comps) {
  std::stable_sort(comps.begin(), comps.end(),
                   [](const RawComponent& a, const RawComponent& b) {
                     return a.weight > b.weight;
                   });
  std::vector<Mixture::Component> out;
  out.reserve(comps.size());
  for (auto& c : comps)
    out.push_back({c.weight, Gaussian(std::move(c.mean), std::move(c.cov))});
  return Mixture(std::move(out));
}

}  // namespace

Mixture fit_mixture_em_weighted(const Eigen::MatrixXd& points,
                                const Eigen::VectorXd& point_weights, int k_max,
                                std::uint64_t seed) {
  const int count = static_cast<int>(points.rows());
  if (k_max < 1) throw InvalidDistribution("k_max must be >= 1");
  if (count < k_max) throw TooFewSamples("need at least k_max points");

  const auto root = rng::root(seed);
  double best_bic = std::numeric_limits<double>::infinity();
  std::vector<RawComponent> best;
  const double n = static_cast<double>(points.cols());
  const double weight_floor = 1.0 / (10.0 * count);

  for (int k = 1; k <= k_max; ++k) {
    int k_eff = k;
    FitResult fit;
    // a component collapsing below the weight floor triggers a refit with
    // one fewer component
    while (true) {
      fit = fit_k(points, point_weights, k_eff, root.substream(k_eff));
      const bool degenerate = std::any_of(
          fit.components.begin(), fit.components.end(),
          [&](const RawComponent& c) { return c.weight < weight_floor; });
      if (!degenerate || k_eff == 1) break;
      --k_eff;
    }
    const double params = (k_eff - 1) + k_eff * n + k_eff * n * (n + 1) / 2.0;
    const double bic = -2.0 * fit.loglik + params * std::log(static_cast<double>(count));
    if (bic < best_bic) {
      best_bic = bic;
      best = std::move(fit.components);
    }
  }
  return to_mixture(std::move(best));
}

Mixture fit_mixture_em(const Eigen::MatrixXd& points, int k_max, std::uint64_t seed) {
  const int count = static_cast<int>(points.rows());
  return fit_mixture_em_weighted(
      points, Eigen::VectorXd::Constant(count, 1.0 / count), k_max, seed);
}

Mixture fit_mixture_em(const SampleBatch& batch, int k_max, std::uint64_t seed) {
  return fit_mixture_em(batch.points, k_max, seed);
}

}  // namespace dgsp
