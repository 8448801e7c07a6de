#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <variant>
#include <vector>

#include "dgsp/errors.hpp"
#include "dgsp/rng.hpp"

namespace dgsp {

/// Point mass at a single signal.
struct Delta {
  Eigen::VectorXd point;
};

/// Weighted finite support; weights are normalized at construction and
/// stored summing to 1.
class Empirical {
public:
  /// points: one support point per row; weights: nonnegative, sum within
  /// 1e-9 of 1 (then normalized exactly).
  Empirical(Eigen::MatrixXd points, Eigen::VectorXd weights);
  static Empirical uniform(Eigen::MatrixXd points);

  const Eigen::MatrixXd& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  int count() const { return static_cast<int>(points_.rows()); }
  int dim() const { return static_cast<int>(points_.cols()); }

private:
  Eigen::MatrixXd points_;
  Eigen::VectorXd weights_;
};

/// Multivariate normal. The covariance is validated (symmetric, smallest
/// eigenvalue >= -1e-9 with negatives clipped to zero) and an eigen-factor
/// F with F F^T = cov is precomputed for sampling.
class Gaussian {
public:
  Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  const Eigen::MatrixXd& factor() const { return factor_; }
  int dim() const { return static_cast<int>(mean_.size()); }

private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd factor_;
};

/// Convex combination of Gaussians; weights normalized at construction.
class Mixture {
public:
  struct Component {
    double weight;
    Gaussian gaussian;
  };

  explicit Mixture(std::vector<Component> components);

  const std::vector<Component>& components() const { return components_; }
  int dim() const { return components_.front().gaussian.dim(); }

private:
  std::vector<Component> components_;
};

/// A distributional graph signal: a probability distribution on R^n with
/// finite mean and variance, restricted to the four families used here.
struct DistSignal {
  std::variant<Delta, Empirical, Gaussian, Mixture> v;

  DistSignal(Delta d) : v(std::move(d)) {}
  DistSignal(Empirical e) : v(std::move(e)) {}
  DistSignal(Gaussian g) : v(std::move(g)) {}
  DistSignal(Mixture m) : v(std::move(m)) {}

  int dim() const;

  template <class T>
  bool is() const {
    return std::holds_alternative<T>(v);
  }
  template <class T>
  const T& as() const {
    return std::get<T>(v);
  }
};

/// Reproducible batch of draws: one point per row; regenerating with the
/// same (distribution, count, seed) gives bit-identical points.
struct SampleBatch {
  Eigen::MatrixXd points;
  std::uint64_t seed = 0;
  int count() const { return static_cast<int>(points.rows()); }
};

/// i.i.d. draws; point i is a pure function of (d, seed, i).
SampleBatch sample(const DistSignal& d, int count, std::uint64_t seed);

/// Draw i of the stream addressed by seed; row i of any sample() batch
/// with the same seed is bit-identical to this.
Eigen::VectorXd sample_point(const DistSignal& d, std::uint64_t seed, std::uint64_t i);

struct Moments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

/// Closed-form mean and covariance (mixtures via law of total variance).
Moments moments(const DistSignal& d);

/// Maximum-likelihood Gaussian (covariance denominator N), regularized by
/// eps*I with eps = 1e-8 * trace/n (tiny absolute floor when the scatter
/// is exactly zero).
Gaussian fit_gaussian(const Eigen::MatrixXd& points);
Gaussian fit_gaussian(const SampleBatch& batch);

/// EM over k = 1..k_max with k-means++ initialization, BIC model
/// selection, and components below weight 1/(10N) dropped (refit with one
/// fewer component). Components are returned sorted by weight descending.
Mixture fit_mixture_em(const Eigen::MatrixXd& points, int k_max, std::uint64_t seed);
Mixture fit_mixture_em(const SampleBatch& batch, int k_max, std::uint64_t seed);

/// Same EM, but points carry probability weights (nonnegative, summing to 1).
Mixture fit_mixture_em_weighted(const Eigen::MatrixXd& points,
                                const Eigen::VectorXd& point_weights, int k_max,
                                std::uint64_t seed);

/// Exact linear pushforward N(m*mean, m*cov*m^T).
Gaussian pushforward_affine(const Gaussian& g, const Eigen::MatrixXd& m);

/// Categorical draw: smallest index whose cumulative weight exceeds u.
int categorical(const Eigen::VectorXd& weights, double u);

}  // namespace dgsp
