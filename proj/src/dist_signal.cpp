#include "dgsp/dist_signal.hpp"

#include <cmath>
#include <string>

namespace dgsp {

Empirical::Empirical(Eigen::MatrixXd points, Eigen::VectorXd weights)
    : points_(std::move(points)), weights_(std::move(weights)) {
  if (points_.rows() < 1) throw InvalidDistribution("empirical support must be nonempty");
  if (weights_.size() != points_.rows())
    throw DimensionMismatch("weight count does not match support size");
  if ((weights_.array() < 0.0).any())
    throw InvalidDistribution("empirical weights must be nonnegative");
  const double total = weights_.sum();
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistribution("empirical weights sum to " + std::to_string(total));
  weights_ /= total;
}

Empirical Empirical::uniform(Eigen::MatrixXd points) {
  const auto k = points.rows();
  return Empirical(std::move(points), Eigen::VectorXd::Constant(k, 1.0 / static_cast<double>(k)));
}

Gaussian::Gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto n = mean_.size();
  if (cov_.rows() != n || cov_.cols() != n)
    throw DimensionMismatch("covariance shape does not match mean dimension");
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw NotSymmetric("covariance deviates from symmetry");
  const Eigen::MatrixXd sym = 0.5 * (cov_ + cov_.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  Eigen::VectorXd lambda = solver.eigenvalues();
  if (lambda.size() > 0 && lambda(0) < -1e-9 * scale)
    throw NotPSD("covariance has eigenvalue " + std::to_string(lambda(0)));
  bool clipped = false;
  for (Eigen::Index i = 0; i < lambda.size(); ++i)
    if (lambda(i) < 0.0) {
      lambda(i) = 0.0;
      clipped = true;
    }
  factor_ = solver.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  if (clipped)
    cov_ = solver.eigenvectors() * lambda.asDiagonal() * solver.eigenvectors().transpose();
}

Mixture::Mixture(std::vector<Component> components) : components_(std::move(components)) {
  if (components_.empty()) throw InvalidDistribution("mixture must have >= 1 component");
  const int n = components_.front().gaussian.dim();
  double total = 0.0;
  for (const auto& c : components_) {
    if (c.gaussian.dim() != n) throw DimensionMismatch("mixture components differ in dimension");
    if (c.weight < 0.0) throw InvalidDistribution("mixture weights must be nonnegative");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistribution("mixture weights sum to " + std::to_string(total));
  for (auto& c : components_) c.weight /= total;
}

int DistSignal::dim() const {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Delta>)
          return static_cast<int>(d.point.size());
        else
          return d.dim();
      },
      v);
}

int categorical(const Eigen::VectorXd& weights, double u) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    acc += weights(i);
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size() - 1);
}

Eigen::VectorXd sample_point(const DistSignal& d, std::uint64_t seed, std::uint64_t i) {
  const int n = d.dim();
  const auto root = rng::root(seed);
  // separate substreams so categorical choices and normal draws never
  // share counter space
  const auto choice = root.substream(0);
  const auto values = root.substream(1);

  return std::visit(
      [&](const auto& dist) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Delta>) {
          return dist.point;
        } else if constexpr (std::is_same_v<T, Empirical>) {
          return dist.points().row(categorical(dist.weights(), choice.uniform01(i)));
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          Eigen::VectorXd z(n);
          for (int j = 0; j < n; ++j) z(j) = values.normal(i * n + j);
          return dist.mean() + dist.factor() * z;
        } else {  // Mixture
          Eigen::VectorXd w(dist.components().size());
          for (size_t c = 0; c < dist.components().size(); ++c)
            w(c) = dist.components()[c].weight;
          const auto& g = dist.components()[categorical(w, choice.uniform01(i))].gaussian;
          Eigen::VectorXd z(n);
          for (int j = 0; j < n; ++j) z(j) = values.normal(i * n + j);
          return g.mean() + g.factor() * z;
        }
      },
      d.v);
}

SampleBatch sample(const DistSignal& d, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidDistribution("sample count must be >= 1");
  Eigen::MatrixXd points(count, d.dim());
  for (int i = 0; i < count; ++i)
    points.row(i) = sample_point(d, seed, static_cast<std::uint64_t>(i)).transpose();
  return SampleBatch{std::move(points), seed};
}

Moments moments(const DistSignal& d) {
  return std::visit(
      [](const auto& dist) -> Moments {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Delta>) {
          const auto n = dist.point.size();
          return {dist.point, Eigen::MatrixXd::Zero(n, n)};
        } else if constexpr (std::is_same_v<T, Empirical>) {
          const Eigen::VectorXd mean = dist.points().transpose() * dist.weights();
          Eigen::MatrixXd centered = dist.points();
          centered.rowwise() -= mean.transpose();
          const Eigen::MatrixXd cov =
              centered.transpose() * dist.weights().asDiagonal() * centered;
          return {mean, cov};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return {dist.mean(), dist.cov()};
        } else {  // law of total variance
          const int n = dist.dim();
          Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
          for (const auto& c : dist.components()) mean += c.weight * c.gaussian.mean();
          Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
          for (const auto& c : dist.components())
            second += c.weight *
                      (c.gaussian.cov() + c.gaussian.mean() * c.gaussian.mean().transpose());
          return {mean, second - mean * mean.transpose()};
        }
      },
      d.v);
}

namespace {

double regularization_eps(const Eigen::MatrixXd& scatter) {
  const double tr = scatter.trace();
  const double eps = 1e-8 * tr / static_cast<double>(scatter.rows());
  return eps > 0.0 ? eps : 1e-12;
}

}  // namespace

Gaussian fit_gaussian(const Eigen::MatrixXd& points) {
  const auto count = points.rows();
  if (count < 2) throw TooFewSamples("need >= 2 points to fit a Gaussian");
  const Eigen::VectorXd mean = points.colwise().mean();
  Eigen::MatrixXd centered = points;
  centered.rowwise() -= mean.transpose();
  Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(count);
  cov += regularization_eps(cov) *
         Eigen::MatrixXd::Identity(points.cols(), points.cols());
  return Gaussian(mean, cov);
}

Gaussian fit_gaussian(const SampleBatch& batch) { return fit_gaussian(batch.points); }

Gaussian pushforward_affine(const Gaussian& g, const Eigen::MatrixXd& m) {
  if (m.cols() != g.dim()) throw DimensionMismatch("map width does not match dimension");
  return Gaussian(m * g.mean(), m * g.cov() * m.transpose());
}

}  // namespace dgsp
