#include "dgsp/operators.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

#include "dgsp/parallel.hpp"
#include "dgsp/transport.hpp"
#include "dgsp/wasserstein.hpp"

namespace dgsp {

Eigen::MatrixXd evaluate_filter(const FilterMap& f, const Graph& g) {
  Eigen::MatrixXd m = std::visit(
      [&](const auto& filter) -> Eigen::MatrixXd {
        using T = std::decay_t<decltype(filter)>;
        if constexpr (std::is_same_v<T, FourierFilter>) {
          return fourier_matrix(eigendecompose(gso(g, filter.gso)));
        } else if constexpr (std::is_same_v<T, PolynomialFilter>) {
          return polynomial_filter(eigendecompose(gso(g, filter.gso)), filter.coeffs);
        } else if constexpr (std::is_same_v<T, ProjectionFilter>) {
          const auto dec = eigendecompose(gso(g, filter.gso));
          const std::vector<int> band = std::holds_alternative<IndexBand>(filter.band)
                                            ? std::get<IndexBand>(filter.band).indices
                                            : band_from_range(dec,
                                                              std::get<RangeBand>(filter.band).lo,
                                                              std::get<RangeBand>(filter.band).hi);
          return spectral_projection(dec, band);
        } else {
          Eigen::MatrixXd out = filter.fn(g);
          if (out.rows() != g.size() || out.cols() != g.size())
            throw FilterEvaluationFailed("callback filter returned wrong shape");
          return out;
        }
      },
      f.v);
  if (f.scale != 1.0) m *= f.scale;
  return m;
}

namespace {

// Filter evaluations keyed by the graph's shared weight storage; copies of
// a Graph share storage, so draws from a finite support hit the cache.
class FilterCache {
public:
  explicit FilterCache(const FilterMap& f) : filter_(f) {}

  Eigen::MatrixXd eval(const Graph& g) {
    const void* key = static_cast<const void*>(&g.weights());
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    Eigen::MatrixXd m = evaluate_filter(filter_, g);
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_.emplace(key, std::move(m)).first->second;
  }

private:
  const FilterMap& filter_;
  std::unordered_map<const void*, Eigen::MatrixXd> cache_;
  std::mutex mutex_;
};

}  // namespace

MatrixLaw matrix_law(const OperatorPair& c, const Eigen::VectorXd& x) {
  const GraphDistribution nu = nu_at(c.sags, x);
  MatrixLaw law;
  for (int i = 0; i < nu.support_size(); ++i) {
    Eigen::MatrixXd m = evaluate_filter(c.filter, nu.graphs()[i]);
    const double p = nu.probs()(i);
    bool merged = false;
    for (auto& atom : law.support) {
      if ((atom.matrix - m).cwiseAbs().maxCoeff() <= 1e-12) {
        atom.prob += p;
        merged = true;
        break;
      }
    }
    if (!merged) law.support.push_back({std::move(m), p});
  }
  return law;
}

namespace {

DistSignal pushforward_sampled(const OperatorPair& c, const DistSignal& mu,
                               const PushOptions& opt) {
  const JointSampler sampler = lift(c.sags, mu, opt.seed);
  FilterCache cache(c.filter);
  Eigen::MatrixXd points(opt.budget, mu.dim());
  parallel_for(opt.budget, opt.workers, [&](std::int64_t i) {
    const auto draw = sampler.draw(static_cast<std::uint64_t>(i));
    points.row(i) = (cache.eval(draw.graph) * draw.x).transpose();
  });
  return Empirical::uniform(std::move(points));
}

}  // namespace

DistSignal pushforward(const OperatorPair& c, const DistSignal& mu, const PushOptions& opt) {
  if (opt.budget < 1) throw InvalidDistribution("sampling budget must be >= 1");
  if (!opt.force_sampling) {
    if (mu.is<Delta>()) {
      const auto& x = mu.as<Delta>().point;
      const MatrixLaw law = matrix_law(c, x);
      Eigen::MatrixXd points(law.support.size(), x.size());
      Eigen::VectorXd weights(law.support.size());
      for (size_t i = 0; i < law.support.size(); ++i) {
        points.row(i) = (law.support[i].matrix * x).transpose();
        weights(i) = law.support[i].prob;
      }
      return Empirical(std::move(points), std::move(weights));
    }
    if (c.sags.is_constant() && (mu.is<Gaussian>() || mu.is<Mixture>())) {
      const auto& nu = std::get<ConstantSags>(c.sags.v).nu;
      std::vector<Mixture::Component> out;
      auto push_gaussian = [&](double weight, const Gaussian& g) {
        for (int i = 0; i < nu.support_size(); ++i) {
          const Eigen::MatrixXd m = evaluate_filter(c.filter, nu.graphs()[i]);
          out.push_back({weight * nu.probs()(i), pushforward_affine(g, m)});
        }
      };
      if (mu.is<Gaussian>()) {
        push_gaussian(1.0, mu.as<Gaussian>());
      } else {
        for (const auto& comp : mu.as<Mixture>().components())
          push_gaussian(comp.weight, comp.gaussian);
      }
      return Mixture(std::move(out));
    }
  }
  return pushforward_sampled(c, mu, opt);
}

Eigen::VectorXd cond_expectation(const OperatorPair& c, const Eigen::VectorXd& x) {
  const MatrixLaw law = matrix_law(c, x);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(x.size());
  for (const auto& atom : law.support) e += atom.prob * (atom.matrix * x);
  return e;
}

Eigen::MatrixXd cond_expectation_operator(const OperatorPair& c) {
  if (!c.sags.is_constant())
    throw NotConstantSags("conditional expectation operator needs a constant structure");
  const auto& nu = std::get<ConstantSags>(c.sags.v).nu;
  const int n = nu.dim();
  Eigen::MatrixXd op = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < nu.support_size(); ++i)
    op += nu.probs()(i) * evaluate_filter(c.filter, nu.graphs()[i]);
  return op;
}

DistSignal boxplus(const OperatorPair& c1, const OperatorPair& c2, const DistSignal& mu,
                   const PushOptions& opt) {
  if (mu.is<Delta>() && !opt.force_sampling) {
    const auto& x = mu.as<Delta>().point;
    const MatrixLaw l1 = matrix_law(c1, x);
    const MatrixLaw l2 = matrix_law(c2, x);
    const int k1 = static_cast<int>(l1.support.size());
    const int k2 = static_cast<int>(l2.support.size());
    Eigen::MatrixXd points(k1 * k2, x.size());
    Eigen::VectorXd weights(k1 * k2);
    for (int i = 0; i < k1; ++i)
      for (int j = 0; j < k2; ++j) {
        points.row(i * k2 + j) =
            (l1.support[i].matrix * x + l2.support[j].matrix * x).transpose();
        weights(i * k2 + j) = l1.support[i].prob * l2.support[j].prob;
      }
    return Empirical(std::move(points), std::move(weights));
  }

  // Monte Carlo: independent graph draws per sampled signal
  const auto root = rng::root(opt.seed);
  FilterCache cache1(c1.filter);
  FilterCache cache2(c2.filter);
  const std::uint64_t signal_seed = root.substream(0).key();
  const auto pick1 = root.substream(1);
  const auto pick2 = root.substream(2);
  Eigen::MatrixXd points(opt.budget, mu.dim());
  parallel_for(opt.budget, opt.workers, [&](std::int64_t i) {
    const Eigen::VectorXd x = sample_point(mu, signal_seed, static_cast<std::uint64_t>(i));
    const GraphDistribution nu1 = nu_at(c1.sags, x);
    const GraphDistribution nu2 = nu_at(c2.sags, x);
    const Graph& g1 = nu1.graphs()[categorical(nu1.probs(), pick1.uniform01(i))];
    const Graph& g2 = nu2.graphs()[categorical(nu2.probs(), pick2.uniform01(i))];
    points.row(i) = (cache1.eval(g1) * x + cache2.eval(g2) * x).transpose();
  });
  return Empirical::uniform(std::move(points));
}

OperatorPair scalar_mul(double r, const OperatorPair& c) {
  OperatorPair out = c;
  out.filter.scale *= r;
  return out;
}

namespace {

DistSignal shift(const DistSignal& mu, const Eigen::VectorXd& d) {
  return std::visit(
      [&](const auto& dist) -> DistSignal {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Delta>) {
          return Delta{dist.point + d};
        } else if constexpr (std::is_same_v<T, Empirical>) {
          Eigen::MatrixXd pts = dist.points();
          pts.rowwise() += d.transpose();
          return Empirical(std::move(pts), dist.weights());
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return Gaussian(dist.mean() + d, dist.cov());
        } else {
          std::vector<Mixture::Component> comps;
          for (const auto& c : dist.components())
            comps.push_back({c.weight, Gaussian(c.gaussian.mean() + d, c.gaussian.cov())});
          return Mixture(std::move(comps));
        }
      },
      mu.v);
}

}  // namespace

std::vector<ProbeRow> continuity_probe(const OperatorPair& c, const DistSignal& mu,
                                       const std::vector<double>& scales,
                                       const PushOptions& opt) {
  for (size_t i = 0; i + 1 < scales.size(); ++i)
    if (scales[i] < scales[i + 1])
      throw InvalidDistribution("perturbation scales must be nonincreasing");

  const auto root = rng::root(opt.seed);
  const int n = mu.dim();
  Eigen::VectorXd direction(n);
  const auto dir_stream = root.substream(0);
  for (int j = 0; j < n; ++j) direction(j) = dir_stream.normal(j);
  direction.normalize();

  // one shared seed per side keeps the scale-zero row exactly zero
  PushOptions push_opt = opt;
  push_opt.seed = root.substream(1).key();
  const W2Budget w2_budget{opt.budget, root.substream(2).key(), 512};

  const DistSignal pushed = pushforward(c, mu, push_opt);
  std::vector<ProbeRow> rows;
  rows.reserve(scales.size());
  for (double s : scales) {
    const DistSignal mu_s = shift(mu, s * direction);
    const DistSignal pushed_s = pushforward(c, mu_s, push_opt);
    rows.push_back({s, w2(mu, mu_s, w2_budget).value, w2(pushed, pushed_s, w2_budget).value});
  }
  return rows;
}

namespace {

// W2 between finite matrix distributions under the Frobenius ground cost.
double matrix_law_w2(const MatrixLaw& a, const MatrixLaw& b) {
  const int ka = static_cast<int>(a.support.size());
  const int kb = static_cast<int>(b.support.size());
  Eigen::MatrixXd cost(ka, kb);
  Eigen::VectorXd wa(ka), wb(kb);
  for (int i = 0; i < ka; ++i) wa(i) = a.support[i].prob;
  for (int j = 0; j < kb; ++j) wb(j) = b.support[j].prob;
  for (int i = 0; i < ka; ++i)
    for (int j = 0; j < kb; ++j)
      cost(i, j) = (a.support[i].matrix - b.support[j].matrix).squaredNorm();
  return std::sqrt(std::max(0.0, transport_simplex(wa, wb, cost).cost));
}

}  // namespace

std::vector<SequenceRow> operator_sequence_limit(const std::vector<OperatorPair>& cs,
                                                 const OperatorPair& c,
                                                 const Eigen::VectorXd& x) {
  const MatrixLaw limit_law = matrix_law(c, x);
  const Eigen::VectorXd limit_e = cond_expectation(c, x);
  std::vector<SequenceRow> rows;
  rows.reserve(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) {
    const Eigen::VectorXd e = cond_expectation(cs[i], x);
    rows.push_back({static_cast<int>(i), (e - limit_e).norm(),
                    matrix_law_w2(matrix_law(cs[i], x), limit_law)});
  }
  return rows;
}

}  // namespace dgsp
