#include "dgsp/sags.hpp"

#include <cmath>
#include <string>

namespace dgsp {

GraphDistribution::GraphDistribution(std::vector<Graph> graphs, Eigen::VectorXd probs)
    : graphs_(std::move(graphs)), probs_(std::move(probs)) {
  if (graphs_.empty()) throw InvalidDistribution("graph distribution support is empty");
  if (probs_.size() != static_cast<Eigen::Index>(graphs_.size()))
    throw DimensionMismatch("probability count does not match support size");
  const int n = graphs_.front().size();
  for (const auto& g : graphs_)
    if (g.size() != n) throw DimensionMismatch("support graphs differ in vertex count");
  if ((probs_.array() < 0.0).any())
    throw InvalidDistribution("graph probabilities must be nonnegative");
  const double total = probs_.sum();
  if (std::abs(total - 1.0) > 1e-9)
    throw InvalidDistribution("graph probabilities sum to " + std::to_string(total));
  probs_ /= total;
}

GraphDistribution GraphDistribution::delta(Graph g) {
  std::vector<Graph> graphs{std::move(g)};
  return GraphDistribution(std::move(graphs), Eigen::VectorXd::Ones(1));
}

bool region_contains(const RegionPredicate& p, const Eigen::VectorXd& x) {
  return std::visit(
      [&](const auto& pred) -> bool {
        using T = std::decay_t<decltype(pred)>;
        if constexpr (std::is_same_v<T, HalfspaceRegion>) {
          if (pred.normal.size() != x.size())
            throw DimensionMismatch("halfspace normal dimension mismatch");
          return pred.normal.dot(x) >= pred.offset;
        } else if constexpr (std::is_same_v<T, BoxRegion>) {
          if (pred.lo.size() != x.size())
            throw DimensionMismatch("box bound dimension mismatch");
          return (x.array() >= pred.lo.array()).all() && (x.array() <= pred.hi.array()).all();
        } else {
          return pred.contains(x);
        }
      },
      p);
}

GraphDistribution nu_at(const Sags& a, const Eigen::VectorXd& x) {
  return std::visit(
      [&](const auto& s) -> GraphDistribution {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ConstantSags>) {
          if (x.size() != s.nu.dim()) throw DimensionMismatch("signal dimension mismatch");
          return s.nu;
        } else if constexpr (std::is_same_v<T, LocallyConstantSags>) {
          if (x.size() != s.fallback.dim())
            throw DimensionMismatch("signal dimension mismatch");
          for (const auto& region : s.regions)
            if (region_contains(region.predicate, x)) return region.dist;
          return s.fallback;
        } else {
          GraphDistribution nu = s.rule(x);
          if (x.size() != nu.dim()) throw DimensionMismatch("signal dimension mismatch");
          return nu;
        }
      },
      a.v);
}

JointSampler::JointSampler(DistSignal source, Sags sags, std::uint64_t seed)
    : source_(std::move(source)), sags_(std::move(sags)), seed_(seed) {
  // probe nu at the source mean to catch dimension mismatches eagerly
  nu_at(sags_, moments(source_).mean);
}

JointSampler::Draw JointSampler::draw(std::uint64_t i) const {
  Eigen::VectorXd x = sample_point(source_, seed_, i);
  const GraphDistribution nu = nu_at(sags_, x);
  // substream 2: signal sampling owns substreams 0 and 1 of the same root
  const double u = rng::root(seed_).substream(2).uniform01(i);
  const int j = categorical(nu.probs(), u);
  return Draw{std::move(x), nu.graphs()[j], j};
}

std::optional<std::vector<JointAtom>> JointSampler::enumerate() const {
  if (!source_.is<Delta>()) return std::nullopt;
  const auto& x = source_.as<Delta>().point;
  const GraphDistribution nu = nu_at(sags_, x);
  std::vector<JointAtom> atoms;
  atoms.reserve(nu.support_size());
  for (int j = 0; j < nu.support_size(); ++j)
    atoms.push_back({x, nu.graphs()[j], nu.probs()(j)});
  return atoms;
}

JointSampler lift(const Sags& a, const DistSignal& mu, std::uint64_t seed) {
  return JointSampler(mu, a, seed);
}

}  // namespace dgsp
