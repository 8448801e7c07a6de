#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "dgsp/dist_signal.hpp"
#include "dgsp/graph.hpp"

namespace dgsp {

/// Finite-support probability distribution over graphs sharing a vertex set.
class GraphDistribution {
public:
  GraphDistribution(std::vector<Graph> graphs, Eigen::VectorXd probs);
  static GraphDistribution delta(Graph g);

  const std::vector<Graph>& graphs() const { return graphs_; }
  const Eigen::VectorXd& probs() const { return probs_; }
  int support_size() const { return static_cast<int>(graphs_.size()); }
  int dim() const { return graphs_.front().size(); }

private:
  std::vector<Graph> graphs_;
  Eigen::VectorXd probs_;
};

// Region predicates for locally constant structures. Halfspaces and boxes
// serialize; arbitrary rules are allowed in code only.
struct HalfspaceRegion {
  Eigen::VectorXd normal;
  double offset;  // contains x iff normal . x >= offset
};
struct BoxRegion {
  Eigen::VectorXd lo, hi;  // componentwise lo <= x <= hi
};
struct CodeRegion {
  std::function<bool(const Eigen::VectorXd&)> contains;
};
using RegionPredicate = std::variant<HalfspaceRegion, BoxRegion, CodeRegion>;

bool region_contains(const RegionPredicate& p, const Eigen::VectorXd& x);

struct SagsRegion {
  RegionPredicate predicate;
  GraphDistribution dist;
};

struct ConstantSags {
  GraphDistribution nu;
};

/// Regions evaluated in declaration order, first match wins; boundary
/// points land in the earliest matching region.
struct LocallyConstantSags {
  std::vector<SagsRegion> regions;
  GraphDistribution fallback;
};

/// Arbitrary deterministic rule x -> distribution (contract: pure).
struct CallbackSags {
  std::function<GraphDistribution(const Eigen::VectorXd&)> rule;
};

/// Signal-adaptive graph structure: the assignment x -> nu_x.
struct Sags {
  std::variant<ConstantSags, LocallyConstantSags, CallbackSags> v;

  Sags(ConstantSags s) : v(std::move(s)) {}
  Sags(LocallyConstantSags s) : v(std::move(s)) {}
  Sags(CallbackSags s) : v(std::move(s)) {}

  static Sags constant(GraphDistribution nu) { return Sags(ConstantSags{std::move(nu)}); }
  /// The classical single-graph setup: a constant point mass.
  static Sags classical(Graph g) { return constant(GraphDistribution::delta(std::move(g))); }

  bool is_constant() const { return std::holds_alternative<ConstantSags>(v); }
};

/// The graph distribution assigned to x.
GraphDistribution nu_at(const Sags& a, const Eigen::VectorXd& x);

struct JointAtom {
  Eigen::VectorXd x;
  Graph graph;
  double prob;
};

/// Sampler for the joint signal-graph distribution: draw(i) is a pure
/// function of (seed, i); the signal marginal is the source distribution.
class JointSampler {
public:
  JointSampler(DistSignal source, Sags sags, std::uint64_t seed);

  struct Draw {
    Eigen::VectorXd x;
    Graph graph;
    int graph_index;  // index within the support of nu_x
  };
  Draw draw(std::uint64_t i) const;

  /// Exact enumeration of the joint, available when the source is a point
  /// mass (the joint is then delta_x times nu_x).
  std::optional<std::vector<JointAtom>> enumerate() const;

  const DistSignal& source() const { return source_; }
  const Sags& sags() const { return sags_; }
  std::uint64_t seed() const { return seed_; }

private:
  DistSignal source_;
  Sags sags_;
  std::uint64_t seed_;
};

/// The lift of mu along the structure: joint distribution on signal x graph.
JointSampler lift(const Sags& a, const DistSignal& mu, std::uint64_t seed);

}  // namespace dgsp
