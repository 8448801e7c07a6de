#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "dgsp/sags.hpp"
#include "dgsp/spectral.hpp"

namespace dgsp {

// Filter maps: measurable assignments graph -> matrix. The classical
// constructions go through the spectral decomposition of a prescribed
// shift operator; arbitrary maps are expressed as callbacks.
struct FourierFilter {
  GsoKind gso = GsoKind::Laplacian;
};
struct PolynomialFilter {
  std::vector<double> coeffs;  // ascending powers of the shift operator
  GsoKind gso = GsoKind::Laplacian;
};
struct IndexBand {
  std::vector<int> indices;
};
struct RangeBand {
  double lo, hi;  // eigenvalue range, endpoints included
};
using BandRule = std::variant<IndexBand, RangeBand>;
struct ProjectionFilter {
  BandRule band;
  GsoKind gso = GsoKind::Laplacian;
};
struct CallbackFilter {
  std::function<Eigen::MatrixXd(const Graph&)> fn;
};

struct FilterMap {
  std::variant<FourierFilter, PolynomialFilter, ProjectionFilter, CallbackFilter> v;
  double scale = 1.0;  // pointwise scalar applied after evaluation

  FilterMap(FourierFilter f) : v(std::move(f)) {}
  FilterMap(PolynomialFilter f) : v(std::move(f)) {}
  FilterMap(ProjectionFilter f) : v(std::move(f)) {}
  FilterMap(CallbackFilter f) : v(std::move(f)) {}
};

/// Evaluate the filter on one graph (scale included).
Eigen::MatrixXd evaluate_filter(const FilterMap& f, const Graph& g);

/// The unit of signal transformation: a structure plus a filter.
struct OperatorPair {
  Sags sags;
  FilterMap filter;
};

/// Distribution over filter matrices induced at x.
struct MatrixLaw {
  struct Atom {
    Eigen::MatrixXd matrix;
    double prob;
  };
  std::vector<Atom> support;
};

/// Pushes nu_x through the filter; numerically identical matrices (within
/// 1e-12 max-abs) merge with summed probability.
MatrixLaw matrix_law(const OperatorPair& c, const Eigen::VectorXd& x);

struct PushOptions {
  int budget = 256;
  std::uint64_t seed = 0;
  bool force_sampling = false;
  int workers = 1;
};

/// The pushforward of mu under the operator pair. Exact paths: point-mass
/// input (finite empirical output), and Gaussian/mixture input with a
/// constant structure (mixture of affine pushforwards). Everything else is
/// Monte Carlo with `budget` draws through the lift.
DistSignal pushforward(const OperatorPair& c, const DistSignal& mu, const PushOptions& opt);

/// e(x) = sum_i p_i f(G_i) x over the support of nu_x; exact.
Eigen::VectorXd cond_expectation(const OperatorPair& c, const Eigen::VectorXd& x);

/// For a constant structure the conditional expectation is the fixed
/// linear operator sum_i p_i f(G_i).
Eigen::MatrixXd cond_expectation_operator(const OperatorPair& c);

/// Sum of two operator pairs under the product graph coupling. Exact on
/// point-mass inputs (empirical over the product support); Monte Carlo
/// otherwise, with independent graph draws per sampled signal.
DistSignal boxplus(const OperatorPair& c1, const OperatorPair& c2, const DistSignal& mu,
                   const PushOptions& opt);

/// Same structure, filter scaled pointwise by r.
OperatorPair scalar_mul(double r, const OperatorPair& c);

struct ProbeRow {
  double scale;
  double input_w2;
  double output_w2;
};

/// Perturbs mu by mean shifts of decreasing norm along a seed-determined
/// direction and reports input/output W2 pairs. Reports only; assertions
/// live in the caller.
std::vector<ProbeRow> continuity_probe(const OperatorPair& c, const DistSignal& mu,
                                       const std::vector<double>& scales,
                                       const PushOptions& opt);

struct SequenceRow {
  int index;
  double e_distance;  // |e_{c_i}(x) - e_c(x)|
  double law_w2;      // W2 between matrix laws under Frobenius ground cost
};

/// Distance table for a sequence of operator pairs against a limit pair.
std::vector<SequenceRow> operator_sequence_limit(const std::vector<OperatorPair>& cs,
                                                 const OperatorPair& c,
                                                 const Eigen::VectorXd& x);

}  // namespace dgsp
