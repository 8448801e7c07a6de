#pragma once

#include <string>
#include <vector>

#include "dgsp/operators.hpp"

namespace dgsp {

struct ClassKey {
  int subject = 0;
  int condition = 0;  // 0 = normal, 1 = abnormal
  bool operator==(const ClassKey&) const = default;
};

std::string class_key_name(const ClassKey& key);

struct AnomalyConfig {
  std::vector<Graph> candidate_h;  // candidate sensor connectivity graphs
  int path_len = 10;               // time axis, path graph factor
  RangeBand band1{0.0, 0.0};       // frequency range estimating the first structure
  RangeBand band2{0.0, 0.0};       // frequency range estimating the second structure
  RangeBand hp_band{0.0, 0.0};     // high-pass filter range (both branches)
  int mixture_kmax = 3;
  std::uint64_t seed = 0;
  int max_product = 2000;
};

struct ClassModel {
  ClassKey key;
  GraphDistribution nu1, nu2;  // empirical candidate-graph distributions per branch
  std::vector<int> nu1_candidates, nu2_candidates;  // candidate index per support atom
  Eigen::VectorXd signature;   // mean normalized band-energy profile
  Mixture features;            // fitted feature mixture in R^2
  std::vector<Eigen::Vector2d> peaks() const;
};

/// Trained model: per-class feature mixtures plus the pair of operator
/// pairs whose structures select the per-class graph distributions by
/// nearest band-energy signature. Features are the per-branch filtered
/// energy pair (|f1(G1)x|, |f2(G2)x|).
struct AnomalyModel {
  AnomalyConfig config;
  std::vector<Graph> product_graphs;  // candidate_h[i] x path, aligned by index
  std::vector<Eigen::MatrixXd> hp_proj, band1_proj, band2_proj;  // per candidate
  std::vector<ClassModel> classes;
  std::string feature_map = "branch_energy";

  OperatorPair operator_pair(int branch) const;  // branch 1 or 2
};

/// Builds product graphs, estimates per-class graph distributions by
/// frequency counting over the candidate family (argmax band energy per
/// training signal), computes features, and fits per-class mixtures.
AnomalyModel build_anomaly_model(
    const std::vector<std::pair<ClassKey, Eigen::MatrixXd>>& train,
    const AnomalyConfig& config);

/// Feature points (with weights) for one signal under the class's pair of
/// graph distributions; enumerates the product support exactly.
std::pair<Eigen::MatrixXd, Eigen::VectorXd> feature_points(const AnomalyModel& model,
                                                           const ClassModel& cls,
                                                           const Eigen::VectorXd& x);

/// Minimum-assignment Euclidean distance between peak lists, averaged over
/// matched peaks (the smaller list is injected into the larger).
double peak_distance(const std::vector<Eigen::Vector2d>& a,
                     const std::vector<Eigen::Vector2d>& b);

/// Classifies an instance (one signal per row): pools exact feature points
/// over the signals, fits a mixture, and returns the label of the class
/// model closest in average peak distance.
ClassKey classify(const AnomalyModel& model, const Eigen::MatrixXd& instance,
                  std::uint64_t seed);

/// Synthetic dataset: classes are spanned by eigenvector bands of the
/// candidate product graphs, chosen so class features separate.
struct SyntheticAnomaly {
  AnomalyConfig config;
  std::vector<ClassKey> keys;
  std::vector<Eigen::MatrixXd> class_basis;  // per class: n x m orthonormal basis

  std::vector<std::pair<ClassKey, Eigen::MatrixXd>> train(int per_class,
                                                          std::uint64_t seed) const;
  Eigen::MatrixXd draw_signals(int class_index, int count, std::uint64_t seed) const;
};

SyntheticAnomaly make_synthetic_anomaly(int h_size = 8, int path_len = 10, int subjects = 2);

}  // namespace dgsp
