#include "dgsp/pipelines/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>

namespace dgsp {

std::string class_key_name(const ClassKey& key) {
  return "s" + std::to_string(key.subject) + (key.condition == 0 ? "_normal" : "_abnormal");
}

std::vector<Eigen::Vector2d> ClassModel::peaks() const {
  std::vector<Eigen::Vector2d> out;
  for (const auto& c : features.components()) out.push_back(c.gaussian.mean());
  return out;
}

namespace {

struct BandProjectors {
  std::vector<Eigen::MatrixXd> hp, b1, b2;  // per candidate product graph
};

BandProjectors compute_projectors(const std::vector<Graph>& products,
                                  const AnomalyConfig& cfg) {
  BandProjectors p;
  for (const auto& g : products) {
    const auto dec = eigendecompose(gso(g, GsoKind::Laplacian));
    p.hp.push_back(spectral_projection(dec, band_from_range(dec, cfg.hp_band.lo, cfg.hp_band.hi)));
    p.b1.push_back(spectral_projection(dec, band_from_range(dec, cfg.band1.lo, cfg.band1.hi)));
    p.b2.push_back(spectral_projection(dec, band_from_range(dec, cfg.band2.lo, cfg.band2.hi)));
  }
  return p;
}

// Normalized band-energy profile over candidates and both estimation bands.
Eigen::VectorXd energy_signature(const BandProjectors& proj, const Eigen::VectorXd& x) {
  const int c = static_cast<int>(proj.b1.size());
  Eigen::VectorXd sig(2 * c);
  const double norm2 = std::max(x.squaredNorm(), 1e-300);
  for (int i = 0; i < c; ++i) {
    sig(i) = (proj.b1[i] * x).squaredNorm() / norm2;
    sig(c + i) = (proj.b2[i] * x).squaredNorm() / norm2;
  }
  return sig;
}

int nearest_class(const std::vector<ClassModel>& classes, const Eigen::VectorXd& sig) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < classes.size(); ++i) {
    const double d = (classes[i].signature - sig).norm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

// Empirical distribution over candidates by argmax band energy per signal.
std::pair<GraphDistribution, std::vector<int>> estimate_nu(
    const std::vector<Graph>& products, const std::vector<Eigen::MatrixXd>& band_proj,
    const Eigen::MatrixXd& signals) {
  const int c = static_cast<int>(products.size());
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(c);
  for (Eigen::Index r = 0; r < signals.rows(); ++r) {
    const Eigen::VectorXd x = signals.row(r).transpose();
    int best = 0;
    double best_e = -1.0;
    for (int i = 0; i < c; ++i) {
      const double e = (band_proj[i] * x).squaredNorm();
      if (e > best_e + 1e-15) {
        best_e = e;
        best = i;
      }
    }
    counts(best) += 1.0;
  }
  std::vector<Graph> support;
  std::vector<int> indices;
  std::vector<double> probs;
  for (int i = 0; i < c; ++i)
    if (counts(i) > 0.0) {
      support.push_back(products[i]);
      indices.push_back(i);
      probs.push_back(counts(i) / static_cast<double>(signals.rows()));
    }
  Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(probs.data(), probs.size());
  return {GraphDistribution(std::move(support), std::move(p)), std::move(indices)};
}

// Canonical ordering of weighted feature points; EM then sees the same
// input for any permutation of the instance signals.
void sort_features(Eigen::MatrixXd& pts, Eigen::VectorXd& w) {
  std::vector<int> order(pts.rows());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::tie(pts(a, 0), pts(a, 1), w(a)) < std::tie(pts(b, 0), pts(b, 1), w(b));
  });
  Eigen::MatrixXd p2(pts.rows(), pts.cols());
  Eigen::VectorXd w2(w.size());
  for (size_t i = 0; i < order.size(); ++i) {
    p2.row(i) = pts.row(order[i]);
    w2(i) = w(order[i]);
  }
  pts = std::move(p2);
  w = std::move(w2);
}

}  // namespace

// Shared state behind the callback structures returned by operator_pair.
struct AnomalySagsState {
  BandProjectors proj;
  std::vector<ClassModel> classes;
};

std::pair<Eigen::MatrixXd, Eigen::VectorXd> feature_points(const AnomalyModel& model,
                                                           const ClassModel& cls,
                                                           const Eigen::VectorXd& x) {
  const auto& hp = model.hp_proj;
  const int k1 = cls.nu1.support_size();
  const int k2 = cls.nu2.support_size();
  Eigen::MatrixXd pts(k1 * k2, 2);
  Eigen::VectorXd w(k1 * k2);
  std::vector<double> e1(k1), e2(k2);
  for (int i = 0; i < k1; ++i) e1[i] = (hp[cls.nu1_candidates[i]] * x).norm();
  for (int j = 0; j < k2; ++j) e2[j] = (hp[cls.nu2_candidates[j]] * x).norm();
  for (int i = 0; i < k1; ++i)
    for (int j = 0; j < k2; ++j) {
      pts(i * k2 + j, 0) = e1[i];
      pts(i * k2 + j, 1) = e2[j];
      w(i * k2 + j) = cls.nu1.probs()(i) * cls.nu2.probs()(j);
    }
  return {std::move(pts), std::move(w)};
}

AnomalyModel build_anomaly_model(
    const std::vector<std::pair<ClassKey, Eigen::MatrixXd>>& train,
    const AnomalyConfig& config) {
  if (train.empty()) throw EmptyClass("no training classes");
  if (config.candidate_h.empty()) throw EmptyClass("no candidate graphs");

  AnomalyModel model;
  model.config = config;
  const Graph path = build_path(config.path_len);
  for (const auto& h : config.candidate_h)
    model.product_graphs.push_back(cartesian_product(h, path, config.max_product));
  const int n = model.product_graphs.front().size();

  const BandProjectors proj = compute_projectors(model.product_graphs, config);
  model.hp_proj = proj.hp;
  model.band1_proj = proj.b1;
  model.band2_proj = proj.b2;

  const auto seed_root = rng::root(config.seed);
  int class_index = 0;
  for (const auto& [key, signals] : train) {
    if (signals.rows() < 1)
      throw EmptyClass("class " + class_key_name(key) + " has no training signals");
    if (signals.cols() != n)
      throw DimensionMismatch("training signal width does not match product graph size");

    auto [nu1, idx1] = estimate_nu(model.product_graphs, proj.b1, signals);
    auto [nu2, idx2] = estimate_nu(model.product_graphs, proj.b2, signals);
    const Mixture placeholder(
        {{1.0, Gaussian(Eigen::Vector2d::Zero(), Eigen::Matrix2d::Identity())}});
    ClassModel cls{key,          std::move(nu1),    std::move(nu2), std::move(idx1),
                   std::move(idx2), Eigen::VectorXd(), placeholder};

    Eigen::VectorXd sig = Eigen::VectorXd::Zero(2 * model.product_graphs.size());
    for (Eigen::Index r = 0; r < signals.rows(); ++r)
      sig += energy_signature(proj, signals.row(r).transpose());
    cls.signature = sig / static_cast<double>(signals.rows());

    // pooled feature points over the training signals
    const int per = cls.nu1.support_size() * cls.nu2.support_size();
    Eigen::MatrixXd pts(per * signals.rows(), 2);
    Eigen::VectorXd w(per * signals.rows());
    for (Eigen::Index r = 0; r < signals.rows(); ++r) {
      auto [p, pw] = feature_points(model, cls, signals.row(r).transpose());
      pts.middleRows(r * per, per) = p;
      w.segment(r * per, per) = pw / static_cast<double>(signals.rows());
    }
    sort_features(pts, w);
    cls.features = fit_mixture_em_weighted(pts, w, config.mixture_kmax,
                                           seed_root.substream(class_index).key());
    model.classes.push_back(std::move(cls));
    ++class_index;
  }
  return model;
}

namespace {

Graph build_ring(int n) {
  std::vector<std::tuple<int, int, double>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n, 1.0);
  return Graph::from_edges(n, edges);
}

Graph build_complete(int n) {
  std::vector<std::tuple<int, int, double>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j, 1.0);
  return Graph::from_edges(n, edges);
}

}  // namespace

std::vector<std::pair<ClassKey, Eigen::MatrixXd>> SyntheticAnomaly::train(
    int per_class, std::uint64_t seed) const {
  std::vector<std::pair<ClassKey, Eigen::MatrixXd>> out;
  for (size_t i = 0; i < keys.size(); ++i)
    out.emplace_back(keys[i],
                     draw_signals(static_cast<int>(i), per_class,
                                  rng::root(seed).substream(i).key()));
  return out;
}

Eigen::MatrixXd SyntheticAnomaly::draw_signals(int class_index, int count,
                                               std::uint64_t seed) const {
  const auto& basis = class_basis[class_index];
  const int n = static_cast<int>(basis.rows());
  const int m = static_cast<int>(basis.cols());
  const auto stream = rng::root(seed);
  Eigen::MatrixXd signals(count, n);
  for (int r = 0; r < count; ++r) {
    const auto row_stream = stream.substream(r);
    Eigen::VectorXd z(m);
    for (int j = 0; j < m; ++j) z(j) = row_stream.normal(j);
    Eigen::VectorXd x = basis * z;
    const double norm = x.norm();
    signals.row(r) = (norm > 0.0 ? (x / norm).eval() : x).transpose();
  }
  return signals;
}

SyntheticAnomaly make_synthetic_anomaly(int h_size, int path_len, int subjects) {
  SyntheticAnomaly data;
  data.config.candidate_h = {build_ring(h_size), build_complete(h_size)};
  data.config.path_len = path_len;

  const Graph path = build_path(path_len);
  std::vector<SpectralDecomposition> decs;
  Eigen::VectorXd all_eigs;
  for (const auto& h : data.config.candidate_h) {
    const Graph product = cartesian_product(h, path);
    decs.push_back(eigendecompose(gso(product, GsoKind::Laplacian)));
    Eigen::VectorXd merged(all_eigs.size() + decs.back().eigenvalues.size());
    merged << all_eigs, decs.back().eigenvalues;
    all_eigs = merged;
  }
  std::sort(all_eigs.data(), all_eigs.data() + all_eigs.size());
  auto quantile = [&](double q) {
    return all_eigs(static_cast<Eigen::Index>(q * (all_eigs.size() - 1)));
  };
  data.config.band1 = {0.0, quantile(0.3)};
  data.config.band2 = {quantile(0.3), quantile(0.7)};
  data.config.hp_band = {quantile(0.7), all_eigs(all_eigs.size() - 1) + 1.0};

  const int n = h_size * path_len;
  const int span = 6;  // class subspace dimension
  for (int s = 0; s < subjects; ++s) {
    const int cand = s % 2;
    const int offset = 2 * (s / 2);  // distinct bands for subjects on the same candidate
    for (int condition = 0; condition <= 1; ++condition) {
      // normal classes live in low frequencies, abnormal in the top band
      const int lo = condition == 0 ? 1 + offset : n - span - 1 - offset;
      data.keys.push_back({s, condition});
      data.class_basis.push_back(decs[cand].eigenvectors.middleCols(lo, span));
    }
  }
  return data;
}

double peak_distance(const std::vector<Eigen::Vector2d>& a,
                     const std::vector<Eigen::Vector2d>& b) {
  const auto& small = a.size() <= b.size() ? a : b;
  const auto& large = a.size() <= b.size() ? b : a;
  const int ks = static_cast<int>(small.size());
  const int kl = static_cast<int>(large.size());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> used(kl, 0);
  // brute-force min-cost injection; peak lists have at most 3 entries
  std::function<void(int, double)> rec = [&](int i, double acc) {
    if (acc >= best) return;
    if (i == ks) {
      best = acc;
      return;
    }
    for (int j = 0; j < kl; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      rec(i + 1, acc + (small[i] - large[j]).norm());
      used[j] = 0;
    }
  };
  rec(0, 0.0);
  return best / static_cast<double>(ks);
}

ClassKey classify(const AnomalyModel& model, const Eigen::MatrixXd& instance,
                  std::uint64_t seed) {
  if (instance.rows() < 1) throw EmptyClass("instance has no signals");
  const int k = static_cast<int>(instance.rows());

  const BandProjectors proj{model.hp_proj, model.band1_proj, model.band2_proj};
  std::vector<Eigen::MatrixXd> point_blocks;
  std::vector<Eigen::VectorXd> weight_blocks;
  long total = 0;
  for (int r = 0; r < k; ++r) {
    const Eigen::VectorXd x = instance.row(r).transpose();
    const int assigned = nearest_class(model.classes, energy_signature(proj, x));
    auto [pts, w] = feature_points(model, model.classes[assigned], x);
    point_blocks.push_back(std::move(pts));
    weight_blocks.push_back(w / static_cast<double>(k));
    total += point_blocks.back().rows();
  }
  Eigen::MatrixXd pts(total, 2);
  Eigen::VectorXd w(total);
  long at = 0;
  for (size_t i = 0; i < point_blocks.size(); ++i) {
    pts.middleRows(at, point_blocks[i].rows()) = point_blocks[i];
    w.segment(at, weight_blocks[i].size()) = weight_blocks[i];
    at += point_blocks[i].rows();
  }
  sort_features(pts, w);
  const Mixture fitted =
      fit_mixture_em_weighted(pts, w, model.config.mixture_kmax, rng::root(seed).key());

  std::vector<Eigen::Vector2d> instance_peaks;
  for (const auto& c : fitted.components()) instance_peaks.push_back(c.gaussian.mean());

  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < model.classes.size(); ++i) {
    const double d = peak_distance(instance_peaks, model.classes[i].peaks());
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return model.classes[best].key;
}

OperatorPair AnomalyModel::operator_pair(int branch) const {
  auto state = std::make_shared<AnomalySagsState>(
      AnomalySagsState{{hp_proj, band1_proj, band2_proj}, classes});
  CallbackSags sags{[state, branch](const Eigen::VectorXd& x) {
    const int cls = nearest_class(state->classes, energy_signature(state->proj, x));
    return branch == 1 ? state->classes[cls].nu1 : state->classes[cls].nu2;
  }};
  ProjectionFilter filter{config.hp_band, GsoKind::Laplacian};
  return OperatorPair{Sags(std::move(sags)), FilterMap(std::move(filter))};
}

}  // namespace dgsp
