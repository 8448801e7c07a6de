#include "dgsp/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dgsp::io {

namespace {

std::string context(const std::string& what, const std::string& where) {
  return what + " (" + where + ")";
}

}  // namespace

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
      try {
        row.push_back(std::stod(field));
      } catch (const std::exception&) {
        throw MalformedInput(context("bad numeric field '" + field + "' at line " +
                                         std::to_string(rows.size() + 1),
                                     path));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw MalformedInput(context("ragged row at line " + std::to_string(rows.size() + 1), path));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw MalformedInput(context("empty matrix", path));
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw MalformedInput("cannot write " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedInput("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw MalformedInput(context(e.what(), path));
  }
}

void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw MalformedInput("cannot write " + path);
  out << j.dump(2) << '\n';
}

Eigen::VectorXd vector_from_json(const json& j) {
  if (!j.is_array()) throw MalformedInput("expected an array of numbers");
  Eigen::VectorXd v(j.size());
  for (size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(vector_to_json(m.row(i)));
  return a;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw MalformedInput("expected a nonempty array of rows");
  const size_t cols = j[0].size();
  Eigen::MatrixXd m(j.size(), cols);
  for (size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != cols) throw MalformedInput("ragged matrix rows");
    for (size_t c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

GsoKind gso_from_name(const std::string& name) {
  if (name == "adjacency") return GsoKind::Adjacency;
  if (name == "laplacian") return GsoKind::Laplacian;
  if (name == "normalized_laplacian") return GsoKind::NormalizedLaplacian;
  throw MalformedInput("unknown gso kind '" + name + "'");
}

std::string gso_name(GsoKind kind) {
  switch (kind) {
    case GsoKind::Adjacency: return "adjacency";
    case GsoKind::Laplacian: return "laplacian";
    case GsoKind::NormalizedLaplacian: return "normalized_laplacian";
  }
  return "unknown";
}

json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (int i = 0; i < g.size(); ++i)
    for (int j = i + 1; j < g.size(); ++j)
      if (g.weights()(i, j) != 0.0) edges.push_back({i, j, g.weights()(i, j)});
  return json{{"n", g.size()}, {"edges", edges}};
}

Graph graph_from_json(const json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<std::tuple<int, int, double>> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || (e.size() != 2 && e.size() != 3))
        throw MalformedInput("edge entries must be [i, j] or [i, j, w]");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>(),
                         e.size() == 3 ? e[2].get<double>() : 1.0);
    }
    return Graph::from_edges(n, edges);
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("graph json: ") + e.what());
  }
}

Graph load_graph(const std::string& path) {
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    Eigen::MatrixXd adj = read_csv_matrix(path);
    // ingestion rounding guard: symmetrize, zero the diagonal
    adj = 0.5 * (adj + adj.transpose()).eval();
    adj.diagonal().setZero();
    return Graph(std::move(adj));
  }
  return graph_from_json(load_json(path));
}

void save_graph(const std::string& path, const Graph& g) {
  save_json(path, graph_to_json(g));
}

json dist_to_json(const DistSignal& d) {
  return std::visit(
      [](const auto& dist) -> json {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Delta>) {
          return json{{"kind", "delta"}, {"point", vector_to_json(dist.point)}};
        } else if constexpr (std::is_same_v<T, Empirical>) {
          return json{{"kind", "empirical"},
                      {"points", matrix_to_json(dist.points())},
                      {"weights", vector_to_json(dist.weights())}};
        } else if constexpr (std::is_same_v<T, Gaussian>) {
          return json{{"kind", "gaussian"},
                      {"mean", vector_to_json(dist.mean())},
                      {"cov", matrix_to_json(dist.cov())}};
        } else {
          json comps = json::array();
          for (const auto& c : dist.components())
            comps.push_back(json{{"weight", c.weight},
                                 {"mean", vector_to_json(c.gaussian.mean())},
                                 {"cov", matrix_to_json(c.gaussian.cov())}});
          return json{{"kind", "mixture"}, {"components", comps}};
        }
      },
      d.v);
}

DistSignal dist_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "delta") return Delta{vector_from_json(j.at("point"))};
    if (kind == "empirical") {
      Eigen::MatrixXd pts = matrix_from_json(j.at("points"));
      if (j.contains("weights"))
        return Empirical(std::move(pts), vector_from_json(j.at("weights")));
      return Empirical::uniform(std::move(pts));
    }
    if (kind == "gaussian")
      return Gaussian(vector_from_json(j.at("mean")), matrix_from_json(j.at("cov")));
    if (kind == "mixture") {
      std::vector<Mixture::Component> comps;
      for (const auto& c : j.at("components"))
        comps.push_back({c.at("weight").get<double>(),
                         Gaussian(vector_from_json(c.at("mean")),
                                  matrix_from_json(c.at("cov")))});
      return Mixture(std::move(comps));
    }
    throw MalformedInput("unknown distribution kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("distribution json: ") + e.what());
  }
}

DistSignal load_dist(const std::string& path) { return dist_from_json(load_json(path)); }

void save_dist(const std::string& path, const DistSignal& d) {
  save_json(path, dist_to_json(d));
}

namespace {

json graph_distribution_to_json(const GraphDistribution& nu) {
  json graphs = json::array();
  for (const auto& g : nu.graphs()) graphs.push_back(graph_to_json(g));
  return json{{"graphs", graphs}, {"probs", vector_to_json(nu.probs())}};
}

GraphDistribution graph_distribution_from_json(const json& j, const std::string& base_dir) {
  std::vector<Graph> graphs;
  for (const auto& entry : j.at("graphs")) {
    if (entry.is_string()) {
      const auto ref = std::filesystem::path(base_dir) / entry.get<std::string>();
      graphs.push_back(load_graph(ref.string()));
    } else {
      graphs.push_back(graph_from_json(entry));
    }
  }
  Eigen::VectorXd probs = j.contains("probs")
                              ? vector_from_json(j.at("probs"))
                              : Eigen::VectorXd::Constant(graphs.size(),
                                                          1.0 / graphs.size());
  return GraphDistribution(std::move(graphs), std::move(probs));
}

json predicate_to_json(const RegionPredicate& p) {
  return std::visit(
      [](const auto& pred) -> json {
        using T = std::decay_t<decltype(pred)>;
        if constexpr (std::is_same_v<T, HalfspaceRegion>) {
          return json{{"type", "halfspace"},
                      {"normal", vector_to_json(pred.normal)},
                      {"offset", pred.offset}};
        } else if constexpr (std::is_same_v<T, BoxRegion>) {
          return json{{"type", "box"},
                      {"lo", vector_to_json(pred.lo)},
                      {"hi", vector_to_json(pred.hi)}};
        } else {
          throw MalformedInput("code predicates do not serialize");
        }
      },
      p);
}

RegionPredicate predicate_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "halfspace")
    return HalfspaceRegion{vector_from_json(j.at("normal")), j.at("offset").get<double>()};
  if (type == "box")
    return BoxRegion{vector_from_json(j.at("lo")), vector_from_json(j.at("hi"))};
  throw MalformedInput("unknown predicate type '" + type + "'");
}

}  // namespace

json sags_to_json(const Sags& s) {
  return std::visit(
      [](const auto& sags) -> json {
        using T = std::decay_t<decltype(sags)>;
        if constexpr (std::is_same_v<T, ConstantSags>) {
          json out = graph_distribution_to_json(sags.nu);
          out["kind"] = "constant";
          return out;
        } else if constexpr (std::is_same_v<T, LocallyConstantSags>) {
          json regions = json::array();
          for (const auto& r : sags.regions) {
            json region = graph_distribution_to_json(r.dist);
            region["predicate"] = predicate_to_json(r.predicate);
            regions.push_back(region);
          }
          return json{{"kind", "locally_constant"},
                      {"regions", regions},
                      {"default", graph_distribution_to_json(sags.fallback)}};
        } else {
          throw MalformedInput("callback structures do not serialize");
        }
      },
      s.v);
}

Sags sags_from_json(const json& j, const std::string& base_dir) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant")
      return Sags(ConstantSags{graph_distribution_from_json(j, base_dir)});
    if (kind == "locally_constant") {
      LocallyConstantSags s{{}, graph_distribution_from_json(j.at("default"), base_dir)};
      for (const auto& r : j.at("regions"))
        s.regions.push_back(SagsRegion{predicate_from_json(r.at("predicate")),
                                       graph_distribution_from_json(r, base_dir)});
      return Sags(std::move(s));
    }
    throw MalformedInput("unknown sags kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("sags json: ") + e.what());
  }
}

Sags load_sags(const std::string& path) {
  return sags_from_json(load_json(path),
                        std::filesystem::path(path).parent_path().string());
}

json filter_to_json(const FilterMap& f) {
  json out = std::visit(
      [](const auto& filter) -> json {
        using T = std::decay_t<decltype(filter)>;
        if constexpr (std::is_same_v<T, FourierFilter>) {
          return json{{"kind", "fourier"}, {"gso", gso_name(filter.gso)}};
        } else if constexpr (std::is_same_v<T, PolynomialFilter>) {
          return json{{"kind", "polynomial"},
                      {"coeffs", filter.coeffs},
                      {"gso", gso_name(filter.gso)}};
        } else if constexpr (std::is_same_v<T, ProjectionFilter>) {
          json band;
          if (std::holds_alternative<IndexBand>(filter.band))
            band = json{{"indices", std::get<IndexBand>(filter.band).indices}};
          else
            band = json{{"range", {std::get<RangeBand>(filter.band).lo,
                                   std::get<RangeBand>(filter.band).hi}}};
          return json{{"kind", "projection"}, {"band", band}, {"gso", gso_name(filter.gso)}};
        } else {
          throw MalformedInput("callback filters do not serialize");
        }
      },
      f.v);
  out["scale"] = f.scale;
  return out;
}

FilterMap filter_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const GsoKind gso = j.contains("gso") ? gso_from_name(j.at("gso").get<std::string>())
                                          : GsoKind::Laplacian;
    FilterMap f = [&]() -> FilterMap {
      if (kind == "fourier") return FourierFilter{gso};
      if (kind == "polynomial")
        return PolynomialFilter{j.at("coeffs").get<std::vector<double>>(), gso};
      if (kind == "projection") {
        const json& band = j.at("band");
        if (band.contains("indices"))
          return ProjectionFilter{IndexBand{band.at("indices").get<std::vector<int>>()}, gso};
        const auto range = band.at("range");
        return ProjectionFilter{RangeBand{range[0].get<double>(), range[1].get<double>()},
                                gso};
      }
      throw MalformedInput("unknown filter kind '" + kind + "'");
    }();
    if (j.contains("scale")) f.scale = j.at("scale").get<double>();
    return f;
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("filter json: ") + e.what());
  }
}

json operator_pair_to_json(const OperatorPair& op) {
  return json{{"sags", sags_to_json(op.sags)}, {"filter", filter_to_json(op.filter)}};
}

OperatorPair operator_pair_from_json(const json& j, const std::string& base_dir) {
  try {
    const json& sags_entry = j.at("sags");
    Sags sags = sags_entry.is_string()
                    ? load_sags((std::filesystem::path(base_dir) /
                                 sags_entry.get<std::string>())
                                    .string())
                    : sags_from_json(sags_entry, base_dir);
    return OperatorPair{std::move(sags), filter_from_json(j.at("filter"))};
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("operator pair json: ") + e.what());
  }
}

OperatorPair load_operator_pair(const std::string& path) {
  return operator_pair_from_json(load_json(path),
                                 std::filesystem::path(path).parent_path().string());
}

SampleSet sample_set_from_json(const json& j) {
  try {
    return make_sample_set(j.at("indices").get<std::vector<int>>(),
                           vector_from_json(j.at("values")));
  } catch (const json::exception& e) {
    throw MalformedInput(std::string("sample set json: ") + e.what());
  }
}

SampleSet load_sample_set(const std::string& path) {
  return sample_set_from_json(load_json(path));
}

void write_coupling_csv(const std::string& path, const CouplingPlan& plan) {
  std::ofstream out(path);
  if (!out) throw MalformedInput("cannot write " + path);
  out.precision(17);
  for (Eigen::Index i = 0; i < plan.pi.rows(); ++i)
    for (Eigen::Index j = 0; j < plan.pi.cols(); ++j)
      if (plan.pi(i, j) != 0.0) out << i << ',' << j << ',' << plan.pi(i, j) << '\n';
}

}  // namespace dgsp::io
