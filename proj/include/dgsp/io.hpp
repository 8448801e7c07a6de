#pragma once

#include <string>

#include "json.hpp"

#include "dgsp/operators.hpp"
#include "dgsp/sampling_recovery.hpp"
#include "dgsp/wasserstein.hpp"

namespace dgsp::io {

using nlohmann::json;

// CSV: plain numeric grid, comma separated, no header.
Eigen::MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

// Graph JSON: {"n": int, "edges": [[i, j, w], ...]} with i < j.
json graph_to_json(const Graph& g);
Graph graph_from_json(const json& j);
Graph load_graph(const std::string& path);          // .json or .csv adjacency grid
void save_graph(const std::string& path, const Graph& g);

// Distributional signals: {"kind": "delta|empirical|gaussian|mixture", ...}
// with matrices as nested row arrays.
json dist_to_json(const DistSignal& d);
DistSignal dist_from_json(const json& j);
DistSignal load_dist(const std::string& path);
void save_dist(const std::string& path, const DistSignal& d);

// Structures: {"kind": "constant|locally_constant", ...}; graphs may be
// inline objects or path references resolved against base_dir. Callback
// structures do not serialize.
json sags_to_json(const Sags& s);
Sags sags_from_json(const json& j, const std::string& base_dir);
Sags load_sags(const std::string& path);

// Filters and operator pairs.
json filter_to_json(const FilterMap& f);
FilterMap filter_from_json(const json& j);
json operator_pair_to_json(const OperatorPair& op);
OperatorPair operator_pair_from_json(const json& j, const std::string& base_dir);
OperatorPair load_operator_pair(const std::string& path);

// Vertex samples: {"indices": [...], "values": [...]}.
SampleSet sample_set_from_json(const json& j);
SampleSet load_sample_set(const std::string& path);

// Coupling plans export as (i, j, mass) rows.
void write_coupling_csv(const std::string& path, const CouplingPlan& plan);

json load_json(const std::string& path);
void save_json(const std::string& path, const json& j);

Eigen::VectorXd vector_from_json(const json& j);
json vector_to_json(const Eigen::VectorXd& v);
json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

GsoKind gso_from_name(const std::string& name);
std::string gso_name(GsoKind kind);

}  // namespace dgsp::io
