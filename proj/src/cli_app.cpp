#include "dgsp/cli_app.hpp"

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"

#include "dgsp/io.hpp"
#include "dgsp/pipelines/anomaly.hpp"
#include "dgsp/pipelines/edgewise.hpp"
#include "dgsp/pipelines/filter_learning.hpp"
#include "dgsp/transport.hpp"

namespace dgsp {

namespace {

using io::json;

// CLI11 config reader for flat JSON objects {"flag": value, ...}; values
// from the file merge under anything given explicitly on the command line.
class JsonConfig : public CLI::Config {
public:
  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json out = json::object();
    for (const CLI::Option* opt : app->get_options({})) {
      if (!opt->get_lnames().empty() && opt->get_configurable()) {
        if (opt->count() > 0)
          out[opt->get_lnames()[0]] = opt->results().size() == 1
                                          ? json(opt->results()[0])
                                          : json(opt->results());
        else if (default_also && !opt->get_default_str().empty())
          out[opt->get_lnames()[0]] = opt->get_default_str();
      }
    }
    return out.dump(2);
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j;
    try {
      j = json::parse(input);
    } catch (const json::exception& e) {
      throw CLI::FileError(std::string("config is not valid json: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array())
        for (const auto& v : value)
          item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      else
        item.inputs.push_back(value.is_string() ? value.get<std::string>() : value.dump());
      items.push_back(std::move(item));
    }
    return items;
  }
};

void require_seed(const CLI::App* cmd) {
  if (cmd->count("--seed") == 0)
    throw MissingSeed("command '" + cmd->get_name() + "' needs an explicit --seed");
}

// Every run with outputs echoes its resolved configuration next to them.
void write_manifest(const std::string& anchor, const std::string& command, const json& config) {
  json manifest{{"command", command}, {"options", config}};
  io::save_json(anchor + ".manifest.json", manifest);
}

std::string join_dir(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// ---------------------------------------------------------------- graph

struct GraphArgs {
  std::vector<int> lattice;
  std::string knn_file;
  int k = 0;
  bool mutual = false;
  std::vector<std::string> product;
  std::string from_csv;
  std::string out;
  std::string spectrum;
  std::string gso_kind = "laplacian";
};

int run_graph(const GraphArgs& a) {
  int sources = 0;
  sources += !a.lattice.empty();
  sources += !a.knn_file.empty();
  sources += !a.product.empty();
  sources += !a.from_csv.empty();
  if (sources != 1)
    throw MalformedInput("give exactly one of --lattice, --knn, --product, --from-csv");

  Graph g = [&]() {
    if (!a.lattice.empty()) return build_lattice(a.lattice[0], a.lattice[1]);
    if (!a.knn_file.empty()) {
      if (a.k < 1) throw MalformedInput("--knn needs --k >= 1");
      return build_knn(io::read_csv_matrix(a.knn_file), a.k, !a.mutual);
    }
    if (!a.product.empty())
      return cartesian_product(io::load_graph(a.product[0]), io::load_graph(a.product[1]));
    return io::load_graph(a.from_csv);
  }();

  io::save_graph(a.out, g);
  if (!a.spectrum.empty()) {
    const auto dec = eigendecompose(gso(g, io::gso_from_name(a.gso_kind)));
    io::write_csv_matrix(a.spectrum, dec.eigenvalues);
  }
  json config{{"out", a.out}, {"gso", a.gso_kind}};
  if (!a.lattice.empty()) config["lattice"] = a.lattice;
  if (!a.knn_file.empty()) {
    config["knn"] = a.knn_file;
    config["k"] = a.k;
    config["mutual"] = a.mutual;
  }
  if (!a.product.empty()) config["product"] = a.product;
  if (!a.from_csv.empty()) config["from-csv"] = a.from_csv;
  if (!a.spectrum.empty()) config["spectrum"] = a.spectrum;
  write_manifest(a.out, "graph", config);
  std::cout << "n=" << g.size() << " edges=" << g.edge_count() << "\n";
  return 0;
}

// ------------------------------------------------------------------- w2

struct W2Args {
  std::string a, b;
  int budget = 256;
  std::uint64_t seed = 0;
  std::string out;
  std::string plan;
};

int run_w2(const W2Args& a) {
  const DistSignal da = io::load_dist(a.a);
  const DistSignal db = io::load_dist(a.b);
  const W2Result r = w2(da, db, W2Budget{a.budget, a.seed});
  std::cout << r.value << " (" << w2_route_name(r.route) << ")\n";

  if (!a.plan.empty()) {
    if (!da.is<Empirical>() || !db.is<Empirical>())
      throw MalformedInput("--plan needs two empirical inputs");
    io::write_coupling_csv(a.plan,
                           w2_empirical_exact(da.as<Empirical>(), db.as<Empirical>()).plan);
  }
  const json config{{"a", a.a}, {"b", a.b}, {"budget", a.budget}, {"seed", a.seed}};
  if (!a.out.empty()) {
    io::save_json(a.out, json{{"value", r.value},
                              {"route", w2_route_name(r.route)},
                              {"seed", a.seed},
                              {"budget", a.budget}});
    write_manifest(a.out, "w2", config);
  }
  return 0;
}

// ----------------------------------------------------------- push/boxplus

struct PushArgs {
  std::string op, op2, mu, out;
  int budget = 256;
  std::uint64_t seed = 0;
  bool force_sampling = false;
  int workers = 1;
};

int run_push(const PushArgs& a, bool box) {
  const OperatorPair c1 = io::load_operator_pair(a.op);
  const DistSignal mu = io::load_dist(a.mu);
  PushOptions opt{a.budget, a.seed, a.force_sampling, a.workers};
  const DistSignal result = box
                                ? boxplus(c1, io::load_operator_pair(a.op2), mu, opt)
                                : pushforward(c1, mu, opt);
  io::save_dist(a.out, result);
  json config{{"op", a.op},       {"mu", a.mu},           {"budget", a.budget},
              {"seed", a.seed},   {"out", a.out},         {"workers", a.workers},
              {"force-sampling", a.force_sampling}};
  if (box) config["op2"] = a.op2;
  write_manifest(a.out, box ? "boxplus" : "push", config);
  return 0;
}

// ---------------------------------------------------------------- expect

struct ExpectArgs {
  std::string op, x, out, operator_out;
};

int run_expect(const ExpectArgs& a) {
  const OperatorPair c = io::load_operator_pair(a.op);
  const Eigen::VectorXd x = io::vector_from_json(io::load_json(a.x));
  const Eigen::VectorXd e = cond_expectation(c, x);
  if (!a.operator_out.empty())
    io::write_csv_matrix(a.operator_out, cond_expectation_operator(c));
  if (a.out.empty()) {
    std::cout << io::vector_to_json(e).dump() << "\n";
  } else {
    io::save_json(a.out, json{{"expectation", io::vector_to_json(e)}});
    write_manifest(a.out, "expect", json{{"op", a.op}, {"x", a.x}, {"out", a.out}});
  }
  return 0;
}

// ----------------------------------------------------------------- probe

struct ProbeArgs {
  std::string op, mu, out;
  std::vector<double> scales{0.5, 0.25, 0.125, 0.0625};
  int budget = 256;
  std::uint64_t seed = 0;
};

int run_probe(const ProbeArgs& a) {
  const OperatorPair c = io::load_operator_pair(a.op);
  const DistSignal mu = io::load_dist(a.mu);
  const auto rows = continuity_probe(c, mu, a.scales, PushOptions{a.budget, a.seed});
  Eigen::MatrixXd table(rows.size(), 3);
  for (size_t i = 0; i < rows.size(); ++i)
    table.row(i) << rows[i].scale, rows[i].input_w2, rows[i].output_w2;
  io::write_csv_matrix(a.out, table);
  write_manifest(a.out, "probe",
                 json{{"op", a.op},
                      {"mu", a.mu},
                      {"scales", a.scales},
                      {"budget", a.budget},
                      {"seed", a.seed},
                      {"out", a.out}});
  return 0;
}

// --------------------------------------------------------------- recover

struct RecoverArgs {
  std::string bases_dir, basis, samples, out;
};

int run_recover(const RecoverArgs& a) {
  const SampleSet samples = io::load_sample_set(a.samples);
  json config{{"samples", a.samples}, {"out", a.out}};

  if (!a.basis.empty()) {
    const Eigen::MatrixXd basis = io::read_csv_matrix(a.basis);
    const Eigen::VectorXd signal = recover_bandlimited(basis, samples);
    io::save_json(a.out, json{{"signal", io::vector_to_json(signal)}});
    config["basis"] = a.basis;
    write_manifest(a.out, "recover", config);
    return 0;
  }

  std::vector<std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(a.bases_dir))
    if (entry.path().extension() == ".csv") files.push_back(entry.path().string());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw MalformedInput("no .csv bases in " + a.bases_dir);
  std::vector<Eigen::MatrixXd> candidates;
  for (const auto& f : files) candidates.push_back(io::read_csv_matrix(f));

  const SubspaceMatch match = identify_subspace(candidates, samples);
  json residuals = json::array();
  for (size_t i = 0; i < match.residuals.size(); ++i)
    residuals.push_back(json{{"candidate", files[i]}, {"residual", match.residuals[i]}});
  io::save_json(a.out, json{{"index", match.index},
                            {"candidate", files[match.index]},
                            {"signal", io::vector_to_json(match.signal)},
                            {"residuals", residuals}});
  config["bases"] = a.bases_dir;
  write_manifest(a.out, "recover", config);
  std::cout << "matched candidate " << match.index << " (" << files[match.index] << ")\n";
  return 0;
}

// --------------------------------------------------------- pipeline-mnist

struct MnistArgs {
  int rows = 12, cols = 12;
  int classes = 3;
  int train_per_class = 200;
  int draw = 16;
  double noise_var = 0.1;  // per-pixel noise variance; not fixed by the source data
  double level = 0.5;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string outdir;
  std::string data;  // optional CSV of signals replacing the synthetic classes
};

Eigen::VectorXd digit_template(int rows, int cols, int cls) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(rows * cols);
  auto at = [&](int r, int c) -> double& { return t(r * cols + c); };
  switch (cls % 4) {
    case 0:  // vertical bar
      for (int r = 1; r + 1 < rows; ++r) at(r, cols / 2) = 1.0;
      break;
    case 1:  // horizontal bar
      for (int c = 1; c + 1 < cols; ++c) at(rows / 2, c) = 1.0;
      break;
    case 2:  // box outline
      for (int r = 1; r + 1 < rows; ++r)
        for (int c = 1; c + 1 < cols; ++c)
          if (r == 1 || r + 2 == rows || c == 1 || c + 2 == cols) at(r, c) = 1.0;
      break;
    default:  // diagonal band
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
          if (std::abs(r * (cols - 1) - c * (rows - 1)) <= cols) at(r, c) = 1.0;
  }
  return t;
}

int run_mnist(const MnistArgs& a) {
  std::filesystem::create_directories(a.outdir);
  const Graph g = build_lattice(a.rows, a.cols);
  const int n = g.size();
  const auto root = rng::root(a.seed);

  std::vector<Eigen::MatrixXd> class_samples;
  if (!a.data.empty()) {
    class_samples.push_back(io::read_csv_matrix(a.data));
    if (class_samples.back().cols() != n)
      throw MalformedInput("data width does not match the lattice size");
  } else {
    for (int cls = 0; cls < a.classes; ++cls) {
      const Eigen::VectorXd base = digit_template(a.rows, a.cols, cls);
      const Gaussian noisy(base, a.noise_var * Eigen::MatrixXd::Identity(n, n));
      class_samples.push_back(
          sample(DistSignal(noisy), a.train_per_class, root.substream(cls).key()).points);
    }
  }

  for (size_t cls = 0; cls < class_samples.size(); ++cls) {
    const std::string tag = "class" + std::to_string(cls);
    const Eigen::MatrixXd& train = class_samples[cls];

    const EdgewiseModel edgewise = fit_edgewise(train, g);
    const Gaussian joint = fit_gaussian(train);

    Eigen::MatrixXd edge_draws(a.draw, n), joint_draws(a.draw, n);
    const auto draw_root = root.substream(1000 + cls);
    parallel_for(a.draw, a.workers, [&](std::int64_t i) {
      edge_draws.row(i) =
          sample_edgewise(edgewise, draw_root.substream(0).key(), i).transpose();
      joint_draws.row(i) =
          sample_point(DistSignal(joint), draw_root.substream(1).key(), i).transpose();
    });
    Eigen::MatrixXd edge_thr = edge_draws, joint_thr = joint_draws;
    for (int i = 0; i < a.draw; ++i) {
      edge_thr.row(i) = threshold(edge_draws.row(i).transpose(), a.level).transpose();
      joint_thr.row(i) = threshold(joint_draws.row(i).transpose(), a.level).transpose();
    }

    io::write_csv_matrix(join_dir(a.outdir, tag + "_edgewise_samples.csv"), edge_draws);
    io::write_csv_matrix(join_dir(a.outdir, tag + "_joint_samples.csv"), joint_draws);
    io::write_csv_matrix(join_dir(a.outdir, tag + "_edgewise_thresholded.csv"), edge_thr);
    io::write_csv_matrix(join_dir(a.outdir, tag + "_joint_thresholded.csv"), joint_thr);
    io::save_dist(join_dir(a.outdir, tag + "_joint_model.json"), DistSignal(joint));

    json edges = json::array();
    for (const auto& e : edgewise.edges)
      edges.push_back(json{{"u", e.u},
                           {"v", e.v},
                           {"mean", io::vector_to_json(e.mean)},
                           {"cov", io::matrix_to_json(e.cov)}});
    io::save_json(join_dir(a.outdir, tag + "_edgewise_model.json"),
                  json{{"root", edgewise.root},
                       {"vertex_mean", io::vector_to_json(edgewise.vertex_mean)},
                       {"vertex_var", io::vector_to_json(edgewise.vertex_var)},
                       {"edges", edges},
                       {"seed", a.seed}});
  }

  write_manifest(join_dir(a.outdir, "run"), "pipeline-mnist",
                 json{{"rows", a.rows},
                      {"cols", a.cols},
                      {"classes", a.classes},
                      {"train-per-class", a.train_per_class},
                      {"draw", a.draw},
                      {"noise-var", a.noise_var},
                      {"level", a.level},
                      {"seed", a.seed},
                      {"workers", a.workers},
                      {"data", a.data},
                      {"outdir", a.outdir}});
  return 0;
}

// ------------------------------------------------------- pipeline-weather

struct WeatherArgs {
  std::string data;  // optional CSV: days as rows, stations as columns
  int stations = 24;
  int groups = 24;
  int group_len = 7;
  int horizon = 4;
  int knn = 4;
  std::string mode = "distributional";
  int coeff_degree = 2;
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  std::string outdir;
};

int run_weather(const WeatherArgs& a) {
  std::filesystem::create_directories(a.outdir);
  const auto root = rng::root(a.seed);

  // station layout and graph
  Graph g = [&]() {
    if (!a.data.empty()) {
      // stations on a synthetic layout of matching width; real coordinates
      // can be supplied by building the graph separately
      const int n = static_cast<int>(io::read_csv_matrix(a.data).cols());
      Eigen::MatrixXd coords(n, 2);
      const auto cs = root.substream(1);
      for (int i = 0; i < n; ++i) {
        coords(i, 0) = cs.uniform01(2 * i);
        coords(i, 1) = cs.uniform01(2 * i + 1);
      }
      return build_knn(coords, std::min(a.knn, n - 1));
    }
    Eigen::MatrixXd coords(a.stations, 2);
    const auto cs = root.substream(1);
    for (int i = 0; i < a.stations; ++i) {
      coords(i, 0) = cs.uniform01(2 * i);
      coords(i, 1) = cs.uniform01(2 * i + 1);
    }
    return build_knn(coords, std::min(a.knn, a.stations - 1));
  }();
  const int n = g.size();

  // readings: ingested or synthesized from a known a-dependent filter
  Eigen::MatrixXd days;
  if (!a.data.empty()) {
    days = io::read_csv_matrix(a.data);
  } else {
    FilterFamily truth;
    truth.degree = 2;
    truth.coeff_degree = 2;
    truth.theta.resize(3, 3);
    truth.theta << 0.9, 0.02, 0.001, -0.3, 0.01, -0.002, 0.05, -0.004, 0.0005;
    const int total_days = a.groups * a.group_len + a.horizon + a.group_len;
    days.resize(total_days, n);
    const auto ds = root.substream(2);
    for (int d = 0; d < total_days; ++d) {
      const auto row = ds.substream(d);
      const double base = 10.0 + 8.0 * std::sin(2.0 * M_PI * d / 90.0);
      for (int s = 0; s < n; ++s) days(d, s) = base + 2.0 * row.normal(s);
    }
    // future readings follow the signal-dependent filter exactly
    Eigen::MatrixXd filtered = days;
    for (int d = 0; d + a.horizon < total_days; ++d) {
      const double av = days.row(d).mean();
      filtered.row(d + a.horizon) =
          (truth.filter_at(g, av) * days.row(d).transpose()).transpose();
    }
    days = filtered;
  }

  // groups of consecutive days plus their future counterparts
  std::vector<SignalGroup> all_groups;
  for (int start = 0; start + a.group_len + a.horizon <= days.rows();
       start += a.group_len) {
    SignalGroup grp;
    grp.inputs = days.middleRows(start, a.group_len);
    grp.targets = days.middleRows(start + a.horizon, a.group_len);
    all_groups.push_back(std::move(grp));
  }
  if (all_groups.size() < 2) throw MalformedInput("not enough days for two groups");
  const auto train_count = std::max<size_t>(1, all_groups.size() * a.train_fraction);
  std::vector<SignalGroup> train(all_groups.begin(), all_groups.begin() + train_count);
  std::vector<SignalGroup> test(all_groups.begin() + train_count, all_groups.end());
  if (test.empty()) test = train;

  LearnOptions options;
  options.mode = a.mode == "pointwise" || a.mode == "s" ? LearnMode::Pointwise
                                                        : LearnMode::Distributional;
  options.coeff_degree = a.coeff_degree;
  const LearnResult result = learn_predictive_filter(train, g, options);
  const SnrTable snr = evaluate_snr(result.family, g, test);

  Eigen::MatrixXd snr_table(snr.per_signal_db.size(), 1);
  for (size_t i = 0; i < snr.per_signal_db.size(); ++i) snr_table(i, 0) = snr.per_signal_db[i];
  io::write_csv_matrix(join_dir(a.outdir, "snr.csv"), snr_table);
  if (!result.loss_history.empty()) {
    Eigen::MatrixXd loss(result.loss_history.size(), 1);
    for (size_t i = 0; i < result.loss_history.size(); ++i) loss(i, 0) = result.loss_history[i];
    io::write_csv_matrix(join_dir(a.outdir, "loss.csv"), loss);
  }
  io::save_json(join_dir(a.outdir, "family.json"),
                json{{"gso", io::gso_name(result.family.gso)},
                     {"degree", result.family.degree},
                     {"coeff_degree", result.family.coeff_degree},
                     {"theta", io::matrix_to_json(result.family.theta)},
                     {"final_loss", result.final_loss},
                     {"mean_snr_db", snr.mean_db},
                     {"seed", a.seed}});
  io::save_graph(join_dir(a.outdir, "graph.json"), g);

  write_manifest(join_dir(a.outdir, "run"), "pipeline-weather",
                 json{{"data", a.data},
                      {"stations", a.stations},
                      {"groups", a.groups},
                      {"group-len", a.group_len},
                      {"horizon", a.horizon},
                      {"knn", a.knn},
                      {"mode", a.mode},
                      {"coeff-degree", a.coeff_degree},
                      {"train-fraction", a.train_fraction},
                      {"seed", a.seed},
                      {"outdir", a.outdir}});
  std::cout << "mean SNR " << snr.mean_db << " dB over " << snr.per_signal_db.size()
            << " signals\n";
  return 0;
}

// ------------------------------------------------------- pipeline-anomaly

struct AnomalyArgs {
  int h_size = 8;
  int path_len = 10;
  int subjects = 2;
  int train_per_class = 40;
  int kmax = 8;
  int trials = 50;
  std::uint64_t seed = 0;
  std::string outdir;
};

int run_anomaly(const AnomalyArgs& a) {
  std::filesystem::create_directories(a.outdir);
  const auto root = rng::root(a.seed);

  const SyntheticAnomaly data = make_synthetic_anomaly(a.h_size, a.path_len, a.subjects);
  AnomalyConfig config = data.config;
  config.seed = root.substream(0).key();
  const auto train = data.train(a.train_per_class, root.substream(1).key());
  const AnomalyModel model = build_anomaly_model(train, config);

  // accuracy against instance size
  Eigen::MatrixXd accuracy(a.kmax, 2);
  const auto trial_root = root.substream(2);
  for (int k = 1; k <= a.kmax; ++k) {
    long correct = 0, total = 0;
    for (size_t cls = 0; cls < data.keys.size(); ++cls) {
      for (int t = 0; t < a.trials; ++t) {
        const auto s = trial_root.substream(k).substream(cls).substream(t);
        const Eigen::MatrixXd instance =
            data.draw_signals(static_cast<int>(cls), k, s.key());
        const ClassKey got = classify(model, instance, s.substream(99).key());
        correct += got == data.keys[cls];
        ++total;
      }
    }
    accuracy(k - 1, 0) = k;
    accuracy(k - 1, 1) = static_cast<double>(correct) / static_cast<double>(total);
  }
  io::write_csv_matrix(join_dir(a.outdir, "accuracy.csv"), accuracy);

  json classes = json::array();
  for (const auto& cls : model.classes) {
    json peaks = json::array();
    for (const auto& p : cls.peaks()) peaks.push_back({p(0), p(1)});
    classes.push_back(json{{"class", class_key_name(cls.key)},
                           {"subject", cls.key.subject},
                           {"condition", cls.key.condition},
                           {"peaks", peaks},
                           {"nu1_candidates", cls.nu1_candidates},
                           {"nu2_candidates", cls.nu2_candidates}});
  }
  io::save_json(join_dir(a.outdir, "model.json"),
                json{{"feature_map", model.feature_map},
                     {"classes", classes},
                     {"seed", a.seed}});

  write_manifest(join_dir(a.outdir, "run"), "pipeline-anomaly",
                 json{{"h-size", a.h_size},
                      {"path-len", a.path_len},
                      {"subjects", a.subjects},
                      {"train-per-class", a.train_per_class},
                      {"kmax", a.kmax},
                      {"trials", a.trials},
                      {"seed", a.seed},
                      {"outdir", a.outdir}});
  std::cout << "accuracy at k=" << a.kmax << ": " << accuracy(a.kmax - 1, 1) << "\n";
  return 0;
}

// -------------------------------------------------------------- selftest

int run_selftest() {
  int failures = 0;
  auto check = [&](const std::string& name, bool ok) {
    std::cout << (ok ? "PASS  " : "FAIL  ") << name << "\n";
    failures += !ok;
  };

  {
    const Graph p2 = build_path(2);
    const Eigen::MatrixXd l = gso(p2, GsoKind::Laplacian);
    Eigen::MatrixXd expect(2, 2);
    expect << 1, -1, -1, 1;
    check("laplacian of the 2-path", (l - expect).cwiseAbs().maxCoeff() == 0.0);

    const auto dec = eigendecompose(l);
    check("2-path eigenvalues (0, 2)",
          std::abs(dec.eigenvalues(0)) < 1e-12 && std::abs(dec.eigenvalues(1) - 2) < 1e-12);
  }
  {
    const Gaussian a(Eigen::VectorXd::Zero(1), Eigen::MatrixXd::Identity(1, 1));
    const Gaussian b(Eigen::VectorXd::Zero(1), 4.0 * Eigen::MatrixXd::Identity(1, 1));
    check("gaussian closed form N(0,1) vs N(0,4)", std::abs(w2_gaussian(a, b) - 1.0) < 1e-9);
  }
  {
    Eigen::MatrixXd xs(2, 1), ys(2, 1);
    xs << 0, 2;
    ys << 1, 3;
    const auto r = w2_empirical_exact(Empirical::uniform(xs), Empirical::uniform(ys));
    check("exact transport on {0,2} vs {1,3}", std::abs(r.distance - 1.0) < 1e-12);
  }
  {
    const Graph g = build_lattice(2, 3);
    const OperatorPair c{Sags::classical(g), FilterMap(PolynomialFilter{{0.0, 1.0}})};
    Eigen::VectorXd x(6);
    x << 1, -2, 3, 0, 1, -1;
    const DistSignal out = pushforward(c, DistSignal(Delta{x}), PushOptions{});
    const Eigen::VectorXd direct = gso(g, GsoKind::Laplacian) * x;
    const bool ok = out.is<Empirical>() && out.as<Empirical>().count() == 1 &&
                    (out.as<Empirical>().points().row(0).transpose() - direct)
                            .cwiseAbs()
                            .maxCoeff() < 1e-12;
    check("classical reduction: pushforward equals the matrix action", ok);
  }
  {
    // linearity of the conditional expectation under scaling and addition
    const Graph g1 = build_path(3);
    const Graph g2 = build_lattice(1, 3);
    GraphDistribution nu({g1, g2}, Eigen::Vector2d(0.25, 0.75));
    const OperatorPair c1{Sags::constant(nu), FilterMap(PolynomialFilter{{0.0, 1.0}})};
    const OperatorPair c2{Sags::constant(nu),
                          FilterMap(PolynomialFilter{{1.0, 0.0, 0.5}})};
    Eigen::VectorXd x(3);
    x << 1, 2, -1;
    const double r = -2.0;
    Eigen::VectorXd lhs = Eigen::VectorXd::Zero(3);
    {
      const OperatorPair rc1 = scalar_mul(r, c1);
      const MatrixLaw l1 = matrix_law(rc1, x);
      const MatrixLaw l2 = matrix_law(c2, x);
      for (const auto& a1 : l1.support)
        for (const auto& a2 : l2.support)
          lhs += a1.prob * a2.prob * (a1.matrix * x + a2.matrix * x);
    }
    const Eigen::VectorXd rhs = r * cond_expectation(c1, x) + cond_expectation(c2, x);
    check("scaling and addition pass through the expectation",
          (lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
  }
  {
    // point mass vs its projection: the expectation gap is a lower bound
    const Graph g = build_lattice(2, 2);
    const OperatorPair p{Sags::classical(g),
                         FilterMap(ProjectionFilter{IndexBand{{0, 1}}})};
    Eigen::VectorXd x(4);
    x << 1, -1, 2, 0.5;
    const double deficit =
        invariance_deficit(DistSignal(Delta{x}), ProjectionOperatorPair(p), W2Budget{});
    const double gap = (x - cond_expectation(p, x)).norm();
    check("projection deficit dominates the expectation gap", gap <= deficit + 1e-9);
  }
  {
    Eigen::MatrixXd basis(6, 2);
    basis << 1, 0, 0, 1, 1, 1, 2, -1, 0.5, 0.5, -1, 2;
    const Eigen::VectorXd coeff = Eigen::Vector2d(0.7, -1.3);
    const Eigen::VectorXd x = basis * coeff;
    const auto idx = choose_sample_set(basis, 0);
    Eigen::VectorXd vals(idx.size());
    for (size_t i = 0; i < idx.size(); ++i) vals(i) = x(idx[i]);
    const Eigen::VectorXd rec = recover_bandlimited(basis, make_sample_set(idx, vals));
    check("bandlimited recovery round trip", (rec - x).cwiseAbs().maxCoeff() < 1e-8);
  }
  std::cout << (failures == 0 ? "all checks passed\n" : "failures present\n");
  return failures == 0 ? 0 : 2;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"distributional graph signal processing toolkit"};
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());

  GraphArgs graph_args;
  auto* graph_cmd = app.add_subcommand("graph", "build and convert graphs");
  graph_cmd->add_option("--lattice", graph_args.lattice, "rows cols")->expected(2);
  graph_cmd->add_option("--knn", graph_args.knn_file, "points CSV (one point per row)");
  graph_cmd->add_option("--k", graph_args.k, "neighbor count for --knn");
  graph_cmd->add_flag("--mutual", graph_args.mutual, "mutual-kNN edges only");
  graph_cmd->add_option("--product", graph_args.product, "two graph files")->expected(2);
  graph_cmd->add_option("--from-csv", graph_args.from_csv, "adjacency CSV");
  graph_cmd->add_option("--out", graph_args.out, "output graph JSON")->required();
  graph_cmd->add_option("--spectrum", graph_args.spectrum, "write GSO eigenvalues CSV");
  graph_cmd->add_option("--gso", graph_args.gso_kind,
                        "adjacency|laplacian|normalized_laplacian");
  graph_cmd->set_config("--config");

  W2Args w2_args;
  auto* w2_cmd = app.add_subcommand("w2", "Wasserstein-2 distance between signal files");
  w2_cmd->add_option("--a", w2_args.a)->required();
  w2_cmd->add_option("--b", w2_args.b)->required();
  w2_cmd->add_option("--budget", w2_args.budget);
  w2_cmd->add_option("--seed", w2_args.seed);
  w2_cmd->add_option("--out", w2_args.out, "result JSON");
  w2_cmd->add_option("--plan", w2_args.plan, "coupling CSV (empirical inputs)");
  w2_cmd->set_config("--config");

  PushArgs push_args;
  auto* push_cmd = app.add_subcommand("push", "pushforward of a signal file");
  push_cmd->add_option("--op", push_args.op)->required();
  push_cmd->add_option("--mu", push_args.mu)->required();
  push_cmd->add_option("--budget", push_args.budget);
  push_cmd->add_option("--seed", push_args.seed);
  push_cmd->add_flag("--force-sampling", push_args.force_sampling);
  push_cmd->add_option("--workers", push_args.workers);
  push_cmd->add_option("--out", push_args.out)->required();
  push_cmd->set_config("--config");

  PushArgs box_args;
  auto* box_cmd = app.add_subcommand("boxplus", "sum of two operator pairs on a signal");
  box_cmd->add_option("--op1", box_args.op)->required();
  box_cmd->add_option("--op2", box_args.op2)->required();
  box_cmd->add_option("--mu", box_args.mu)->required();
  box_cmd->add_option("--budget", box_args.budget);
  box_cmd->add_option("--seed", box_args.seed);
  box_cmd->add_option("--workers", box_args.workers);
  box_cmd->add_option("--out", box_args.out)->required();
  box_cmd->set_config("--config");

  ExpectArgs expect_args;
  auto* expect_cmd = app.add_subcommand("expect", "conditional expectation at a signal");
  expect_cmd->add_option("--op", expect_args.op)->required();
  expect_cmd->add_option("--x", expect_args.x, "JSON array file")->required();
  expect_cmd->add_option("--out", expect_args.out);
  expect_cmd->add_option("--operator-out", expect_args.operator_out,
                         "CSV of the expectation operator (constant structures)");
  expect_cmd->set_config("--config");

  ProbeArgs probe_args;
  auto* probe_cmd = app.add_subcommand("probe", "continuity probe table");
  probe_cmd->add_option("--op", probe_args.op)->required();
  probe_cmd->add_option("--mu", probe_args.mu)->required();
  probe_cmd->add_option("--scales", probe_args.scales, "decreasing perturbation radii");
  probe_cmd->add_option("--budget", probe_args.budget);
  probe_cmd->add_option("--seed", probe_args.seed);
  probe_cmd->add_option("--out", probe_args.out, "CSV output")->required();
  probe_cmd->set_config("--config");

  RecoverArgs recover_args;
  auto* recover_cmd = app.add_subcommand("recover", "bandlimited recovery / identification");
  recover_cmd->add_option("--bases", recover_args.bases_dir, "directory of basis CSVs");
  recover_cmd->add_option("--basis", recover_args.basis, "single basis CSV");
  recover_cmd->add_option("--samples", recover_args.samples)->required();
  recover_cmd->add_option("--out", recover_args.out)->required();
  recover_cmd->set_config("--config");

  MnistArgs mnist_args;
  auto* mnist_cmd = app.add_subcommand("pipeline-mnist", "edgewise vs joint signal models");
  mnist_cmd->add_option("--rows", mnist_args.rows);
  mnist_cmd->add_option("--cols", mnist_args.cols);
  mnist_cmd->add_option("--classes", mnist_args.classes);
  mnist_cmd->add_option("--train-per-class", mnist_args.train_per_class);
  mnist_cmd->add_option("--draw", mnist_args.draw, "samples drawn per model");
  mnist_cmd->add_option("--noise-var", mnist_args.noise_var);
  mnist_cmd->add_option("--level", mnist_args.level, "threshold level");
  mnist_cmd->add_option("--seed", mnist_args.seed);
  mnist_cmd->add_option("--workers", mnist_args.workers);
  mnist_cmd->add_option("--outdir", mnist_args.outdir)->required();
  mnist_cmd->add_option("--data", mnist_args.data, "CSV of signals replacing synthesis");
  mnist_cmd->set_config("--config");

  WeatherArgs weather_args;
  auto* weather_cmd = app.add_subcommand("pipeline-weather", "predictive filter learning");
  weather_cmd->add_option("--data", weather_args.data, "CSV: days x stations");
  weather_cmd->add_option("--stations", weather_args.stations);
  weather_cmd->add_option("--groups", weather_args.groups);
  weather_cmd->add_option("--group-len", weather_args.group_len);
  weather_cmd->add_option("--horizon", weather_args.horizon);
  weather_cmd->add_option("--knn", weather_args.knn);
  weather_cmd->add_option("--mode", weather_args.mode, "distributional|pointwise");
  weather_cmd->add_option("--coeff-degree", weather_args.coeff_degree)
      ->check(CLI::IsMember({0, 2}));
  weather_cmd->add_option("--train-fraction", weather_args.train_fraction);
  weather_cmd->add_option("--seed", weather_args.seed);
  weather_cmd->add_option("--outdir", weather_args.outdir)->required();
  weather_cmd->set_config("--config");

  AnomalyArgs anomaly_args;
  auto* anomaly_cmd = app.add_subcommand("pipeline-anomaly", "boxplus anomaly detection");
  anomaly_cmd->add_option("--h-size", anomaly_args.h_size);
  anomaly_cmd->add_option("--path-len", anomaly_args.path_len);
  anomaly_cmd->add_option("--subjects", anomaly_args.subjects);
  anomaly_cmd->add_option("--train-per-class", anomaly_args.train_per_class);
  anomaly_cmd->add_option("--kmax", anomaly_args.kmax, "largest instance size");
  anomaly_cmd->add_option("--trials", anomaly_args.trials, "trials per class and size");
  anomaly_cmd->add_option("--seed", anomaly_args.seed);
  anomaly_cmd->add_option("--outdir", anomaly_args.outdir)->required();
  anomaly_cmd->set_config("--config");

  auto* selftest_cmd = app.add_subcommand("selftest", "run the exact-path invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (graph_cmd->parsed()) return run_graph(graph_args);
    if (w2_cmd->parsed()) {
      require_seed(w2_cmd);
      return run_w2(w2_args);
    }
    if (push_cmd->parsed()) {
      require_seed(push_cmd);
      return run_push(push_args, false);
    }
    if (box_cmd->parsed()) {
      require_seed(box_cmd);
      return run_push(box_args, true);
    }
    if (expect_cmd->parsed()) return run_expect(expect_args);
    if (probe_cmd->parsed()) {
      require_seed(probe_cmd);
      return run_probe(probe_args);
    }
    if (recover_cmd->parsed()) return run_recover(recover_args);
    if (mnist_cmd->parsed()) {
      require_seed(mnist_cmd);
      return run_mnist(mnist_args);
    }
    if (weather_cmd->parsed()) {
      require_seed(weather_cmd);
      return run_weather(weather_args);
    }
    if (anomaly_cmd->parsed()) {
      require_seed(anomaly_cmd);
      return run_anomaly(anomaly_args);
    }
    if (selftest_cmd->parsed()) return run_selftest();
    throw UnknownCommand("no subcommand given");
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.category() == ErrorCategory::InvalidInput ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("dgsp");
  for (const auto& a : args) argv.push_back(a.c_str());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace dgsp
