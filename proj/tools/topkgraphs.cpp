// topkgraphs command-line tool: affinity, generate, cluster, classify, embed
// and bench subcommands.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <topkgraphs/topkgraphs.hpp>

namespace {

using namespace topk;

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WalkFlags {
  std::size_t walks = 50;
  std::size_t walk_length = 20;
  double epsilon = 0.01;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd, bool with_seed) {
    cmd->add_option("--walks", walks, "Walks per start node (K)")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--walk-length", walk_length, "Steps per walk (T)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--epsilon", epsilon, "Smoothing constant added to every Jaccard weight")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    if (with_seed) cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
  }

  WalkConfig config() const {
    WalkConfig cfg;
    cfg.num_walks = walks;
    cfg.walk_length = walk_length;
    cfg.epsilon = epsilon;
    cfg.seed = seed;
    return cfg;
  }
};

std::size_t thread_count(std::size_t flag) { return flag == 0 ? default_thread_count() : flag; }

// Writes to `path`, or stdout for "-" or an empty path.
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  auto out = open_output(path);
  fn(out);
  if (!out) throw FileError("failed writing '" + path + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

// ---------------------------------------------------------------------------

struct AffinityCmd {
  std::string method = "topk";
  WalkFlags walk;
  double restart_prob = 0.15;
  std::size_t embed_dim = 8;
  std::size_t threads = 0;
  std::string input;
  std::string output;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("affinity", "Edge list -> symmetric dissimilarity matrix (CSV)");
    cmd->add_option("--method", method, "topk, jaccard, dice, ppr or laplacian")
        ->capture_default_str()
        ->check(CLI::IsMember({"topk", "jaccard", "dice", "ppr", "laplacian"}));
    walk.add(cmd, true);
    cmd->add_option("--restart-prob", restart_prob, "PPR restart probability")->capture_default_str();
    cmd->add_option("--embed-dim", embed_dim, "Laplacian embedding dimension")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker threads (0: TOPKGRAPHS_THREADS or all cores)");
    cmd->add_option("input", input, "Edge list file")->required();
    cmd->add_option("output", output, "Matrix CSV file ('-' for stdout)")->required();
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto g = read_edge_list(input);
    MethodParams params;
    params.walk = walk.config();
    params.ppr.restart_prob = restart_prob;
    params.embed_dim = embed_dim;
    const auto res = compute_affinity(g.graph, parse_method(method), params, std::nullopt, thread_count(threads));
    if (!res.warning.empty()) std::cerr << "warning: " << res.warning << '\n';
    with_output(output, [&](std::ostream& out) { write_matrix(out, res.matrix, g.names); });
    std::cerr << method << " affinity: n=" << g.graph.num_nodes() << " m=" << g.graph.num_edges()
              << " runtime_seconds=" << res.seconds << '\n';
  }
};

// ---------------------------------------------------------------------------

struct GenerateCmd {
  std::string preset;
  std::string model = "sbm";
  std::string blocks = "10,10,10";
  double p_intra = 0.5;
  double p_inter = 0.05;
  LfrConfig lfr_cfg;
  std::uint64_t seed = 0;
  std::string edges_path;
  std::string labels_path;
  CLI::App* cmd = nullptr;

  void add(CLI::App& app) {
    cmd = app.add_subcommand("generate", "Generate an SBM or LFR graph with ground-truth labels");
    cmd->add_option("--preset", preset, "fig1-intra (SBM 3x10) or fig3-lfr-mu (LFR n=100)")
        ->check(CLI::IsMember({"fig1-intra", "fig2-inter", "fig3-lfr-mu"}));
    cmd->add_option("--model", model, "sbm or lfr")->capture_default_str()->check(CLI::IsMember({"sbm", "lfr"}));
    cmd->add_option("--blocks", blocks, "SBM block sizes, comma separated")->capture_default_str();
    cmd->add_option("--p-intra", p_intra, "SBM within-block edge probability")->capture_default_str();
    cmd->add_option("--p-inter", p_inter, "SBM between-block edge probability")->capture_default_str();
    cmd->add_option("--n", lfr_cfg.n, "LFR node count")->capture_default_str();
    cmd->add_option("--avg-degree", lfr_cfg.avg_degree, "LFR mean degree")->capture_default_str();
    cmd->add_option("--max-degree", lfr_cfg.max_degree, "LFR maximum degree")->capture_default_str();
    cmd->add_option("--mu", lfr_cfg.mu, "LFR mixing parameter")->capture_default_str();
    cmd->add_option("--tau1", lfr_cfg.tau1, "LFR degree exponent")->capture_default_str();
    cmd->add_option("--tau2", lfr_cfg.tau2, "LFR community size exponent")->capture_default_str();
    cmd->add_option("--min-community", lfr_cfg.min_community, "LFR smallest community")->capture_default_str();
    cmd->add_option("--max-community", lfr_cfg.max_community, "LFR largest community")->capture_default_str();
    cmd->add_option("--seed", seed, "Generator seed")->capture_default_str();
    cmd->add_option("--edges", edges_path, "Output edge list")->required();
    cmd->add_option("--labels", labels_path, "Output label CSV")->required();
    cmd->callback([this] { run(); });
  }

  void run() {
    if (preset == "fig3-lfr-mu") {
      if (cmd->count("--model") && model != "lfr") throw UsageError("preset fig3-lfr-mu is an LFR model");
      model = "lfr";
    } else if (!preset.empty()) {
      if (cmd->count("--model") && model != "sbm") throw UsageError("preset " + preset + " is an SBM model");
      model = "sbm";
    }
    Graph g;
    Partition truth;
    std::ostringstream stats;
    if (model == "sbm") {
      SbmConfig cfg;
      cfg.block_sizes.clear();
      for (const auto& b : split_list(blocks)) cfg.block_sizes.push_back(std::stoul(b));
      cfg.p_intra = p_intra;
      cfg.p_inter = p_inter;
      cfg.seed = seed;
      auto gen = sbm(cfg);
      g = std::move(gen.graph);
      truth = std::move(gen.communities);
    } else {
      LfrConfig cfg = lfr_cfg;
      cfg.seed = seed;
      auto res = lfr(cfg);
      g = std::move(res.graph);
      truth = std::move(res.communities);
      stats << " realized_mu=" << res.realized_mu << " communities=" << truth.num_classes();
    }
    const auto names = numeric_names(g.num_nodes());
    // The edge-list format cannot carry isolated nodes; their labels are
    // left out too so the two files describe the same node set.
    std::vector<std::string> kept_names;
    Partition kept;
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      if (g.degree(v) == 0) continue;
      kept_names.push_back(names[v]);
      kept.labels.push_back(truth.labels[v]);
    }
    const std::size_t dropped = g.num_nodes() - kept_names.size();
    if (dropped > 0) {
      std::cerr << "warning: " << dropped << " isolated node(s) omitted from the edge list and labels\n";
    }
    with_output(edges_path, [&](std::ostream& out) { write_edge_list(out, g, names); });
    with_output(labels_path, [&](std::ostream& out) { write_labels(out, kept, kept_names); });
    std::cout << model << ": n=" << g.num_nodes() << " m=" << g.num_edges() << stats.str() << '\n';
  }
};

// ---------------------------------------------------------------------------

struct MatrixInput {
  NamedMatrix matrix;
  LabelData labels;
};

MatrixInput load_matrix_and_labels(const std::string& matrix_path, const std::string& labels_path) {
  MatrixInput in;
  in.matrix = read_matrix(matrix_path);
  in.labels = read_labels(labels_path, in.matrix.names);
  return in;
}

struct ClusterCmd {
  std::string matrix_path;
  std::string labels_path;
  std::size_t k_clusters = 0;
  std::string out_path;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("cluster", "Ward clustering of a matrix; ARI/NMI/AMI against labels");
    cmd->add_option("--matrix", matrix_path, "Matrix CSV")->required();
    cmd->add_option("--labels", labels_path, "Ground-truth label CSV")->required();
    cmd->add_option("--k-clusters", k_clusters, "Number of clusters (default: number of label classes)");
    cmd->add_option("--out", out_path, "Write predicted clusters as label CSV");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto in = load_matrix_and_labels(matrix_path, labels_path);
    const std::size_t k = k_clusters == 0 ? in.labels.labels.num_classes() : k_clusters;
    const auto found = ward_cluster(in.matrix.values, k);
    const auto scores = cluster_scores(in.labels.labels, found);
    if (!out_path.empty()) {
      with_output(out_path, [&](std::ostream& out) { write_labels(out, found, in.matrix.names); });
    }
    const nlohmann::json j = {{"n", in.matrix.names.size()}, {"k_clusters", k}, {"ari", scores.ari},
                              {"nmi", scores.nmi},          {"ami", scores.ami}};
    std::cout << j.dump() << '\n';
  }
};

struct ClassifyCmd {
  std::string matrix_path;
  std::string labels_path;
  std::size_t k = 5;
  std::string out_path;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("classify", "Leave-one-out kNN on a matrix; balanced accuracy");
    cmd->add_option("--matrix", matrix_path, "Matrix CSV")->required();
    cmd->add_option("--labels", labels_path, "Class label CSV")->required();
    cmd->add_option("--k", k, "Neighbors per vote")->capture_default_str();
    cmd->add_option("--out", out_path, "Write predicted labels as CSV");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto in = load_matrix_and_labels(matrix_path, labels_path);
    const auto pred = knn_classify(in.matrix.values, in.labels.labels, k);
    if (!out_path.empty()) {
      with_output(out_path, [&](std::ostream& out) {
        write_labels(out, pred, in.matrix.names, in.labels.class_names);
      });
    }
    const nlohmann::json j = {{"n", in.matrix.names.size()},
                              {"k", k},
                              {"balanced_accuracy", balanced_accuracy(in.labels.labels, pred)}};
    std::cout << j.dump() << '\n';
  }
};

struct EmbedCmd {
  std::string matrix_path;
  std::size_t dim = 2;
  std::string out_path;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("embed", "Classical MDS coordinates of a matrix");
    cmd->add_option("--matrix", matrix_path, "Matrix CSV")->required();
    cmd->add_option("--dim", dim, "Embedding dimension")->capture_default_str();
    cmd->add_option("--out", out_path, "Coordinate CSV ('-' for stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto m = read_matrix(matrix_path);
    const auto e = classical_mds(m.values, dim);
    with_output(out_path, [&](std::ostream& out) {
      out << "node";
      for (std::size_t c = 0; c < dim; ++c) out << ",x" << c + 1;
      out << '\n';
      for (std::size_t i = 0; i < m.names.size(); ++i) {
        out << m.names[i];
        for (double x : e.coordinates.row(i)) out << ',' << detail::format_double(x);
        out << '\n';
      }
    });
  }
};

// ---------------------------------------------------------------------------

struct BenchCmd {
  std::string preset;
  std::size_t reps = 50;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string methods;
  WalkFlags walk;
  double restart_prob = 0.15;
  std::size_t embed_dim = 0;
  std::size_t k_clusters = 0;
  std::size_t threads = 0;
  std::string features_path;
  std::string labels_path;
  std::string edges_path;
  std::size_t subgraph_size = 100;

  void add(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench", "Repeated experiments for a named figure preset (JSON lines)");
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    cmd->add_option("--preset", preset, "One of: " + list)->required();
    cmd->add_option("--reps", reps, "Repetitions per setting")->capture_default_str()->check(CLI::PositiveNumber);
    cmd->add_option("--seed", seed, "Master seed")->capture_default_str();
    cmd->add_option("--out", out_path, "Report file (default stdout)");
    cmd->add_option("--methods", methods, "Comma-separated methods (default: preset's list)");
    walk.add(cmd, false);
    cmd->add_option("--restart-prob", restart_prob, "PPR restart probability")->capture_default_str();
    cmd->add_option("--embed-dim", embed_dim, "Laplacian embedding dimension (default: cluster count)");
    cmd->add_option("--k-clusters", k_clusters, "Ward cut (default: ground-truth class count)");
    cmd->add_option("--threads", threads, "Worker threads (0: TOPKGRAPHS_THREADS or all cores)");
    cmd->add_option("--features", features_path, "Feature CSV (fig6-knn-tabular)");
    cmd->add_option("--labels", labels_path, "Label CSV (fig6-knn-tabular, fig7-subgraph-classify)");
    cmd->add_option("--edges", edges_path, "Edge list (fig7-subgraph-classify)");
    cmd->add_option("--subgraph-size", subgraph_size, "Sampled subgraph size (fig7-subgraph-classify)")
        ->capture_default_str();
    cmd->callback([this] { run(); });
  }

  void run() const {
    const auto names = preset_names();
    if (std::find(names.begin(), names.end(), preset) == names.end()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw UsageError("unknown preset '" + preset + "'; available presets: " + list);
    }
    BenchOptions opts;
    opts.preset = preset;
    opts.reps = reps;
    opts.seed = seed;
    for (const auto& m : split_list(methods)) opts.methods.push_back(parse_method(m));
    opts.walk = walk.config();
    opts.ppr.restart_prob = restart_prob;
    if (embed_dim > 0) opts.embed_dim = embed_dim;
    if (k_clusters > 0) opts.k_clusters = k_clusters;
    opts.threads = thread_count(threads);
    opts.subgraph_size = subgraph_size;
    if (!features_path.empty()) {
      opts.features = read_features(features_path);
      if (labels_path.empty()) throw UsageError("--features needs --labels");
      opts.labels = read_labels(labels_path, opts.features->names).labels;
    }
    if (!edges_path.empty()) {
      if (labels_path.empty()) throw UsageError("--edges needs --labels");
      const auto g = read_edge_list(edges_path);
      opts.graph = g.graph;
      opts.labels = read_labels(labels_path, g.names).labels;
    }
    const auto report = run_bench(opts);
    std::size_t failures = 0;
    for (const auto& r : report.records) failures += !r.error.empty();
    with_output(out_path, [&](std::ostream& out) { write_report(out, report); });
    if (failures > 0) std::cerr << "warning: " << failures << " run(s) failed; see \"error\" fields\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topkgraphs: random-walk rank aggregation affinities for graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "topkgraphs 0.1.0");

  AffinityCmd affinity;
  GenerateCmd generate;
  ClusterCmd cluster;
  ClassifyCmd classify;
  EmbedCmd embed;
  BenchCmd bench;
  affinity.add(app);
  generate.add(app);
  cluster.add(app);
  classify.add(app);
  embed.add(app);
  bench.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return 0;
}
