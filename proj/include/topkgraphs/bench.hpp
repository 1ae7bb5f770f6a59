#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "affinity.hpp"
#include "analysis.hpp"
#include "baselines.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "metrics.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace topk {

enum class Method { topk, jaccard, dice, ppr, laplacian };

constexpr std::string_view to_string(Method m) {
  switch (m) {
    case Method::topk: return "topk";
    case Method::jaccard: return "jaccard";
    case Method::dice: return "dice";
    case Method::ppr: return "ppr";
    case Method::laplacian: return "laplacian";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  for (Method m : {Method::topk, Method::jaccard, Method::dice, Method::ppr, Method::laplacian})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown method '" + std::string(s) +
                              "' (expected topk, jaccard, dice, ppr or laplacian)");
}

struct MethodParams {
  WalkConfig walk;
  PprConfig ppr;
  std::optional<std::size_t> embed_dim;  // default: cluster count if known, else 8
  bool tolerate_disconnected = false;    // Laplacian on disconnected graphs
};

struct AffinityRun {
  AffinityMatrix matrix;
  double seconds = 0.0;
  std::string warning;
};

// Symmetric dissimilarity for `method`; `seconds` covers only this
// construction (monotonic clock).
inline AffinityRun compute_affinity(const Graph& g, Method method, const MethodParams& params,
                                    std::optional<std::size_t> num_clusters = std::nullopt,
                                    std::size_t threads = 0) {
  AffinityRun run;
  const auto t0 = std::chrono::steady_clock::now();
  switch (method) {
    case Method::topk:
      run.matrix = topk_affinity(g, params.walk, threads);
      break;
    case Method::jaccard:
      run.matrix = jaccard_matrix(g);
      break;
    case Method::dice:
      run.matrix = dice_matrix(g);
      break;
    case Method::ppr: {
      auto res = personalized_pagerank(g, params.ppr, threads);
      if (res.unconverged_seeds > 0) {
        run.warning = std::to_string(res.unconverged_seeds) +
                      " PPR seeds did not converge; last iterate used";
      }
      run.matrix = std::move(res.dissimilarity);
      break;
    }
    case Method::laplacian: {
      EmbeddingConfig cfg;
      cfg.dim = params.embed_dim.value_or(num_clusters.value_or(8));
      cfg.dim = std::clamp<std::size_t>(cfg.dim, 1, g.num_nodes() - 1);
      cfg.require_connected = !params.tolerate_disconnected;
      if (params.tolerate_disconnected && !is_connected(g))
        run.warning = "graph is disconnected; Laplacian embedding computed on all components";
      run.matrix = laplacian_dissimilarity(g, cfg);
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  run.seconds = std::round(std::chrono::duration<double>(t1 - t0).count() * 1e6) / 1e6;
  return run;
}

struct ClusterScores {
  double ari = 0.0;
  double nmi = 0.0;
  double ami = 0.0;
};

inline ClusterScores cluster_scores(const Partition& truth, const Partition& found) {
  return {ari(truth, found), nmi(truth, found), ami(truth, found)};
}

// ---------------------------------------------------------------------------
// Benchmark harness

struct BenchInstance {
  Graph graph;
  Partition truth;
};

struct BenchSetting {
  nlohmann::json params;  // e.g. {"p_intra": 0.1}
  std::function<BenchInstance(std::uint64_t seed)> make;
  std::function<void(WalkConfig&)> adjust_walk;  // optional
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<BenchSetting> settings;
  std::vector<Method> default_methods;
  bool cluster = true;
  std::vector<std::size_t> classify_ks;
};

struct BenchOptions {
  std::string preset;
  std::size_t reps = 50;
  std::uint64_t seed = 1;
  std::vector<Method> methods;  // empty: preset default
  WalkConfig walk;              // seed is replaced per repetition
  PprConfig ppr;
  std::optional<std::size_t> embed_dim;
  std::optional<std::size_t> k_clusters;
  std::size_t threads = 0;
  // Inputs for the data-driven presets.
  std::optional<FeatureTable> features;
  std::optional<Partition> labels;
  std::optional<Graph> graph;
  std::size_t subgraph_size = 100;
};

struct BenchRecord {
  std::size_t setting_index = 0;
  nlohmann::json setting;
  Method method = Method::topk;
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  WalkConfig walk;
  std::optional<ClusterScores> scores;
  std::map<std::size_t, double> balanced_accuracy;  // kNN k -> value
  double runtime_seconds = 0.0;
  std::string warning;
  std::string error;
};

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample sd; 0 for a single run
  double se = 0.0;  // sd / sqrt(count)
};

inline Summary summarize(const std::vector<double>& xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    s.se = s.sd / std::sqrt(static_cast<double>(xs.size()));
  }
  return s;
}

struct Aggregate {
  std::size_t setting_index = 0;
  nlohmann::json setting;
  Method method = Method::topk;
  std::size_t failures = 0;
  std::map<std::string, Summary> metrics;  // "ari", "balanced_accuracy_k5", "runtime_seconds", ...
};

struct BenchReport {
  nlohmann::json meta;
  std::vector<BenchRecord> records;
  std::vector<Aggregate> aggregates;

  // Aggregate for (setting_index, method), if present.
  const Aggregate* find(std::size_t setting_index, Method method) const {
    for (const auto& a : aggregates)
      if (a.setting_index == setting_index && a.method == method) return &a;
    return nullptr;
  }
};

inline std::vector<std::string> preset_names() {
  return {"fig1-intra",    "fig2-inter",     "fig3-lfr-mu",      "fig4a-walklen",
          "fig4b-numwalks", "fig5-scaling",  "fig6-knn-tabular", "fig7-subgraph-classify"};
}

namespace detail {

inline BenchSetting sbm_setting(double p_intra, double p_inter) {
  BenchSetting s;
  s.params = {{"model", "sbm"}, {"blocks", {10, 10, 10}}, {"p_intra", p_intra}, {"p_inter", p_inter}};
  s.make = [p_intra, p_inter](std::uint64_t seed) {
    SbmConfig cfg;
    cfg.block_sizes = {10, 10, 10};
    cfg.p_intra = p_intra;
    cfg.p_inter = p_inter;
    cfg.seed = seed;
    auto gen = sbm(cfg);
    return BenchInstance{std::move(gen.graph), std::move(gen.communities)};
  };
  return s;
}

inline LfrConfig lfr_base(std::size_t n, double mu) {
  LfrConfig cfg;
  cfg.n = n;
  cfg.avg_degree = 5.0;
  cfg.max_degree = 10;
  cfg.mu = mu;
  cfg.tau1 = 2.0;
  cfg.tau2 = 1.1;
  cfg.min_community = 5;
  cfg.max_community = 50;
  return cfg;
}

inline BenchSetting lfr_setting(std::size_t n, double mu) {
  BenchSetting s;
  s.params = {{"model", "lfr"}, {"n", n},         {"avg_degree", 5},      {"max_degree", 10},
              {"mu", mu},       {"tau1", 2.0},    {"tau2", 1.1},          {"min_community", 5},
              {"max_community", 50}};
  s.make = [n, mu](std::uint64_t seed) {
    auto cfg = lfr_base(n, mu);
    cfg.seed = seed;
    auto res = lfr(cfg);
    return BenchInstance{std::move(res.graph), std::move(res.communities)};
  };
  return s;
}

}  // namespace detail

// Figure configurations. The data-driven presets (fig6, fig7) read their
// inputs from `opts`.
inline Preset make_preset(const BenchOptions& opts) {
  using detail::lfr_setting;
  using detail::sbm_setting;
  const std::vector<Method> all{Method::topk, Method::jaccard, Method::dice, Method::ppr,
                                Method::laplacian};
  const std::vector<Method> no_laplacian{Method::topk, Method::jaccard, Method::dice, Method::ppr};
  Preset p;
  p.name = opts.preset;
  if (opts.preset == "fig1-intra") {
    p.description = "SBM, 3 blocks of 10, p_inter 0.05, p_intra 0.10..0.50";
    for (double pi : {0.10, 0.20, 0.30, 0.40, 0.50}) p.settings.push_back(sbm_setting(pi, 0.05));
    p.default_methods = all;
  } else if (opts.preset == "fig2-inter") {
    p.description = "SBM, 3 blocks of 10, p_intra 0.50, p_inter 0.01..0.30";
    for (double po : {0.01, 0.05, 0.10, 0.15, 0.20, 0.25, 0.30}) p.settings.push_back(sbm_setting(0.50, po));
    p.default_methods = all;
  } else if (opts.preset == "fig3-lfr-mu") {
    p.description = "LFR n=100, avg degree 5, max degree 10, tau1 2, tau2 1.1, communities 5..50";
    for (double mu : {0.03, 0.05, 0.10, 0.20, 0.30}) p.settings.push_back(lfr_setting(100, mu));
    p.default_methods = all;
  } else if (opts.preset == "fig4a-walklen") {
    p.description = "LFR n=100, mu 0.05; TopKGraphs walk length 5..100";
    for (std::size_t t : {5, 10, 25, 50, 100}) {
      auto s = lfr_setting(100, 0.05);
      s.params["walk_length"] = t;
      s.adjust_walk = [t](WalkConfig& w) { w.walk_length = t; };
      p.settings.push_back(std::move(s));
    }
    p.default_methods = {Method::topk};
  } else if (opts.preset == "fig4b-numwalks") {
    p.description = "SBM 3x10, p_intra 0.50, p_inter 0.05; TopKGraphs number of walks 5..200";
    for (std::size_t k : {5, 10, 25, 50, 100, 200}) {
      auto s = sbm_setting(0.50, 0.05);
      s.params["num_walks"] = k;
      s.adjust_walk = [k](WalkConfig& w) { w.num_walks = k; };
      p.settings.push_back(std::move(s));
    }
    p.default_methods = {Method::topk};
  } else if (opts.preset == "fig5-scaling") {
    p.description = "LFR mu 0.05, n 50..1000; affinity construction runtime";
    for (std::size_t n : {50, 100, 200, 400, 1000}) p.settings.push_back(lfr_setting(n, 0.05));
    p.default_methods = all;
  } else if (opts.preset == "fig6-knn-tabular") {
    if (!opts.features || !opts.labels) {
      throw std::invalid_argument("preset fig6-knn-tabular needs --features and --labels");
    }
    p.description = "kNN graphs (k 5, 7, 10) from standardized features";
    for (std::size_t k : {5, 7, 10}) {
      BenchSetting s;
      s.params = {{"model", "knn"}, {"k", k}, {"standardize", true}};
      auto graph = std::make_shared<Graph>(knn_graph(opts.features->values, k, true));
      auto truth = std::make_shared<Partition>(*opts.labels);
      s.make = [graph, truth](std::uint64_t) { return BenchInstance{*graph, *truth}; };
      p.settings.push_back(std::move(s));
    }
    p.default_methods = no_laplacian;
  } else if (opts.preset == "fig7-subgraph-classify") {
    if (!opts.graph || !opts.labels) {
      throw std::invalid_argument("preset fig7-subgraph-classify needs --edges and --labels");
    }
    p.description = "connected subgraphs sampled from the largest component; Ward + kNN (k 5, 7, 10)";
    auto lcc = std::make_shared<Subgraph>(largest_connected_component(*opts.graph));
    Partition lcc_labels;
    for (NodeId v : lcc->original_ids) lcc_labels.labels.push_back(opts.labels->labels.at(v));
    auto labels = std::make_shared<Partition>(std::move(lcc_labels));
    const std::size_t size = opts.subgraph_size;
    BenchSetting s;
    s.params = {{"model", "subgraph"}, {"size", size}, {"source_nodes", lcc->graph.num_nodes()}};
    s.make = [lcc, labels, size](std::uint64_t seed) {
      auto sub = sample_connected_subgraph(lcc->graph, size, seed);
      Partition truth;
      for (NodeId v : sub.original_ids) truth.labels.push_back(labels->labels[v]);
      return BenchInstance{std::move(sub.graph), canonical(truth)};
    };
    p.settings.push_back(std::move(s));
    p.default_methods = no_laplacian;
    p.classify_ks = {5, 7, 10};
  } else {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown preset '" + opts.preset + "'; available presets: " + list);
  }
  return p;
}

inline Aggregate aggregate_group(const std::vector<const BenchRecord*>& group) {
  Aggregate agg;
  agg.setting_index = group.front()->setting_index;
  agg.setting = group.front()->setting;
  agg.method = group.front()->method;
  std::map<std::string, std::vector<double>> values;
  for (const auto* r : group) {
    if (!r->error.empty()) {
      ++agg.failures;
      continue;
    }
    if (r->scores) {
      values["ari"].push_back(r->scores->ari);
      values["nmi"].push_back(r->scores->nmi);
      values["ami"].push_back(r->scores->ami);
    }
    for (const auto& [k, v] : r->balanced_accuracy)
      values["balanced_accuracy_k" + std::to_string(k)].push_back(v);
    values["runtime_seconds"].push_back(r->runtime_seconds);
  }
  for (const auto& [name, xs] : values) agg.metrics[name] = summarize(xs);
  return agg;
}

// Runs every (setting, repetition, method) combination. Repetition r uses
// seed_r = mix_seed(master, r); graphs and walks get separate sub-streams.
// Records come out ordered by (setting, method, rep).
inline BenchReport run_bench(const BenchOptions& opts) {
  if (opts.reps < 1) throw std::invalid_argument("bench: reps must be >= 1");
  opts.walk.validate();
  const Preset preset = make_preset(opts);
  const std::vector<Method> methods = opts.methods.empty() ? preset.default_methods : opts.methods;

  BenchReport report;
  report.meta = {
      {"type", "meta"},
      {"preset", preset.name},
      {"description", preset.description},
      {"reps", opts.reps},
      {"master_seed", opts.seed},
      {"seed_derivation", "seed_r = splitmix64(master ^ splitmix64(r))"},
      {"nmi_normalization", "arithmetic mean of entropies"},
      {"ami_normalization", "arithmetic mean of entropies"},
      {"std_error", "sample sd / sqrt(runs)"},
      {"omitted_methods", {"node2vec"}},
      {"omitted_note", "skip-gram embedding baselines are not implemented"},
      {"walk", {{"walk_length", opts.walk.walk_length}, {"num_walks", opts.walk.num_walks},
                {"epsilon", opts.walk.epsilon}}},
      {"ppr_restart_prob", opts.ppr.restart_prob},
      {"methods", [&] {
         nlohmann::json a = nlohmann::json::array();
         for (Method m : methods) a.push_back(std::string(to_string(m)));
         return a;
       }()},
  };

  const std::size_t num_settings = preset.settings.size();
  const std::size_t tasks = num_settings * opts.reps;
  std::vector<std::vector<BenchRecord>> per_task(tasks);
  const std::size_t outer = opts.threads == 0 ? default_thread_count() : opts.threads;

  parallel_for(
      tasks,
      [&](std::size_t task) {
        const std::size_t si = task / opts.reps;
        const std::size_t rep = task % opts.reps;
        const BenchSetting& setting = preset.settings[si];
        const std::uint64_t seed_r = mix_seed(opts.seed, rep);

        WalkConfig walk = opts.walk;
        if (setting.adjust_walk) setting.adjust_walk(walk);
        walk.seed = mix_seed(seed_r, 2);

        auto base_record = [&](Method m) {
          BenchRecord r;
          r.setting_index = si;
          r.setting = setting.params;
          r.method = m;
          r.rep = rep;
          r.seed = seed_r;
          r.walk = walk;
          return r;
        };

        auto& out = per_task[task];
        std::optional<BenchInstance> instance;
        try {
          instance = setting.make(mix_seed(seed_r, 1));
        } catch (const std::exception& e) {
          for (Method m : methods) {
            auto r = base_record(m);
            r.error = std::string("instance generation failed: ") + e.what();
            out.push_back(std::move(r));
          }
          return;
        }
        const std::size_t num_classes = instance->truth.num_classes();
        const std::size_t k_clusters = opts.k_clusters.value_or(num_classes);

        MethodParams params;
        params.walk = walk;
        params.ppr = opts.ppr;
        params.embed_dim = opts.embed_dim;
        params.tolerate_disconnected = true;

        for (Method m : methods) {
          auto r = base_record(m);
          try {
            const auto run = compute_affinity(instance->graph, m, params, num_classes, outer > 1 ? 1 : 0);
            r.runtime_seconds = run.seconds;
            r.warning = run.warning;
            const Matrix& d = run.matrix.values();
            if (preset.cluster) {
              const auto found = ward_cluster(d, std::min(k_clusters, d.rows()));
              r.scores = cluster_scores(instance->truth, found);
            }
            for (std::size_t k : preset.classify_ks) {
              if (k >= d.rows() || num_classes < 2) continue;
              const auto pred = knn_classify(d, instance->truth, k);
              r.balanced_accuracy[k] = balanced_accuracy(instance->truth, pred);
            }
          } catch (const std::exception& e) {
            r.error = e.what();
          }
          out.push_back(std::move(r));
        }
      },
      outer);

  for (auto& group : per_task)
    for (auto& r : group) report.records.push_back(std::move(r));
  std::stable_sort(report.records.begin(), report.records.end(),
                   [&](const BenchRecord& a, const BenchRecord& b) {
                     const auto ma = std::find(methods.begin(), methods.end(), a.method) - methods.begin();
                     const auto mb = std::find(methods.begin(), methods.end(), b.method) - methods.begin();
                     return std::tie(a.setting_index, ma, a.rep) < std::tie(b.setting_index, mb, b.rep);
                   });

  for (std::size_t si = 0; si < num_settings; ++si) {
    for (Method m : methods) {
      std::vector<const BenchRecord*> group;
      for (const auto& r : report.records)
        if (r.setting_index == si && r.method == m) group.push_back(&r);
      if (!group.empty()) report.aggregates.push_back(aggregate_group(group));
    }
  }
  return report;
}

inline nlohmann::json to_json(const BenchRecord& r) {
  nlohmann::json j = {
      {"type", "run"},
      {"method", std::string(to_string(r.method))},
      {"setting", r.setting},
      {"rep", r.rep},
      {"seed", r.seed},
      {"walk", {{"walk_length", r.walk.walk_length}, {"num_walks", r.walk.num_walks},
                {"epsilon", r.walk.epsilon}, {"seed", r.walk.seed}}},
      {"runtime_seconds", r.runtime_seconds},
  };
  if (r.scores) {
    j["ari"] = r.scores->ari;
    j["nmi"] = r.scores->nmi;
    j["ami"] = r.scores->ami;
  }
  if (!r.balanced_accuracy.empty()) {
    nlohmann::json ba = nlohmann::json::object();
    for (const auto& [k, v] : r.balanced_accuracy) ba[std::to_string(k)] = v;
    j["balanced_accuracy"] = ba;
  }
  if (!r.warning.empty()) j["warning"] = r.warning;
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline nlohmann::json to_json(const Aggregate& a) {
  nlohmann::json j = {
      {"type", "aggregate"},
      {"method", std::string(to_string(a.method))},
      {"setting", a.setting},
      {"failures", a.failures},
  };
  for (const auto& [name, s] : a.metrics) {
    j[name] = {{"n", s.count}, {"mean", s.mean}, {"sd", s.sd}, {"se", s.se}};
  }
  return j;
}

// Line-delimited JSON: one meta line, one line per run, one per aggregate.
inline void write_report(std::ostream& out, const BenchReport& report) {
  out << report.meta.dump() << '\n';
  for (const auto& r : report.records) out << to_json(r).dump() << '\n';
  for (const auto& a : report.aggregates) out << to_json(a).dump() << '\n';
}

}  // namespace topk
