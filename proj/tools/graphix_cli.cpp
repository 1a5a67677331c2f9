/*
 * Copyright 2026 The GraphIX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// graphix command-line tool: build, train, predict, explain, evaluate,
// explain-eval, export-embeddings, synth, rerun.
//
// Exit codes: 0 success, 1 runtime or numeric failure, 2 usage or input error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphix/attribution.hpp"
#include "graphix/checkpoint.hpp"
#include "graphix/digest.hpp"
#include "graphix/evaluation.hpp"
#include "graphix/explain_eval.hpp"
#include "graphix/kgraph.hpp"
#include "graphix/mesh.hpp"
#include "graphix/synthetic.hpp"
#include "graphix/trainer.hpp"

#ifndef GRAPHIX_VERSION
#define GRAPHIX_VERSION "0.0.0"
#endif

namespace {

using json = nlohmann::ordered_json;
using namespace graphix;

bool g_quiet = false;

void log(const std::string& msg) {
  if (!g_quiet) std::cerr << "graphix: " << msg << "\n";
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << content;
  if (!out) throw Error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// SOURCE_DATE_EPOCH pins the timestamp for reproducible manifests.
std::string timestamp() {
  std::time_t t = std::time(nullptr);
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) t = static_cast<std::time_t>(std::atoll(env));
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json versions() {
  return {{"tool", GRAPHIX_VERSION}, {"graph_bundle", kGraphBundleVersion}, {"checkpoint", kCheckpointVersion}};
}

// One per command run; written next to the primary output.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::object();
  std::optional<std::uint64_t> seed;

  void input(const std::string& path) { inputs[path] = sha256_file(path); }
  void output(const std::string& path) { outputs[path] = sha256_file(path); }

  void write(const std::string& path) const {
    json j;
    j["command"] = command;
    j["argv"] = argv;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["seed"] = seed ? json(*seed) : json();
    j["threads"] = num_threads();
    j["version"] = versions();
    j["timestamp"] = timestamp();
    write_text(path, j.dump(2) + "\n");
  }
};

struct Globals {
  int threads = 0;
  bool force = false;
  std::string run_manifest;
};

std::string manifest_path(const Globals& g, const std::string& primary) {
  return g.run_manifest.empty() ? primary + ".run.json" : g.run_manifest;
}

KnowledgeGraph load_graph(const std::string& path, RunManifest& rm) {
  auto g = load_graph_bundle(path);
  rm.input(path);
  return g;
}

Checkpoint load_ck(const std::string& path, const KnowledgeGraph& graph, bool force, RunManifest& rm) {
  auto ck = load_checkpoint(path);
  rm.input(path);
  check_graph_hash(ck, graph, force);
  return ck;
}

NodeId resolve_or_throw(const KnowledgeGraph& g, const std::string& label) {
  const auto id = resolve_label(g, label);
  if (!id) throw InputError("unknown or ambiguous label '" + label + "'");
  return *id;
}

// ---------------------------------------------------------------- build
struct BuildArgs {
  std::string manifest, out, report;
};

void cmd_build(const BuildArgs& a, const Globals& g, RunManifest& rm) {
  auto result = build_from_manifest(a.manifest);
  rm.input(a.manifest);
  save_graph_bundle(result.graph, a.out);
  const auto report = a.report.empty() ? a.out + ".report.json" : a.report;
  write_text(report, result.report.to_json());
  rm.output(a.out);
  rm.output(report);
  rm.config = json::parse(read_text(a.manifest));
  for (const auto& s : result.report.skipped) log("skipped " + s.entity + ": " + s.reason);
  log("built graph with " + std::to_string(result.graph.n_nodes()) + " nodes, " +
      std::to_string(result.graph.positives.size()) + " positives");
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- synth
struct SynthArgs {
  SyntheticSpec spec;
  std::string out, truth, records;
};

void cmd_synth(const SynthArgs& a, const Globals& g, RunManifest& rm) {
  const auto bench = generate_synthetic(a.spec);
  save_graph_bundle(bench.graph, a.out);
  rm.output(a.out);
  const auto& labels = bench.graph.labels;
  if (!a.truth.empty()) {
    std::string t = "disease\tdrug\tmediator\tmediated\n";
    for (std::size_t k = 0; k < bench.truth.positives.size(); ++k) {
      const auto& p = bench.truth.positives[k];
      t += labels.label(p.first) + "\t" + labels.label(p.second) + "\t" + labels.label(bench.truth.mediator[k]) +
           "\t" + (bench.truth.mediated[k] ? "1" : "0") + "\n";
    }
    write_text(a.truth, t);
    rm.output(a.truth);
  }
  if (!a.records.empty()) {
    std::string t = "disease\tdrug\ttarget\n";
    for (std::size_t k = 0; k < bench.truth.positives.size(); ++k) {
      if (!bench.truth.mediated[k]) continue;
      const auto& p = bench.truth.positives[k];
      t += labels.label(p.first) + "\t" + labels.label(p.second) + "\t" + labels.label(bench.truth.mediator[k]) + "\n";
    }
    write_text(a.records, t);
    rm.output(a.records);
  }
  rm.seed = a.spec.seed;
  rm.config = {{"n_disease", a.spec.n_disease}, {"n_drug", a.spec.n_drug}, {"n_gene", a.spec.n_gene},
               {"mediator_fraction", a.spec.mediator_fraction}, {"noise_edges", a.spec.noise_edges},
               {"module_size", a.spec.module_size}};
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- shared run config
struct RunConfigArgs {
  std::string config;
  std::string model = "graphix";
  std::optional<std::uint64_t> seed;
  std::optional<int> epochs, embed_dim, layers;
  std::optional<double> lr;
  std::optional<std::size_t> batch_size;
  std::optional<std::string> loss_mode, optimizer;
  std::optional<bool> normalize;
};

void add_run_config_options(CLI::App* sub, RunConfigArgs& a) {
  sub->add_option("--config", a.config, "JSON run configuration");
  sub->add_option("--model", a.model, "graphix, transe or distmult")
      ->check(CLI::IsMember({"graphix", "transe", "distmult"}));
  sub->add_option("--seed", a.seed, "seed for initialization and sampling");
  sub->add_option("--epochs", a.epochs);
  sub->add_option("--lr", a.lr, "learning rate");
  sub->add_option("--embed-dim", a.embed_dim, "embedding and output dimension");
  sub->add_option("--layers", a.layers, "convolution layers");
  sub->add_option("--batch-size", a.batch_size, "0 = full batch");
  sub->add_option("--loss-mode", a.loss_mode, "per_pair or literal_sum");
  sub->add_option("--optimizer", a.optimizer, "adam or sgd");
  sub->add_flag("--normalize-adjacency,!--no-normalize-adjacency", a.normalize);
}

// flags > config file > defaults
std::pair<ModelConfig, TrainConfig> resolve_run_config(const RunConfigArgs& a, RunManifest& rm) {
  ModelConfig mc;
  TrainConfig tc;
  if (!a.config.empty()) {
    apply_config_json(read_text(a.config), mc, tc);
    rm.input(a.config);
  }
  if (a.seed) mc.seed = *a.seed;
  if (a.epochs) tc.epochs = *a.epochs;
  if (a.lr) tc.learning_rate = *a.lr;
  if (a.embed_dim) mc.embed_dim = mc.out_dim = *a.embed_dim;
  if (a.layers) mc.n_layers = *a.layers;
  if (a.batch_size) tc.batch_size = *a.batch_size;
  if (a.loss_mode) tc.loss_mode = parse_loss_mode(*a.loss_mode);
  if (a.optimizer) tc.optimizer = parse_optimizer_kind(*a.optimizer);
  if (a.normalize) mc.normalize_adjacency = *a.normalize;
  mc.validate();
  tc.validate();
  rm.config = json::parse(config_to_json(mc, tc));
  rm.config["model"] = a.model;
  rm.seed = mc.seed;
  return {mc, tc};
}

// ---------------------------------------------------------------- train
struct TrainArgs {
  std::string graph, out, loss_csv;
  RunConfigArgs run;
  int log_every = 10;
};

void cmd_train(const TrainArgs& a, const Globals& g, RunManifest& rm) {
  const auto graph = load_graph(a.graph, rm);
  if (!a.run.seed) log("no --seed given; using the configured seed (runs are reproducible only with a fixed seed)");
  const auto [mc, tc] = resolve_run_config(a.run, rm);
  const auto kind = parse_model_kind(a.run.model);
  TrainingSet set;
  set.positives = graph.positives;
  set.known = graph.positives;
  const auto observer = [&](int epoch, double loss) {
    if (a.log_every > 0 && (epoch % a.log_every == 0 || epoch == tc.epochs)) {
      log("epoch " + std::to_string(epoch) + " loss " + fmt17(loss));
    }
  };
  const auto ck = train_model(kind, graph, mc, tc, set, observer);
  save_checkpoint(ck, a.out);
  const auto csv = a.loss_csv.empty() ? a.out + ".loss.csv" : a.loss_csv;
  std::string t = "epoch,loss\n";
  for (std::size_t k = 0; k < ck.loss_history.size(); ++k) t += std::to_string(k + 1) + "," + fmt17(ck.loss_history[k]) + "\n";
  write_text(csv, t);
  rm.output(a.out);
  rm.output(csv);
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- predict
struct PredictArgs {
  std::string graph, checkpoint, out, pairs, exclude_nodes, skipped;
  bool all_novel = false, per_node = false, exclude_synonyms = false, mesh_average = false;
  std::size_t top = 10;
};

struct Row {
  std::string left, right;
  double score;
};

std::optional<std::string> first_level_of(const std::string& label) {
  if (label.rfind("mesh::", 0) != 0) return std::nullopt;
  return std::string(MeshCode(std::string(label_name(label))).first_level());
}

void cmd_predict(const PredictArgs& a, const Globals& g, RunManifest& rm) {
  const auto graph = load_graph(a.graph, rm);
  const auto ck = load_ck(a.checkpoint, graph, g.force, rm);
  const PairScorer scorer(graph, ck);
  const auto [left_kind, right_kind] = relation_endpoints(graph.target);
  const bool symmetric = left_kind == right_kind;
  rm.config = {{"mode", a.all_novel ? "all_novel" : "pairs"}, {"top", a.top}, {"per_node", a.per_node},
               {"exclude_mesh_synonyms", a.exclude_synonyms}, {"mesh_average", a.mesh_average}};

  std::set<NodeId> excluded;
  if (!a.exclude_nodes.empty()) {
    std::istringstream in(read_text(a.exclude_nodes));
    rm.input(a.exclude_nodes);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      if (const auto id = resolve_label(graph, line)) excluded.insert(*id);
      else log("exclude list: unknown label '" + line + "'");
    }
  }
  const PairSet known(graph.target, graph.positives);
  // drug -> first-level codes of diseases it is known for
  std::map<NodeId, std::set<std::string>> known_levels;
  if (a.exclude_synonyms) {
    for (const auto& p : graph.positives)
      if (const auto lvl = first_level_of(graph.labels.label(p.first))) known_levels[p.second].insert(*lvl);
  }
  const auto synonym = [&](NodeId left, NodeId right) {
    if (!a.exclude_synonyms) return false;
    const auto lvl = first_level_of(graph.labels.label(left));
    const auto it = known_levels.find(right);
    return lvl && it != known_levels.end() && it->second.count(*lvl) > 0;
  };

  // group name -> member node ids (mesh builds)
  const auto group_members = [&](const std::string& name) {
    std::vector<NodeId> out;
    for (const auto& m : graph.disease_groups.at(name))
      if (const auto id = graph.labels.find(m)) out.push_back(*id);
    return out;
  };
  const auto group_score = [&](const std::string& name, const std::vector<NodeId>& members, NodeId right) {
    LabeledScores s;
    std::vector<std::string> labels;
    for (auto m : members) {
      s[{graph.labels.label(m), graph.labels.label(right)}] = scorer(m, right);
      labels.push_back(graph.labels.label(m));
    }
    return mesh_averaged_scores(s, {{name, labels}}).at({name, graph.labels.label(right)});
  };

  std::vector<Row> rows;
  std::vector<std::string> skipped;
  if (!a.pairs.empty()) {
    rm.input(a.pairs);
    std::istringstream in(read_text(a.pairs));
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
        throw ParseError(a.pairs, number, "expected 2 tab-separated fields");
      }
      const auto l = line.substr(0, tab), r = line.substr(tab + 1);
      const auto right = resolve_label(graph, r);
      if (!right || graph.kind(*right) != right_kind) {
        skipped.push_back(l + "\t" + r + "\tunknown " + std::string(to_string(right_kind)) + " '" + r + "'");
        continue;
      }
      if (const auto left = resolve_label(graph, l); left && graph.kind(*left) == left_kind) {
        rows.push_back({graph.labels.label(*left), graph.labels.label(*right), scorer(*left, *right)});
      } else if (graph.disease_groups.count(l)) {
        const auto members = group_members(l);
        if (members.empty()) {
          skipped.push_back(l + "\t" + r + "\tno tree numbers of '" + l + "' in the graph");
          continue;
        }
        rows.push_back({l, graph.labels.label(*right), group_score(l, members, *right)});
      } else {
        skipped.push_back(l + "\t" + r + "\tunknown " + std::string(to_string(left_kind)) + " '" + l + "'");
      }
    }
  } else if (a.all_novel) {
    const auto rights = graph.nodes_of_kind(right_kind);
    const auto pick = [&](std::vector<Row>& cand) {
      const auto by_score = [](const Row& x, const Row& y) {
        return x.score > y.score || (x.score == y.score && (x.left < y.left || (x.left == y.left && x.right < y.right)));
      };
      const std::size_t k = std::min(a.top, cand.size());
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end(), by_score);
      cand.resize(k);
    };
    std::vector<std::pair<std::string, std::vector<NodeId>>> lefts;  // display label -> scored nodes
    if (a.mesh_average) {
      if (graph.disease_groups.empty()) throw InputError("--mesh-average needs a graph built with a MeSH mapping");
      for (const auto& [name, members] : graph.disease_groups) {
        auto ids = group_members(name);
        if (!ids.empty()) lefts.emplace_back(name, std::move(ids));
      }
    } else {
      for (NodeId l : graph.nodes_of_kind(left_kind)) lefts.push_back({graph.labels.label(l), {l}});
    }
    std::vector<Row> global;
    for (const auto& [name, members] : lefts) {
      if (std::any_of(members.begin(), members.end(), [&](NodeId m) { return excluded.count(m) > 0; })) continue;
      std::vector<Row> cand;
      for (NodeId r : rights) {
        if (excluded.count(r)) continue;
        bool skip = false;
        for (NodeId m : members) {
          if (m == r || (symmetric && r < m && members.size() == 1) || known.contains({m, r}) || synonym(m, r)) {
            skip = true;
            break;
          }
        }
        if (skip) continue;
        const double s = members.size() == 1 && !a.mesh_average ? scorer(members[0], r) : group_score(name, members, r);
        cand.push_back({name, graph.labels.label(r), s});
      }
      if (a.per_node) {
        pick(cand);
        rows.insert(rows.end(), cand.begin(), cand.end());
      } else {
        global.insert(global.end(), cand.begin(), cand.end());
        pick(global);  // keeps memory bounded
      }
    }
    if (!a.per_node) rows = std::move(global);
  } else {
    throw InputError("predict needs --pairs FILE or --all-novel");
  }

  std::string t = "left\tright\tscore\n";
  for (const auto& r : rows) t += r.left + "\t" + r.right + "\t" + fmt17(r.score) + "\n";
  write_text(a.out, t);
  rm.output(a.out);
  if (!skipped.empty()) log("skipped " + std::to_string(skipped.size()) + " pair(s); first: " + skipped.front());
  if (!a.skipped.empty()) {
    std::string st = "left\tright\treason\n";
    for (const auto& s : skipped) st += s + "\n";
    write_text(a.skipped, st);
    rm.output(a.skipped);
  }
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- explain
struct ExplainArgs {
  std::string graph, checkpoint, out, report, format = "json", rule = "right";
  std::vector<std::string> edge;
  int steps = 30;
  bool full_graph = false;
};

void cmd_explain(const ExplainArgs& a, const Globals& g, RunManifest& rm) {
  const auto graph = load_graph(a.graph, rm);
  const auto ck = load_ck(a.checkpoint, graph, g.force, rm);
  if (ck.model != ModelKind::GraphIX) throw InputError("explain needs a graphix checkpoint");
  if (a.edge.size() != 2) throw InputError("--edge takes two labels");
  const NodePair edge{resolve_or_throw(graph, a.edge[0]), resolve_or_throw(graph, a.edge[1])};
  const auto format = parse_export_format(a.format);
  AttributionRequest req;
  req.edge = edge;
  req.steps = a.steps;
  req.full_graph = a.full_graph;
  req.rule = parse_path_rule(a.rule);
  const Rgcn model(graph, ck.config);
  const auto report = integrated_gradients(model, ck.params, req);
  rm.config = {{"edge", a.edge}, {"steps", a.steps}, {"rule", a.rule}, {"format", a.format}};
  export_subgraph(graph, report, format, a.out);
  rm.output(a.out);
  const auto path = a.report.empty() ? a.out + ".report.json" : a.report;
  write_text(path, attribution_report_json(graph, report));
  rm.output(path);
  if (const auto top = report.top_gene()) log("top gene " + graph.labels.label(*top));
  else log("no gene in the receptive field");
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- evaluate
struct EvaluateArgs {
  std::string graph, out;
  RunConfigArgs run;
  std::size_t folds = 5;
  bool shuffle = false;
};

void cmd_evaluate(const EvaluateArgs& a, const Globals& g, RunManifest& rm) {
  const auto graph = load_graph(a.graph, rm);
  const auto [mc, tc] = resolve_run_config(a.run, rm);
  const auto kind = parse_model_kind(a.run.model);
  const auto positives = a.shuffle ? shuffled_positives(graph, mc.seed) : graph.positives;
  const auto plan = make_folds(positives.size(), a.folds, mc.seed);
  const auto result = cross_validate(graph, positives, kind, mc, tc, plan);
  write_text(a.out, metrics_report_json(result, plan, kind, mc, tc, graph.content_hash(), a.shuffle));
  rm.output(a.out);
  rm.config["folds"] = a.folds;
  rm.config["shuffle_labels"] = a.shuffle;
  std::cout << a.run.model << "\tROC-AUC " << MetricResult::format_cell(result.roc_auc) << "\tPR-AUC "
            << MetricResult::format_cell(result.pr_auc) << "\n";
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- explain-eval
struct ExplainEvalArgs {
  std::string graph, checkpoint, records, out, tsv, threshold = "median";
  int steps = 30;
};

void cmd_explain_eval(const ExplainEvalArgs& a, const Globals& g, RunManifest& rm) {
  const auto graph = load_graph(a.graph, rm);
  const auto ck = load_ck(a.checkpoint, graph, g.force, rm);
  const auto records = read_explain_records(a.records);
  rm.input(a.records);
  ExplainOptions opt;
  opt.steps = a.steps;
  if (a.threshold == "median") {
    opt.threshold_mode = ThresholdMode::Median;
  } else if (a.threshold == "none") {
    opt.threshold_mode = ThresholdMode::None;
  } else {
    opt.threshold_mode = ThresholdMode::Value;
    try {
      std::size_t used = 0;
      opt.threshold = std::stod(a.threshold, &used);
      if (used != a.threshold.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw InputError("--threshold must be median, none or a number");
    }
  }
  const auto summary = explainability_eval(graph, ck, records, opt);
  write_text(a.out, summary.to_json(graph));
  rm.output(a.out);
  const auto tsv = a.tsv.empty() ? a.out + ".tsv" : a.tsv;
  write_text(tsv, summary.to_tsv());
  rm.output(tsv);
  std::map<std::string, std::size_t> reasons;
  for (const auto& s : summary.skipped) ++reasons[s.reason.substr(0, s.reason.find(" ("))];
  for (const auto& [reason, count] : reasons) log("skipped " + std::to_string(count) + " record(s): " + reason);
  rm.config = {{"steps", a.steps}, {"threshold", a.threshold}};
  const auto table = summary.to_tsv();
  std::cout << table.substr(table.rfind("total accuracy"));
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- export-embeddings
struct ExportArgs {
  std::string graph, checkpoint, out, source = "input";
};

void cmd_export(const ExportArgs& a, const Globals& g, RunManifest& rm) {
  const auto graph = load_graph(a.graph, rm);
  const auto ck = load_ck(a.checkpoint, graph, g.force, rm);
  export_embeddings(graph, ck, a.out, a.source == "output" ? EmbeddingSource::Output : EmbeddingSource::Input);
  rm.output(a.out);
  rm.config = {{"source", a.source}};
  rm.write(manifest_path(g, a.out));
}

// ---------------------------------------------------------------- inspect
void cmd_inspect(const std::string& path) {
  const auto graph = load_graph_bundle(path);
  json j;
  j["nodes"] = graph.n_nodes();
  json kinds = json::object();
  for (auto k : {NodeKind::Disease, NodeKind::Drug, NodeKind::Gene})
    kinds[std::string(to_string(k))] = graph.nodes_of_kind(k).size();
  j["node_kinds"] = kinds;
  json rel = json::object();
  for (const auto& r : graph.relations) {
    if (r.kind == RelationKind::SelfLoop) continue;
    rel[std::string(to_string(r.kind))] = r.adjacency.nnz() / 2;  // stored in both directions
  }
  rel[std::string(to_string(graph.target))] = graph.positives.size();
  j["relation_edges"] = rel;
  j["target"] = std::string(to_string(graph.target));
  j["positives"] = graph.positives.size();
  j["disease_groups"] = graph.disease_groups.size();
  j["graph_hash"] = graph.content_hash();
  std::cout << j.dump(2) << "\n";
}

int run(std::vector<std::string> args);

// ---------------------------------------------------------------- rerun
int cmd_rerun(const std::string& path) {
  const auto j = json::parse(read_text(path));
  if (!j.contains("argv") || !j["argv"].is_array()) throw InputError(path + ": not a run manifest");
  auto argv = j["argv"].get<std::vector<std::string>>();
  if (!argv.empty() && argv.front() == "rerun") throw InputError(path + ": refusing to rerun a rerun");
  log("replaying: graphix " + [&] {
    std::string s;
    for (const auto& x : argv) s += (s.empty() ? "" : " ") + x;
    return s;
  }());
  return run(std::move(argv));
}

int run(std::vector<std::string> args) {
  CLI::App app{"GraphIX: explainable link prediction on biomedical knowledge graphs", "graphix"};
  app.require_subcommand(1);
  Globals g;
  bool version = false;
  app.add_option("--threads", g.threads, "worker threads (1 = determinism mode; default from GRAPHIX_THREADS)")
      ->check(CLI::PositiveNumber);
  app.add_flag("--force", g.force, "accept checkpoints trained on a different graph");
  app.add_flag("--quiet", g_quiet, "suppress progress logs");
  app.add_option("--run-manifest", g.run_manifest, "where to write the run manifest (default: <output>.run.json)");
  app.add_flag("--version", version, "print tool and format versions");
  app.require_subcommand(0, 1);

  BuildArgs build;
  auto* sb = app.add_subcommand("build", "assemble a graph bundle from a JSON manifest");
  sb->add_option("--manifest", build.manifest)->required();
  sb->add_option("--out", build.out, "graph bundle")->required();
  sb->add_option("--report", build.report, "build report JSON (default: <out>.report.json)");

  SynthArgs synth;
  auto* ss = app.add_subcommand("synth", "generate a synthetic planted-mediator graph");
  ss->add_option("--n-disease", synth.spec.n_disease);
  ss->add_option("--n-drug", synth.spec.n_drug);
  ss->add_option("--n-gene", synth.spec.n_gene);
  ss->add_option("--mediator-fraction", synth.spec.mediator_fraction);
  ss->add_option("--noise", synth.spec.noise_edges, "noise edges as a fraction of structural edges");
  ss->add_option("--module-size", synth.spec.module_size);
  ss->add_option("--seed", synth.spec.seed);
  ss->add_option("--out", synth.out)->required();
  ss->add_option("--truth", synth.truth, "TSV of positives with their mediators");
  ss->add_option("--records", synth.records, "explain-eval record TSV for mediated positives");

  TrainArgs train;
  auto* st = app.add_subcommand("train", "train a model on a graph bundle");
  st->add_option("--graph", train.graph)->required();
  st->add_option("--out", train.out, "checkpoint")->required();
  st->add_option("--loss-csv", train.loss_csv, "loss history (default: <out>.loss.csv)");
  st->add_option("--log-every", train.log_every, "epochs between progress lines (0 = silent)");
  add_run_config_options(st, train.run);

  PredictArgs predict;
  auto* sp = app.add_subcommand("predict", "score pairs or rank novel associations");
  sp->add_option("--graph", predict.graph)->required();
  sp->add_option("--checkpoint", predict.checkpoint)->required();
  sp->add_option("--out", predict.out, "ranked TSV")->required();
  auto* pairs = sp->add_option("--pairs", predict.pairs, "TSV of left<TAB>right labels");
  auto* novel = sp->add_flag("--all-novel", predict.all_novel, "enumerate all pairs outside the training positives");
  pairs->excludes(novel);
  sp->add_option("--top", predict.top, "rows to keep (per left node with --per-node)");
  sp->add_flag("--per-node", predict.per_node);
  sp->add_option("--exclude-nodes", predict.exclude_nodes, "file of labels to leave out");
  sp->add_flag("--exclude-mesh-synonyms", predict.exclude_synonyms,
               "drop pairs whose drug is known for a disease sharing the first MeSH level");
  sp->add_flag("--mesh-average", predict.mesh_average, "average tree-number scores per disease label");
  sp->add_option("--skipped", predict.skipped, "TSV of unresolved pairs");

  ExplainArgs explain;
  auto* se = app.add_subcommand("explain", "integrated-gradients attribution of one edge");
  se->add_option("--graph", explain.graph)->required();
  se->add_option("--checkpoint", explain.checkpoint)->required();
  se->add_option("--edge", explain.edge, "LEFT RIGHT labels")->required()->expected(2);
  se->add_option("--m,--steps", explain.steps, "Riemann steps")->check(CLI::PositiveNumber);
  se->add_option("--rule", explain.rule, "path sampling: right or midpoint")
      ->check(CLI::IsMember({"right", "midpoint"}));
  se->add_option("--format", explain.format)->check(CLI::IsMember({"dot", "graphml", "json"}));
  se->add_option("--out", explain.out, "export file")->required();
  se->add_option("--report", explain.report, "attribution report JSON (default: <out>.report.json)");
  se->add_flag("--full-graph", explain.full_graph, "use full passes instead of the one-layer shortcut");

  EvaluateArgs evaluate;
  auto* sv = app.add_subcommand("evaluate", "k-fold cross-validation");
  sv->add_option("--graph", evaluate.graph)->required();
  sv->add_option("--out", evaluate.out, "metrics report JSON")->required();
  sv->add_option("--folds", evaluate.folds)->check(CLI::Range(2, 1000));
  sv->add_flag("--shuffle-labels", evaluate.shuffle, "label-shuffle control");
  add_run_config_options(sv, evaluate.run);

  ExplainEvalArgs ee;
  auto* sx = app.add_subcommand("explain-eval", "top-1 target recovery over a record file");
  sx->add_option("--graph", ee.graph)->required();
  sx->add_option("--checkpoint", ee.checkpoint)->required();
  sx->add_option("--records", ee.records, "TSV disease<TAB>drug<TAB>gene[,gene]")->required();
  sx->add_option("--out", ee.out, "report JSON")->required();
  sx->add_option("--tsv", ee.tsv, "table TSV (default: <out>.tsv)");
  sx->add_option("--m,--steps", ee.steps)->check(CLI::PositiveNumber);
  sx->add_option("--threshold", ee.threshold, "median, none or a score value");

  ExportArgs exp;
  auto* sx2 = app.add_subcommand("export-embeddings", "write node features as CSV");
  sx2->add_option("--graph", exp.graph)->required();
  sx2->add_option("--checkpoint", exp.checkpoint)->required();
  sx2->add_option("--out", exp.out)->required();
  sx2->add_option("--source", exp.source, "input embeddings or output representations")
      ->check(CLI::IsMember({"input", "output"}));

  std::string inspect_path;
  auto* si = app.add_subcommand("inspect", "print a graph bundle summary as JSON");
  si->add_option("graph", inspect_path)->required();

  std::string rerun_path;
  auto* sr = app.add_subcommand("rerun", "replay the command recorded in a run manifest");
  sr->add_option("manifest", rerun_path)->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (version) {
    std::cout << "graphix " << GRAPHIX_VERSION << " (graph bundle format " << kGraphBundleVersion
              << ", checkpoint format " << kCheckpointVersion << ")\n";
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }
  if (g.threads > 0) set_num_threads(g.threads);

  RunManifest rm;
  rm.argv = args;
  auto* sub = app.get_subcommands().front();
  rm.command = sub->get_name();
  if (sub == sr) return cmd_rerun(rerun_path);
  if (sub == si) {
    cmd_inspect(inspect_path);
    return 0;
  }
  if (sub == sb) cmd_build(build, g, rm);
  else if (sub == ss) cmd_synth(synth, g, rm);
  else if (sub == st) cmd_train(train, g, rm);
  else if (sub == sp) cmd_predict(predict, g, rm);
  else if (sub == se) cmd_explain(explain, g, rm);
  else if (sub == sv) cmd_evaluate(evaluate, g, rm);
  else if (sub == sx) cmd_explain_eval(ee, g, rm);
  else if (sub == sx2) cmd_export(exp, g, rm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(std::vector<std::string>(argv + 1, argv + argc));
  } catch (const InputError& e) {
    std::cerr << "graphix: error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "graphix: error: " << e.what() << "\n";
    return 1;
  }
}
