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

#include "graphix/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "graphix/digest.hpp"
#include "graphix/trainer.hpp"
#include "json.hpp"

namespace graphix {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::vector<std::size_t> FoldPlan::members(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::sizes() const {
  std::vector<std::size_t> out(n_folds, 0);
  for (auto f : assignment) ++out[f];
  return out;
}

FoldPlan make_folds(std::size_t n_positives, std::size_t n_folds, std::uint64_t seed) {
  if (n_folds < 2) throw InputError("cross-validation needs at least 2 folds");
  if (n_folds > n_positives) {
    throw InputError("cannot split " + std::to_string(n_positives) + " positives into " +
                     std::to_string(n_folds) + " folds");
  }
  FoldPlan plan;
  plan.n_folds = n_folds;
  plan.seed = seed;
  std::vector<std::size_t> order(n_positives);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  plan.assignment.resize(n_positives);
  for (std::size_t k = 0; k < order.size(); ++k) plan.assignment[order[k]] = k % n_folds;
  return plan;
}

std::string MetricResult::format_cell(const MeanStd& m) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f±%.3f", m.mean, m.stddev);
  return buf;
}

MetricResult cross_validate(const KnowledgeGraph& graph, std::span<const NodePair> positives, ModelKind kind,
                            const ModelConfig& model_config, const TrainConfig& train_config,
                            const FoldPlan& plan) {
  if (plan.assignment.size() != positives.size()) {
    throw InputError("fold plan covers " + std::to_string(plan.assignment.size()) + " positives, got " +
                     std::to_string(positives.size()));
  }
  const std::vector<NodePair> all(positives.begin(), positives.end());
  const PairSet known(graph.target, all);
  const NegativeSampler sampler(graph);

  MetricResult result;
  std::vector<double> rocs, prs;
  for (std::size_t fold = 0; fold < plan.n_folds; ++fold) {
    try {
      TrainingSet set;
      set.known = all;
      std::vector<NodePair> test_pos;
      for (std::size_t i = 0; i < all.size(); ++i) {
        (plan.assignment[i] == fold ? test_pos : set.positives).push_back(all[i]);
      }
      std::mt19937_64 eval_rng(mix_seed(plan.seed, fold));
      set.reserved = sampler.sample(known, test_pos.size(), eval_rng);

      ModelConfig fold_config = model_config;
      fold_config.seed = mix_seed(model_config.seed, 1000 + fold);
      const auto ck = train_model(kind, graph, fold_config, train_config, set);
      const PairScorer scorer(graph, ck);

      auto scores = scorer.score(test_pos);
      const auto neg_scores = scorer.score(set.reserved);
      std::vector<int> labels(scores.size(), 1);
      scores.insert(scores.end(), neg_scores.begin(), neg_scores.end());
      labels.resize(scores.size(), 0);

      FoldMetrics m;
      m.fold = fold;
      m.n_train = set.positives.size();
      m.n_test = test_pos.size();
      m.roc_auc = roc_auc(scores, labels);
      m.pr_auc = pr_auc(scores, labels);
      rocs.push_back(m.roc_auc);
      prs.push_back(m.pr_auc);
      result.folds.push_back(m);
    } catch (const InputError& e) {
      throw InputError("fold " + std::to_string(fold) + ": " + e.what());
    } catch (const NumericError& e) {
      throw NumericError("fold " + std::to_string(fold) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("fold " + std::to_string(fold) + ": " + e.what());
    }
  }
  result.roc_auc = mean_std(rocs);
  result.pr_auc = mean_std(prs);
  return result;
}

std::vector<NodePair> shuffled_positives(const KnowledgeGraph& graph, std::uint64_t seed) {
  std::vector<NodeId> right;
  for (const auto& p : graph.positives) right.push_back(p.second);
  std::mt19937_64 rng(seed);
  std::shuffle(right.begin(), right.end(), rng);
  const bool symmetric = relation_endpoints(graph.target).first == relation_endpoints(graph.target).second;
  std::set<NodePair> out;
  for (std::size_t k = 0; k < right.size(); ++k) {
    NodePair p{graph.positives[k].first, right[k]};
    if (symmetric) {
      if (p.first == p.second) continue;
      if (p.second < p.first) std::swap(p.first, p.second);
    }
    out.insert(p);
  }
  return {out.begin(), out.end()};
}

LabeledScores mesh_averaged_scores(const LabeledScores& tree_scores,
                                   const std::map<std::string, std::vector<std::string>>& groups) {
  std::map<std::string, std::set<std::string>> partners;  // tree label -> drugs
  for (const auto& [key, value] : tree_scores) partners[key.first].insert(key.second);

  LabeledScores out;
  for (const auto& [name, members] : groups) {
    if (members.empty()) throw InputError("disease group '" + name + "' has no tree numbers");
    std::set<std::string> drugs;
    for (const auto& m : members) {
      if (const auto it = partners.find(m); it != partners.end()) drugs.insert(it->second.begin(), it->second.end());
    }
    for (const auto& drug : drugs) {
      std::vector<double> values;
      for (const auto& m : members) {
        const auto it = tree_scores.find({m, drug});
        if (it == tree_scores.end()) {
          throw InputError("missing score for (" + m + ", " + drug + ") in group '" + name + "'");
        }
        values.push_back(it->second);
      }
      // Sorted summation keeps the mean independent of member order.
      std::sort(values.begin(), values.end());
      double sum = 0.0;
      for (double v : values) sum += v;
      out[{name, drug}] = sum / static_cast<double>(values.size());
    }
  }
  return out;
}

std::string embeddings_csv(const KnowledgeGraph& graph, const Checkpoint& checkpoint, EmbeddingSource source) {
  Matrix values;
  if (checkpoint.model == ModelKind::GraphIX) {
    values = source == EmbeddingSource::Input ? checkpoint.params.embeddings
                                              : Rgcn(graph, checkpoint.config).forward(checkpoint.params).output();
  } else {
    values = checkpoint.triplet.entities;
  }
  if (static_cast<std::size_t>(values.rows()) != graph.n_nodes()) {
    throw InputError("checkpoint does not match graph size");
  }
  std::string out = "label,kind";
  for (Eigen::Index c = 0; c < values.cols(); ++c) out += ",f" + std::to_string(c);
  out += "\n";
  char buf[40];
  for (NodeId i = 0; i < graph.n_nodes(); ++i) {
    const auto& label = graph.labels.label(i);
    if (label.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : label) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      out += quoted + "\"";
    } else {
      out += label;
    }
    out += ",";
    out += to_string(graph.kind(i));
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), ",%.17g", values(i, c));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

void export_embeddings(const KnowledgeGraph& graph, const Checkpoint& checkpoint, const std::string& path,
                       EmbeddingSource source) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << embeddings_csv(graph, checkpoint, source);
  if (!out) throw Error("write failed: " + path);
}

std::string metrics_report_json(const MetricResult& result, const FoldPlan& plan, ModelKind kind,
                                const ModelConfig& model_config, const TrainConfig& train_config,
                                const std::string& graph_hash, bool shuffled_labels) {
  nlohmann::ordered_json j;
  j["model"] = std::string(to_string(kind));
  j["n_folds"] = plan.n_folds;
  j["fold_seed"] = plan.seed;
  j["fold_sizes"] = plan.sizes();
  std::string assignment;
  for (auto f : plan.assignment) assignment += std::to_string(f) + ",";
  j["fold_plan_sha256"] = sha256_hex(assignment);
  j["shuffled_labels"] = shuffled_labels;
  auto folds = nlohmann::ordered_json::array();
  for (const auto& f : result.folds) {
    folds.push_back({{"fold", f.fold}, {"n_train", f.n_train}, {"n_test", f.n_test},
                     {"roc_auc", f.roc_auc}, {"pr_auc", f.pr_auc}});
  }
  j["folds"] = std::move(folds);
  j["roc_auc"] = {{"mean", result.roc_auc.mean}, {"std", result.roc_auc.stddev}};
  j["pr_auc"] = {{"mean", result.pr_auc.mean}, {"std", result.pr_auc.stddev}};
  j["table"] = {{"roc_auc", MetricResult::format_cell(result.roc_auc)},
                {"pr_auc", MetricResult::format_cell(result.pr_auc)}};
  j["config"] = nlohmann::ordered_json::parse(config_to_json(model_config, train_config));
  j["graph_hash"] = graph_hash;
  return j.dump(2) + "\n";
}

}  // namespace graphix
