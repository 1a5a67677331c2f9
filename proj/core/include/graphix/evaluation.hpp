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

// k-fold cross-validation of link prediction, score aggregation over MeSH
// tree numbers, and embedding export.

#ifndef GRAPHIX_EVALUATION_HPP_
#define GRAPHIX_EVALUATION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "graphix/checkpoint.hpp"
#include "graphix/kgraph.hpp"
#include "graphix/metrics.hpp"
#include "graphix/model.hpp"

namespace graphix {

/// Balanced random partition of positives into folds.
struct FoldPlan {
  std::size_t n_folds = 5;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignment;  // positive index -> fold

  std::vector<std::size_t> members(std::size_t fold) const;
  std::vector<std::size_t> sizes() const;
};

/// Fold sizes differ by at most one; lower folds take the remainder.
/// Throws InputError when n_folds < 2 or n_folds > n_positives.
FoldPlan make_folds(std::size_t n_positives, std::size_t n_folds, std::uint64_t seed);

struct FoldMetrics {
  std::size_t fold = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double roc_auc = 0.0;
  double pr_auc = 0.0;
};

struct MetricResult {
  std::vector<FoldMetrics> folds;
  MeanStd roc_auc;
  MeanStd pr_auc;

  /// "0.992±0.003" style cell, three decimals.
  static std::string format_cell(const MeanStd& m);
};

/// Per fold: train on the other folds' positives with fresh negatives, then
/// score the held-out positives against as many fresh negatives drawn with a
/// fold-derived seed. Held-out negatives are excluded from training sampling.
/// `positives` must match plan.assignment in length. Failures are rethrown
/// with the fold index.
MetricResult cross_validate(const KnowledgeGraph& graph, std::span<const NodePair> positives, ModelKind kind,
                            const ModelConfig& model_config, const TrainConfig& train_config,
                            const FoldPlan& plan);

/// Label-shuffle control: the right endpoints of the positives are permuted,
/// duplicates dropped.
std::vector<NodePair> shuffled_positives(const KnowledgeGraph& graph, std::uint64_t seed);

/// (left label, right label) -> score.
using LabeledScores = std::map<std::pair<std::string, std::string>, double>;

/// Mean score over each disease group's tree-number nodes, per partner drug.
/// A drug scored for any member must be scored for all members; a missing
/// score throws InputError naming the pair.
LabeledScores mesh_averaged_scores(const LabeledScores& tree_scores,
                                   const std::map<std::string, std::vector<std::string>>& groups);

enum class EmbeddingSource { Input, Output };

/// CSV: label,kind,f0..f{C-1}; one row per node, values printed with 17
/// significant digits.
std::string embeddings_csv(const KnowledgeGraph& graph, const Checkpoint& checkpoint,
                           EmbeddingSource source = EmbeddingSource::Input);
void export_embeddings(const KnowledgeGraph& graph, const Checkpoint& checkpoint, const std::string& path,
                       EmbeddingSource source = EmbeddingSource::Input);

/// Metrics report JSON: per-fold values, mean, std, config echo, graph hash.
std::string metrics_report_json(const MetricResult& result, const FoldPlan& plan, ModelKind kind,
                                const ModelConfig& model_config, const TrainConfig& train_config,
                                const std::string& graph_hash, bool shuffled_labels);

}  // namespace graphix

#endif  // GRAPHIX_EVALUATION_HPP_
