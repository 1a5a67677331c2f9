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

// Explainability verification: for each (disease, drug, known targets)
// record, attribute the edge score to its receptive field and check whether
// a known target is the top-ranked gene.

#ifndef GRAPHIX_EXPLAIN_EVAL_HPP_
#define GRAPHIX_EXPLAIN_EVAL_HPP_

#include <optional>
#include <string>
#include <vector>

#include "graphix/checkpoint.hpp"
#include "graphix/kgraph.hpp"

namespace graphix {

/// One line of the record TSV: disease<TAB>drug<TAB>gene[,gene...].
struct ExplainRecord {
  std::string disease;
  std::string drug;
  std::vector<std::string> targets;
  std::size_t line = 0;
};

/// `#` comments and blank lines are skipped; an optional header whose first
/// field is "disease" is ignored.
std::vector<ExplainRecord> read_explain_records(const std::string& path);
std::vector<ExplainRecord> parse_explain_records(const std::string& text, const std::string& source);

enum class ThresholdMode { None, Median, Value };

struct ExplainOptions {
  int steps = 30;
  /// Records are kept only when the edge is predicted positive. Median means
  /// score > median score of the graph's training positives.
  ThresholdMode threshold_mode = ThresholdMode::Median;
  double threshold = 0.0;  // used by ThresholdMode::Value
};

struct EvalRecord {
  ExplainRecord source;
  NodeId disease = 0;
  NodeId drug = 0;
  std::vector<NodeId> known_targets;
  double score = 0.0;
  std::size_t n_candidates = 0;
  /// 1-based rank of each known target that is a candidate, ascending.
  std::vector<std::size_t> target_ranks;
  std::optional<NodeId> top_gene;
  std::size_t target_rank() const { return target_ranks.empty() ? 0 : target_ranks.front(); }
  bool hit_at_1() const { return !target_ranks.empty() && target_ranks.front() == 1; }
};

struct SkippedRecord {
  ExplainRecord source;
  std::string reason;
};

struct ExplainSummary {
  std::vector<EvalRecord> records;
  std::vector<SkippedRecord> skipped;
  double threshold = 0.0;  // effective score threshold; -inf when disabled
  int steps = 0;

  std::size_t hits() const;
  double accuracy() const;  // 0 when no records survive
  std::string to_json(const KnowledgeGraph& graph) const;
  /// disease, drug, target, n_candidates, rank, then a closing
  /// "total accuracy = h/t (p%)" line.
  std::string to_tsv() const;
};

ExplainSummary explainability_eval(const KnowledgeGraph& graph, const Checkpoint& checkpoint,
                                   const std::vector<ExplainRecord>& records, const ExplainOptions& options = {});

}  // namespace graphix

#endif  // GRAPHIX_EXPLAIN_EVAL_HPP_
