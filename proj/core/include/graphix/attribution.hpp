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

// Integrated-Gradients attribution of an edge score to the nodes in the
// edge's receptive field.
//
// For node i with trained features x_i and edge score F:
//
//   IG(x_i) = || x_i (.) (1/m) sum_{k=1..m} dF/dx_i |_{x_i <- (k/m) x_i} ||_2
//
// Only node i moves along the straight path from zero; every other node stays
// at its trained features. The default sum uses right endpoints k/m; the
// midpoint rule (k - 1/2)/m is available and converges as 1/m^2 instead of 1/m.

#ifndef GRAPHIX_ATTRIBUTION_HPP_
#define GRAPHIX_ATTRIBUTION_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graphix/common.hpp"
#include "graphix/kgraph.hpp"
#include "graphix/model.hpp"

namespace graphix {

enum class PathRule { Right, Midpoint };
std::string_view to_string(PathRule rule);
PathRule parse_path_rule(std::string_view s);

/// Path position of step k in 1..m.
inline double path_alpha(PathRule rule, int k, int steps) {
  return rule == PathRule::Right ? static_cast<double>(k) / steps : (k - 0.5) / steps;
}

struct AttributionRequest {
  NodePair edge;
  int steps = 30;
  int hop_limit = 0;  // 0 = the model's layer count; any other value must match it
  /// Force full forward/backward passes even when the one-layer local
  /// shortcut applies.
  bool full_graph = false;
  PathRule rule = PathRule::Right;
};

struct NodeContribution {
  NodeId node = 0;
  NodeKind kind = NodeKind::Gene;
  double ig = 0.0;
};

struct AttributionReport {
  NodePair edge;
  double score = 0.0;
  int steps = 0;
  int hop_limit = 0;
  PathRule rule = PathRule::Right;
  /// Ranked: ig descending, ties by ascending node id.
  std::vector<NodeContribution> contributions;

  /// Highest-ranked gene, if any gene is in the neighborhood.
  std::optional<NodeId> top_gene() const;
};

/// Nodes within `hops` of either endpoint over the message-passing relations,
/// endpoints included, sorted by id.
std::vector<NodeId> neighborhood(const KnowledgeGraph& graph, NodePair edge, int hops);

/// dF/dX for F = H_a . H_b, all nodes at the given parameters.
Matrix score_input_gradient(const Rgcn& model, const ModelParams& params, NodePair edge);

/// (1/m) sum_k dF/dx_node evaluated with that node's features scaled by
/// path_alpha(rule, k, m).
RowVector average_path_gradient(const Rgcn& model, const ModelParams& params, NodePair edge,
                                NodeId node, int steps, bool full_graph = false,
                                PathRule rule = PathRule::Right);

AttributionReport integrated_gradients(const Rgcn& model, const ModelParams& params,
                                       const AttributionRequest& request);

/// Gene contributions, ig descending, ties by ascending node id.
std::vector<std::pair<NodeId, double>> rank_proteins(const AttributionReport& report);

enum class ExportFormat { Dot, GraphML, Json };

ExportFormat parse_export_format(std::string_view s);

/// {edge: [label_i, label_j], score, steps, hop_limit,
///  rule, contributions: [{label, kind, ig}], top_gene}
std::string attribution_report_json(const KnowledgeGraph& graph, const AttributionReport& report);

/// Neighborhood-induced subgraph plus the predicted edge (dashed, predicted=true).
/// Node attributes: kind, label, ig, size = ig / max ig, top_gene.
std::string render_subgraph(const KnowledgeGraph& graph, const AttributionReport& report, ExportFormat format);

void export_subgraph(const KnowledgeGraph& graph, const AttributionReport& report, ExportFormat format,
                     const std::string& path);

}  // namespace graphix

#endif  // GRAPHIX_ATTRIBUTION_HPP_
