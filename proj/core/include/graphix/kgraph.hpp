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

// Typed multi-relational knowledge graph: ingestion, assembly into per-relation
// sparse adjacency, largest-component restriction and binary bundles.

#ifndef GRAPHIX_KGRAPH_HPP_
#define GRAPHIX_KGRAPH_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "graphix/common.hpp"
#include "graphix/mesh.hpp"

namespace graphix {

inline constexpr std::uint32_t kGraphBundleVersion = 1;

/// Node type. Metadata for sampling and evaluation only; never a model feature.
enum class NodeKind : std::uint8_t { Disease = 0, Drug = 1, Gene = 2 };

enum class RelationKind : std::uint8_t {
  DiseaseDisease = 0,
  DiseaseGene = 1,
  GeneGene = 2,
  GeneDrug = 3,
  DiseaseDrug = 4,
  SelfLoop = 5,
};

inline constexpr std::array<RelationKind, 5> kAssociationRelations = {
    RelationKind::DiseaseDisease, RelationKind::DiseaseGene, RelationKind::GeneGene,
    RelationKind::GeneDrug, RelationKind::DiseaseDrug};

std::string_view to_string(NodeKind kind);
std::string_view to_string(RelationKind kind);
NodeKind parse_node_kind(std::string_view s);
/// Accepts snake_case ("disease_drug") and CamelCase ("DiseaseDrug").
RelationKind parse_relation_kind(std::string_view s);

/// Endpoint kinds of an association relation, in edge-file column order.
std::pair<NodeKind, NodeKind> relation_endpoints(RelationKind kind);

/// Canonical node label `namespace::name`. Diseases use "disease" (or "mesh"
/// for tree numbers), drugs "drug", genes "gene".
std::string make_label(NodeKind kind, std::string_view name);
std::string mesh_label(const MeshCode& code);
/// Kind implied by a label namespace; nullopt when the namespace is unknown.
std::optional<NodeKind> kind_of_label(std::string_view label);
/// Name part of a `namespace::name` label (the whole string if no namespace).
std::string_view label_name(std::string_view label);

/// Bijection between dense node ids and canonical labels.
class LabelTable {
 public:
  /// Returns the existing id for `label` or appends a new node.
  /// Throws InputError if the label exists with a different kind.
  NodeId intern(NodeKind kind, const std::string& label);
  std::optional<NodeId> find(std::string_view label) const;

  std::size_t size() const { return labels_.size(); }
  const std::string& label(NodeId id) const { return labels_.at(id); }
  NodeKind kind(NodeId id) const { return kinds_.at(id); }
  const std::vector<NodeKind>& kinds() const { return kinds_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
  std::vector<NodeKind> kinds_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Deduplicated edges of one relation. Same-kind relations store (min, max);
/// cross-kind relations store (first kind, second kind).
struct EdgeList {
  RelationKind relation = RelationKind::GeneGene;
  std::vector<NodePair> pairs;
  std::size_t duplicates = 0;
  std::vector<std::string> warnings;
};

/// One parsed `source<TAB>target` row.
struct RawEdge {
  std::string source;
  std::string target;
  std::size_t line = 0;
};

/// Reads a tab-separated two-column edge file. `#` lines and blank lines are
/// skipped. Throws ParseError on wrong field counts and InputError when empty.
std::vector<RawEdge> read_edge_file(const std::string& path);

/// Normalizes, deduplicates and validates pairs for `relation`. Self-pairs are
/// rejected with a warning.
EdgeList make_edge_list(RelationKind relation, std::vector<NodePair> pairs,
                        std::vector<std::string> warnings = {});

/// Reads an edge file and interns its labels with the relation's endpoint kinds.
EdgeList parse_edge_file(const std::string& path, RelationKind relation, LabelTable& labels);

/// Square compressed-sparse-row matrix.
struct CsrMatrix {
  std::size_t n = 0;
  std::vector<std::int64_t> indptr{0};
  std::vector<NodeId> indices;
  std::vector<double> values;

  static CsrMatrix identity(std::size_t n);
  /// Symmetric 0/1 matrix with both (a,b) and (b,a) for each pair.
  static CsrMatrix from_undirected(std::size_t n, std::span<const NodePair> pairs);

  std::size_t nnz() const { return indices.size(); }
  std::span<const NodeId> row_indices(std::size_t row) const;
  std::span<const double> row_values(std::size_t row) const;
  /// Entry (row, col), 0 when absent.
  double at(std::size_t row, std::size_t col) const;
  Matrix to_dense() const;

  /// this * x, rows computed in parallel.
  Matrix multiply(const Matrix& x) const;
  /// out += this * x.
  void multiply_add(const Matrix& x, Matrix& out) const;
};

struct RelationAdjacency {
  RelationKind kind;
  CsrMatrix adjacency;
};

/// Immutable after assembly. Target-relation edges live only in `positives`.
struct KnowledgeGraph {
  LabelTable labels;
  RelationKind target = RelationKind::DiseaseDrug;
  /// Message-passing relations ordered by RelationKind, SelfLoop last.
  std::vector<RelationAdjacency> relations;
  /// Known target-relation pairs oriented as relation_endpoints(target).
  std::vector<NodePair> positives;
  /// Disease label -> canonical node labels of its tree numbers (MeSH builds).
  std::map<std::string, std::vector<std::string>> disease_groups;

  std::size_t n_nodes() const { return labels.size(); }
  NodeKind kind(NodeId id) const { return labels.kind(id); }
  std::size_t n_relations() const { return relations.size(); }
  bool has_relation(RelationKind kind) const;
  const CsrMatrix& adjacency(RelationKind kind) const;
  std::vector<NodeId> nodes_of_kind(NodeKind kind) const;
  /// Distinct neighbors over all message-passing relations except SelfLoop, sorted.
  std::vector<NodeId> neighbors(NodeId node) const;

  /// Copy whose association adjacencies are scaled to D^-1/2 A D^-1/2.
  KnowledgeGraph with_normalized_adjacency() const;

  /// Canonical binary serialization (bundle format) and its SHA-256.
  std::string serialize() const;
  std::string content_hash() const;
  static KnowledgeGraph deserialize(std::string bytes, const std::string& source);
};

void save_graph_bundle(const KnowledgeGraph& graph, const std::string& path);
KnowledgeGraph load_graph_bundle(const std::string& path);

/// Resolves a canonical label, or a bare name when exactly one node carries it.
std::optional<NodeId> resolve_label(const KnowledgeGraph& graph, std::string_view label);

enum class ComponentMode { Merged, PerRelation };

struct AssembleOptions {
  ComponentMode component_mode = ComponentMode::Merged;
};

/// Node and edge counts of an assembled graph.
struct BuildReport {
  std::size_t positives = 0;
  std::map<std::string, std::size_t> relation_edges;
  std::map<std::string, std::size_t> node_kinds;
  std::map<std::string, std::size_t> duplicates;
  std::size_t input_nodes = 0;
  std::size_t dropped_nodes = 0;
  std::size_t dropped_positives = 0;
  std::size_t components = 0;
  std::vector<SkipRecord> skipped;
  std::string graph_hash;

  std::string to_json() const;
};

struct AssembleResult {
  KnowledgeGraph graph;
  BuildReport report;
};

/// Merges the non-target relations, keeps the largest connected component of
/// their union, adds SelfLoop and keeps target pairs with surviving endpoints.
AssembleResult assemble(const std::vector<EdgeList>& edge_lists, RelationKind target,
                        const LabelTable& labels, const AssembleOptions& options = {});

/// rows of A_r * x. SelfLoop returns x.
Matrix adjacency_matvec(const KnowledgeGraph& graph, RelationKind relation, const Matrix& x);

/// Builds a graph from a JSON manifest:
///   { "target": "disease_drug",
///     "relations": { "disease_gene": "dg.tsv" | ["a.tsv", ...], ... },
///     "mesh_mapping": "mesh.tsv",            optional
///     "diseases_are_tree_numbers": false,    optional
///     "mesh_tree_edges": true,               optional, MeSH builds only
///     "prune_upward": true,                  optional, MeSH builds only
///     "component_mode": "merged" }           or "per_relation"
/// Relative paths resolve against the manifest's directory.
AssembleResult build_from_manifest(const std::string& manifest_path);

}  // namespace graphix

#endif  // GRAPHIX_KGRAPH_HPP_
