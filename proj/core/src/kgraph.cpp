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

#include "graphix/kgraph.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "graphix/binary_io.hpp"
#include "graphix/digest.hpp"
#include "json.hpp"

namespace graphix {

namespace {

constexpr std::string_view kBundleMagic = "GRAPHIXG";

bool same_kind(RelationKind r) {
  const auto [a, b] = relation_endpoints(r);
  return a == b;
}

// Union-find over dense ids.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;  // root is always the smallest member
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Components {
  std::vector<std::size_t> root;      // per node, meaningful only for `present` nodes
  std::vector<char> present;
  std::size_t count = 0;
  std::size_t largest_root = 0;
  std::size_t largest_size = 0;
};

Components components_of(std::size_t n, const std::vector<const std::vector<NodePair>*>& edge_sets) {
  DisjointSets ds(n);
  Components c;
  c.present.assign(n, 0);
  for (const auto* pairs : edge_sets) {
    for (const auto& p : *pairs) {
      c.present[p.first] = c.present[p.second] = 1;
      ds.unite(p.first, p.second);
    }
  }
  c.root.assign(n, 0);
  std::vector<std::size_t> size(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!c.present[i]) continue;
    c.root[i] = ds.find(i);
    if (size[c.root[i]]++ == 0) ++c.count;
  }
  // Ties resolve to the component holding the smallest node id.
  for (std::size_t r = 0; r < n; ++r) {
    if (size[r] > c.largest_size) {
      c.largest_size = size[r];
      c.largest_root = r;
    }
  }
  return c;
}

std::vector<NodePair> restrict_to_largest(std::size_t n, const std::vector<NodePair>& pairs) {
  const auto c = components_of(n, {&pairs});
  std::vector<NodePair> kept;
  for (const auto& p : pairs) {
    if (c.root[p.first] == c.largest_root) kept.push_back(p);
  }
  return kept;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Disease: return "disease";
    case NodeKind::Drug: return "drug";
    case NodeKind::Gene: return "gene";
  }
  return "unknown";
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::DiseaseDisease: return "disease_disease";
    case RelationKind::DiseaseGene: return "disease_gene";
    case RelationKind::GeneGene: return "gene_gene";
    case RelationKind::GeneDrug: return "gene_drug";
    case RelationKind::DiseaseDrug: return "disease_drug";
    case RelationKind::SelfLoop: return "self_loop";
  }
  return "unknown";
}

NodeKind parse_node_kind(std::string_view s) {
  if (s == "disease") return NodeKind::Disease;
  if (s == "drug") return NodeKind::Drug;
  if (s == "gene" || s == "protein") return NodeKind::Gene;
  throw InputError("unknown node kind '" + std::string(s) + "'");
}

RelationKind parse_relation_kind(std::string_view s) {
  static const std::pair<std::string_view, RelationKind> kNames[] = {
      {"disease_disease", RelationKind::DiseaseDisease}, {"DiseaseDisease", RelationKind::DiseaseDisease},
      {"disease_gene", RelationKind::DiseaseGene},       {"DiseaseGene", RelationKind::DiseaseGene},
      {"gene_gene", RelationKind::GeneGene},             {"GeneGene", RelationKind::GeneGene},
      {"gene_drug", RelationKind::GeneDrug},             {"GeneDrug", RelationKind::GeneDrug},
      {"disease_drug", RelationKind::DiseaseDrug},       {"DiseaseDrug", RelationKind::DiseaseDrug},
      {"self_loop", RelationKind::SelfLoop},             {"SelfLoop", RelationKind::SelfLoop},
  };
  for (const auto& [name, kind] : kNames) {
    if (name == s) return kind;
  }
  throw InputError("unknown relation '" + std::string(s) + "'");
}

std::pair<NodeKind, NodeKind> relation_endpoints(RelationKind kind) {
  switch (kind) {
    case RelationKind::DiseaseDisease: return {NodeKind::Disease, NodeKind::Disease};
    case RelationKind::DiseaseGene: return {NodeKind::Disease, NodeKind::Gene};
    case RelationKind::GeneGene: return {NodeKind::Gene, NodeKind::Gene};
    case RelationKind::GeneDrug: return {NodeKind::Gene, NodeKind::Drug};
    case RelationKind::DiseaseDrug: return {NodeKind::Disease, NodeKind::Drug};
    case RelationKind::SelfLoop: break;
  }
  throw InputError("self_loop has no endpoint kinds");
}

std::string make_label(NodeKind kind, std::string_view name) {
  return std::string(to_string(kind)) + "::" + std::string(name);
}

std::string mesh_label(const MeshCode& code) { return "mesh::" + code.str(); }

std::optional<NodeKind> kind_of_label(std::string_view label) {
  const auto sep = label.find("::");
  if (sep == std::string_view::npos) return std::nullopt;
  const auto ns = label.substr(0, sep);
  if (ns == "mesh" || ns == "disease") return NodeKind::Disease;
  if (ns == "drug") return NodeKind::Drug;
  if (ns == "gene" || ns == "protein") return NodeKind::Gene;
  return std::nullopt;
}

std::string_view label_name(std::string_view label) {
  const auto sep = label.find("::");
  return sep == std::string_view::npos ? label : label.substr(sep + 2);
}

NodeId LabelTable::intern(NodeKind kind, const std::string& label) {
  if (const auto it = index_.find(label); it != index_.end()) {
    if (kinds_[it->second] != kind) {
      throw InputError("label '" + label + "' used with two node kinds");
    }
    return it->second;
  }
  const auto id = static_cast<NodeId>(labels_.size());
  labels_.push_back(label);
  kinds_.push_back(kind);
  index_.emplace(label, id);
  return id;
}

std::optional<NodeId> LabelTable::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<RawEdge> read_edge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read edge file " + path);
  std::vector<RawEdge> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(path, lineno, "expected 2 tab-separated fields");
    }
    RawEdge e{line.substr(0, tab), line.substr(tab + 1), lineno};
    if (e.source.empty() || e.target.empty()) throw ParseError(path, lineno, "empty label");
    rows.push_back(std::move(e));
  }
  if (rows.empty()) throw InputError("edge file " + path + " contains no edges");
  return rows;
}

EdgeList make_edge_list(RelationKind relation, std::vector<NodePair> pairs,
                        std::vector<std::string> warnings) {
  EdgeList list;
  list.relation = relation;
  list.warnings = std::move(warnings);
  const bool symmetric = same_kind(relation);
  std::size_t rejected = 0;
  for (auto& p : pairs) {
    if (p.first == p.second) {
      ++rejected;
      continue;
    }
    if (symmetric && p.second < p.first) std::swap(p.first, p.second);
    list.pairs.push_back(p);
  }
  if (rejected > 0 && list.warnings.empty()) {
    list.warnings.push_back(std::to_string(rejected) + " self-pair(s) rejected in " +
                            std::string(to_string(relation)));
  }
  const std::size_t before = list.pairs.size();
  std::sort(list.pairs.begin(), list.pairs.end());
  list.pairs.erase(std::unique(list.pairs.begin(), list.pairs.end()), list.pairs.end());
  list.duplicates = before - list.pairs.size();
  return list;
}

EdgeList parse_edge_file(const std::string& path, RelationKind relation, LabelTable& labels) {
  const auto [kind_a, kind_b] = relation_endpoints(relation);
  std::vector<NodePair> pairs;
  std::vector<std::string> warnings;
  for (const auto& row : read_edge_file(path)) {
    const NodeId a = labels.intern(kind_a, make_label(kind_a, row.source));
    const NodeId b = labels.intern(kind_b, make_label(kind_b, row.target));
    if (a == b) {
      warnings.push_back(path + ":" + std::to_string(row.line) + ": self-pair '" + row.source +
                         "' rejected");
    }
    pairs.push_back({a, b});
  }
  return make_edge_list(relation, std::move(pairs), std::move(warnings));
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  CsrMatrix m;
  m.n = n;
  m.indptr.resize(n + 1);
  m.indices.resize(n);
  m.values.assign(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) m.indptr[i] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < n; ++i) m.indices[i] = static_cast<NodeId>(i);
  return m;
}

CsrMatrix CsrMatrix::from_undirected(std::size_t n, std::span<const NodePair> pairs) {
  std::vector<std::vector<NodeId>> rows(n);
  for (const auto& p : pairs) {
    if (p.first >= n || p.second >= n) throw InputError("edge endpoint out of range");
    rows[p.first].push_back(p.second);
    rows[p.second].push_back(p.first);
  }
  CsrMatrix m;
  m.n = n;
  m.indptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    m.indptr[i + 1] = m.indptr[i] + static_cast<std::int64_t>(r.size());
    m.indices.insert(m.indices.end(), r.begin(), r.end());
  }
  m.values.assign(m.indices.size(), 1.0);
  return m;
}

std::span<const NodeId> CsrMatrix::row_indices(std::size_t row) const {
  const auto b = static_cast<std::size_t>(indptr[row]);
  const auto e = static_cast<std::size_t>(indptr[row + 1]);
  return {indices.data() + b, e - b};
}

std::span<const double> CsrMatrix::row_values(std::size_t row) const {
  const auto b = static_cast<std::size_t>(indptr[row]);
  const auto e = static_cast<std::size_t>(indptr[row + 1]);
  return {values.data() + b, e - b};
}

double CsrMatrix::at(std::size_t row, std::size_t col) const {
  const auto idx = row_indices(row);
  const auto it = std::lower_bound(idx.begin(), idx.end(), static_cast<NodeId>(col));
  if (it == idx.end() || *it != col) return 0.0;
  return row_values(row)[static_cast<std::size_t>(it - idx.begin())];
}

Matrix CsrMatrix::to_dense() const {
  Matrix d = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = row_indices(i);
    const auto val = row_values(i);
    for (std::size_t k = 0; k < idx.size(); ++k) d(i, idx[k]) = val[k];
  }
  return d;
}

Matrix CsrMatrix::multiply(const Matrix& x) const {
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  multiply_add(x, out);
  return out;
}

void CsrMatrix::multiply_add(const Matrix& x, Matrix& out) const {
  if (static_cast<std::size_t>(x.rows()) != n || out.rows() != x.rows() || out.cols() != x.cols()) {
    throw Error("adjacency product: dimension mismatch (" + std::to_string(n) + " nodes, " +
                std::to_string(x.rows()) + " rows)");
  }
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto idx = row_indices(i);
      const auto val = row_values(i);
      for (std::size_t k = 0; k < idx.size(); ++k) {
        out.row(static_cast<Eigen::Index>(i)) += val[k] * x.row(idx[k]);
      }
    }
  });
}

bool KnowledgeGraph::has_relation(RelationKind kind) const {
  return std::any_of(relations.begin(), relations.end(),
                     [kind](const RelationAdjacency& r) { return r.kind == kind; });
}

const CsrMatrix& KnowledgeGraph::adjacency(RelationKind kind) const {
  for (const auto& r : relations) {
    if (r.kind == kind) return r.adjacency;
  }
  throw InputError("relation " + std::string(to_string(kind)) + " not in graph");
}

std::vector<NodeId> KnowledgeGraph::nodes_of_kind(NodeKind kind) const {
  std::vector<NodeId> out;
  for (NodeId i = 0; i < n_nodes(); ++i) {
    if (labels.kind(i) == kind) out.push_back(i);
  }
  return out;
}

std::vector<NodeId> KnowledgeGraph::neighbors(NodeId node) const {
  std::vector<NodeId> out;
  for (const auto& r : relations) {
    if (r.kind == RelationKind::SelfLoop) continue;
    const auto idx = r.adjacency.row_indices(node);
    out.insert(out.end(), idx.begin(), idx.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

KnowledgeGraph KnowledgeGraph::with_normalized_adjacency() const {
  KnowledgeGraph g = *this;
  for (auto& r : g.relations) {
    if (r.kind == RelationKind::SelfLoop) continue;
    auto& a = r.adjacency;
    std::vector<double> inv_sqrt(a.n, 0.0);
    for (std::size_t i = 0; i < a.n; ++i) {
      double deg = 0.0;
      for (double v : a.row_values(i)) deg += v;
      inv_sqrt[i] = deg > 0.0 ? 1.0 / std::sqrt(deg) : 0.0;
    }
    for (std::size_t i = 0; i < a.n; ++i) {
      for (auto k = a.indptr[i]; k < a.indptr[i + 1]; ++k) {
        const auto kk = static_cast<std::size_t>(k);
        a.values[kk] *= inv_sqrt[i] * inv_sqrt[a.indices[kk]];
      }
    }
  }
  return g;
}

std::string KnowledgeGraph::serialize() const {
  BinaryWriter w;
  w.bytes(kBundleMagic);
  w.u32(kGraphBundleVersion);
  w.u8(static_cast<std::uint8_t>(target));
  w.u64(n_nodes());
  for (NodeId i = 0; i < n_nodes(); ++i) {
    w.u8(static_cast<std::uint8_t>(labels.kind(i)));
    w.str(labels.label(i));
  }
  w.u64(relations.size());
  for (const auto& r : relations) {
    w.u8(static_cast<std::uint8_t>(r.kind));
    w.u64(r.adjacency.nnz());
    for (auto p : r.adjacency.indptr) w.i64(p);
    for (auto c : r.adjacency.indices) w.u32(c);
    for (auto v : r.adjacency.values) w.f64(v);
  }
  w.u64(positives.size());
  for (const auto& p : positives) {
    w.u32(p.first);
    w.u32(p.second);
  }
  w.u64(disease_groups.size());
  for (const auto& [name, members] : disease_groups) {
    w.str(name);
    w.u64(members.size());
    for (const auto& m : members) w.str(m);
  }
  return w.buffer();
}

std::string KnowledgeGraph::content_hash() const { return sha256_hex(serialize()); }

KnowledgeGraph KnowledgeGraph::deserialize(std::string bytes, const std::string& source) {
  BinaryReader r(std::move(bytes), source);
  if (r.bytes(kBundleMagic.size()) != kBundleMagic) throw InputError(source + ": not a graph bundle");
  if (const auto v = r.u32(); v != kGraphBundleVersion) {
    throw InputError(source + ": unsupported graph bundle version " + std::to_string(v));
  }
  KnowledgeGraph g;
  const auto target = r.u8();
  if (target > static_cast<std::uint8_t>(RelationKind::DiseaseDrug)) {
    throw InputError(source + ": invalid target relation");
  }
  g.target = static_cast<RelationKind>(target);
  const auto n = r.u64();
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto kind = r.u8();
    if (kind > static_cast<std::uint8_t>(NodeKind::Gene)) throw InputError(source + ": invalid node kind");
    g.labels.intern(static_cast<NodeKind>(kind), r.str());
  }
  if (g.labels.size() != n) throw InputError(source + ": duplicate labels");
  const auto n_rel = r.u64();
  for (std::uint64_t k = 0; k < n_rel; ++k) {
    RelationAdjacency rel;
    const auto kind = r.u8();
    if (kind > static_cast<std::uint8_t>(RelationKind::SelfLoop)) {
      throw InputError(source + ": invalid relation kind");
    }
    rel.kind = static_cast<RelationKind>(kind);
    const auto nnz = r.u64();
    auto& a = rel.adjacency;
    a.n = n;
    a.indptr.resize(n + 1);
    for (auto& p : a.indptr) p = r.i64();
    if (a.indptr.front() != 0 || static_cast<std::uint64_t>(a.indptr.back()) != nnz) {
      throw InputError(source + ": corrupt adjacency");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (a.indptr[i + 1] < a.indptr[i]) throw InputError(source + ": corrupt adjacency");
    }
    a.indices.resize(nnz);
    for (auto& c : a.indices) {
      c = r.u32();
      if (c >= n) throw InputError(source + ": adjacency index out of range");
    }
    a.values.resize(nnz);
    for (auto& v : a.values) v = r.f64();
    g.relations.push_back(std::move(rel));
  }
  const auto n_pos = r.u64();
  g.positives.resize(n_pos);
  for (auto& p : g.positives) {
    p.first = r.u32();
    p.second = r.u32();
    if (p.first >= n || p.second >= n) throw InputError(source + ": positive pair out of range");
  }
  const auto n_groups = r.u64();
  for (std::uint64_t k = 0; k < n_groups; ++k) {
    auto name = r.str();
    auto& members = g.disease_groups[name];
    const auto m = r.u64();
    for (std::uint64_t j = 0; j < m; ++j) members.push_back(r.str());
  }
  if (!r.at_end()) throw InputError(source + ": trailing bytes in graph bundle");
  return g;
}

void save_graph_bundle(const KnowledgeGraph& graph, const std::string& path) {
  BinaryWriter w;
  w.bytes(graph.serialize());
  w.write_file(path);
}

KnowledgeGraph load_graph_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read graph bundle " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return KnowledgeGraph::deserialize(ss.str(), path);
}

std::optional<NodeId> resolve_label(const KnowledgeGraph& graph, std::string_view label) {
  if (auto id = graph.labels.find(label)) return id;
  if (label.find("::") != std::string_view::npos) return std::nullopt;
  std::optional<NodeId> found;
  for (NodeId i = 0; i < graph.n_nodes(); ++i) {
    if (label_name(graph.labels.label(i)) == label) {
      if (found) return std::nullopt;  // ambiguous
      found = i;
    }
  }
  return found;
}

std::string BuildReport::to_json() const {
  nlohmann::ordered_json j;
  j["positives"] = positives;
  j["relation_edges"] = relation_edges;
  j["node_kinds"] = node_kinds;
  j["duplicates"] = duplicates;
  j["input_nodes"] = input_nodes;
  j["dropped_nodes"] = dropped_nodes;
  j["dropped_positives"] = dropped_positives;
  j["components"] = components;
  auto skipped_json = nlohmann::ordered_json::array();
  for (const auto& s : skipped) skipped_json.push_back({{"entity", s.entity}, {"reason", s.reason}});
  j["skipped"] = std::move(skipped_json);
  j["graph_hash"] = graph_hash;
  return j.dump(2) + "\n";
}

AssembleResult assemble(const std::vector<EdgeList>& edge_lists, RelationKind target,
                        const LabelTable& labels, const AssembleOptions& options) {
  if (target == RelationKind::SelfLoop) throw InputError("self_loop cannot be the target relation");
  const std::size_t n = labels.size();
  BuildReport report;

  // Merge lists per relation, counting cross-file duplicates.
  std::map<RelationKind, std::vector<NodePair>> merged;
  bool has_target = false;
  for (const auto& list : edge_lists) {
    if (list.relation == RelationKind::SelfLoop) throw InputError("self_loop edges are implicit");
    has_target |= list.relation == target;
    auto& dst = merged[list.relation];
    dst.insert(dst.end(), list.pairs.begin(), list.pairs.end());
    report.duplicates[std::string(to_string(list.relation))] += list.duplicates;
  }
  if (!has_target) throw InputError("target relation " + std::string(to_string(target)) + " has no edge list");
  for (auto& [rel, pairs] : merged) {
    const auto before = pairs.size();
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    report.duplicates[std::string(to_string(rel))] += before - pairs.size();
    for (const auto& p : pairs) {
      if (p.first >= n || p.second >= n) throw InputError("edge endpoint outside label table");
    }
  }
  {
    std::vector<char> seen(n, 0);
    for (const auto& [rel, pairs] : merged) {
      for (const auto& p : pairs) seen[p.first] = seen[p.second] = 1;
    }
    report.input_nodes = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 1));
  }

  std::vector<const std::vector<NodePair>*> passing;
  std::map<RelationKind, std::vector<NodePair>> restricted;
  for (const auto& [rel, pairs] : merged) {
    if (rel == target) continue;
    restricted[rel] = options.component_mode == ComponentMode::PerRelation
                          ? restrict_to_largest(n, pairs)
                          : pairs;
  }
  for (const auto& [rel, pairs] : restricted) passing.push_back(&pairs);
  if (passing.empty()) throw InputError("no message-passing relation besides the target");

  const auto comps = components_of(n, passing);
  report.components = comps.count;
  if (comps.largest_size == 0) throw InputError("merged message-passing graph is empty");

  // Dense re-indexing of the surviving component, preserving intern order.
  std::vector<std::int64_t> remap(n, -1);
  KnowledgeGraph g;
  g.target = target;
  for (std::size_t i = 0; i < n; ++i) {
    if (comps.present[i] && comps.root[i] == comps.largest_root) {
      remap[i] = g.labels.intern(labels.kind(static_cast<NodeId>(i)), labels.label(static_cast<NodeId>(i)));
    }
  }
  const std::size_t kept = g.labels.size();
  report.dropped_nodes = report.input_nodes - kept;

  auto map_pair = [&](const NodePair& p) -> std::optional<NodePair> {
    if (remap[p.first] < 0 || remap[p.second] < 0) return std::nullopt;
    return NodePair{static_cast<NodeId>(remap[p.first]), static_cast<NodeId>(remap[p.second])};
  };

  for (const auto& [rel, pairs] : restricted) {
    std::vector<NodePair> local;
    for (const auto& p : pairs) {
      if (auto q = map_pair(p)) local.push_back(*q);
    }
    if (local.empty()) continue;
    report.relation_edges[std::string(to_string(rel))] = local.size();
    g.relations.push_back({rel, CsrMatrix::from_undirected(kept, local)});
  }
  g.relations.push_back({RelationKind::SelfLoop, CsrMatrix::identity(kept)});

  for (const auto& p : merged[target]) {
    if (auto q = map_pair(p)) {
      g.positives.push_back(*q);
    } else {
      ++report.dropped_positives;
    }
  }
  std::sort(g.positives.begin(), g.positives.end());
  if (g.positives.empty()) {
    throw InputError("all target pairs fall outside the largest connected component");
  }
  report.positives = g.positives.size();
  report.relation_edges[std::string(to_string(target))] = g.positives.size();
  for (auto kind : {NodeKind::Disease, NodeKind::Drug, NodeKind::Gene}) {
    report.node_kinds[std::string(to_string(kind))] = g.nodes_of_kind(kind).size();
  }
  report.graph_hash = g.content_hash();
  return {std::move(g), std::move(report)};
}

Matrix adjacency_matvec(const KnowledgeGraph& graph, RelationKind relation, const Matrix& x) {
  if (static_cast<std::size_t>(x.rows()) != graph.n_nodes()) {
    throw Error("adjacency_matvec: X has " + std::to_string(x.rows()) + " rows, graph has " +
                std::to_string(graph.n_nodes()) + " nodes");
  }
  if (relation == RelationKind::SelfLoop) return x;
  return graph.adjacency(relation).multiply(x);
}

namespace {

std::vector<std::string> manifest_paths(const nlohmann::json& value, const std::filesystem::path& base,
                                        const std::string& relation) {
  std::vector<std::string> out;
  auto add = [&](const nlohmann::json& v) {
    if (!v.is_string()) throw InputError("manifest: relation '" + relation + "' must list file paths");
    std::filesystem::path p = v.get<std::string>();
    if (p.is_relative()) p = base / p;
    out.push_back(p.string());
  };
  if (value.is_array()) {
    for (const auto& v : value) add(v);
  } else {
    add(value);
  }
  return out;
}

}  // namespace

AssembleResult build_from_manifest(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw InputError("cannot read manifest " + manifest_path);
  nlohmann::json m;
  try {
    m = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("manifest " + manifest_path + ": " + e.what());
  }
  const auto base = std::filesystem::path(manifest_path).parent_path();
  if (!m.contains("target") || !m["target"].is_string()) throw InputError("manifest: missing \"target\"");
  if (!m.contains("relations") || !m["relations"].is_object()) {
    throw InputError("manifest: missing \"relations\" object");
  }
  const RelationKind target = parse_relation_kind(m["target"].get<std::string>());

  std::optional<MeshMapping> mapping;
  if (m.contains("mesh_mapping")) {
    std::filesystem::path p = m["mesh_mapping"].get<std::string>();
    if (p.is_relative()) p = base / p;
    mapping = load_mesh_mapping(p.string());
  }
  const bool codes_given = m.value("diseases_are_tree_numbers", false);
  const bool mesh_mode = mapping.has_value() || codes_given;
  const bool tree_edges = mesh_mode && m.value("mesh_tree_edges", true);
  const bool prune = mesh_mode && m.value("prune_upward", true);
  AssembleOptions options;
  const auto mode = m.value("component_mode", std::string("merged"));
  if (mode == "per_relation") {
    options.component_mode = ComponentMode::PerRelation;
  } else if (mode != "merged") {
    throw InputError("manifest: component_mode must be \"merged\" or \"per_relation\"");
  }

  std::vector<std::pair<RelationKind, std::vector<std::string>>> sources;
  for (const auto& [name, value] : m["relations"].items()) {
    const auto rel = parse_relation_kind(name);
    if (rel == RelationKind::SelfLoop) throw InputError("manifest: self_loop is implicit");
    sources.emplace_back(rel, manifest_paths(value, base, name));
  }
  std::sort(sources.begin(), sources.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  LabelTable labels;
  std::vector<SkipRecord> skipped;
  std::set<std::string> skipped_seen;
  std::set<MeshCode> all_codes;
  std::map<std::string, std::set<std::string>> groups;

  // Labels for one endpoint; diseases may expand to several tree numbers.
  auto endpoint_labels = [&](NodeKind kind, const std::string& name) -> std::vector<std::pair<std::string, std::optional<MeshCode>>> {
    if (kind != NodeKind::Disease || !mesh_mode) return {{make_label(kind, name), std::nullopt}};
    std::set<MeshCode> codes;
    if (mapping) {
      std::vector<SkipRecord> local;
      codes = mesh_expand(name, *mapping, &local);
      for (auto& s : local) {
        if (skipped_seen.insert(s.entity).second) skipped.push_back(std::move(s));
      }
    } else {
      codes.insert(MeshCode(name));
    }
    std::vector<std::pair<std::string, std::optional<MeshCode>>> out;
    for (const auto& c : codes) {
      all_codes.insert(c);
      if (mapping) groups[name].insert(mesh_label(c));
      out.emplace_back(mesh_label(c), c);
    }
    return out;
  };

  std::vector<EdgeList> lists;
  for (const auto& [rel, paths] : sources) {
    const auto [kind_a, kind_b] = relation_endpoints(rel);
    std::vector<NodePair> pairs;
    std::vector<std::string> warnings;
    std::vector<DiseaseGeneEdge> dg_edges;
    for (const auto& path : paths) {
      std::vector<RawEdge> rows;
      try {
        rows = read_edge_file(path);
      } catch (const ParseError&) {
        throw;
      } catch (const InputError& e) {
        throw InputError(std::string(e.what()) + " (relation " + std::string(to_string(rel)) + ")");
      }
      for (const auto& row : rows) {
        std::vector<std::pair<std::string, std::optional<MeshCode>>> lhs, rhs;
        try {
          lhs = endpoint_labels(kind_a, row.source);
          rhs = endpoint_labels(kind_b, row.target);
        } catch (const ParseError&) {
          throw;
        } catch (const InputError& e) {
          throw ParseError(path, row.line, e.what());
        }
        for (const auto& [la, ca] : lhs) {
          for (const auto& [lb, cb] : rhs) {
            if (la == lb) {
              warnings.push_back(path + ":" + std::to_string(row.line) + ": self-pair '" + la + "' rejected");
              continue;
            }
            if (rel == RelationKind::DiseaseGene && prune) {
              dg_edges.push_back({*ca, lb});
              continue;
            }
            pairs.push_back({labels.intern(kind_a, la), labels.intern(kind_b, lb)});
          }
        }
      }
    }
    if (!dg_edges.empty()) {
      // Intern in file order so node ids do not depend on pruning.
      for (const auto& e : dg_edges) {
        labels.intern(NodeKind::Disease, mesh_label(e.disease));
        labels.intern(NodeKind::Gene, e.gene);
      }
      for (const auto& e : prune_upward_disease_gene(std::move(dg_edges))) {
        pairs.push_back({*labels.find(mesh_label(e.disease)), *labels.find(e.gene)});
      }
    }
    lists.push_back(make_edge_list(rel, std::move(pairs), std::move(warnings)));
  }

  if (tree_edges) {
    std::vector<NodePair> pairs;
    for (const auto& [child, parent] : mesh_tree_edges(all_codes)) {
      pairs.push_back({labels.intern(NodeKind::Disease, mesh_label(child)),
                       labels.intern(NodeKind::Disease, mesh_label(parent))});
    }
    if (!pairs.empty()) lists.push_back(make_edge_list(RelationKind::DiseaseDisease, std::move(pairs)));
  }

  auto result = assemble(lists, target, labels, options);
  for (const auto& [name, members] : groups) {
    std::vector<std::string> kept;
    for (const auto& l : members) {
      if (result.graph.labels.find(l)) kept.push_back(l);
    }
    if (!kept.empty()) result.graph.disease_groups[name] = std::move(kept);
  }
  result.report.skipped.insert(result.report.skipped.end(), skipped.begin(), skipped.end());
  for (const auto& list : lists) {
    for (const auto& w : list.warnings) result.report.skipped.push_back({w, "self-pair rejected"});
  }
  result.report.graph_hash = result.graph.content_hash();
  return result;
}

}  // namespace graphix
