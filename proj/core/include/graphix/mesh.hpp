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

// MeSH tree-number handling for disease normalization.

#ifndef GRAPHIX_MESH_HPP_
#define GRAPHIX_MESH_HPP_

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace graphix {

/// Dot-separated hierarchical disease code, e.g. "C04.557.337".
class MeshCode {
 public:
  /// Throws InputError on empty codes or empty segments.
  explicit MeshCode(std::string code);

  const std::string& str() const { return code_; }
  int depth() const;
  bool has_parent() const;
  /// Code with the last segment removed. Requires has_parent().
  MeshCode parent() const;
  /// First segment, e.g. "C04" for "C04.557.337".
  std::string_view first_level() const;
  /// True when this code is a strict prefix ancestor of `other`.
  bool is_ancestor_of(const MeshCode& other) const;

  friend bool operator==(const MeshCode&, const MeshCode&) = default;
  friend auto operator<=>(const MeshCode&, const MeshCode&) = default;

 private:
  std::string code_;
};

/// Disease label -> tree numbers, loaded from a `label<TAB>tree_number` file.
using MeshMapping = std::map<std::string, std::set<MeshCode>, std::less<>>;

MeshMapping load_mesh_mapping(const std::string& path);

/// Entity dropped during graph construction, with the reason.
struct SkipRecord {
  std::string entity;
  std::string reason;
};

/// All tree numbers of a disease label. Unmapped labels yield an empty set and,
/// when `skipped` is given, a skip record.
std::set<MeshCode> mesh_expand(std::string_view disease_label, const MeshMapping& mapping,
                               std::vector<SkipRecord>* skipped = nullptr);

/// (child, parent) for every code whose immediate parent is also in `codes`.
/// No grandparent edges are produced.
std::vector<std::pair<MeshCode, MeshCode>> mesh_tree_edges(const std::set<MeshCode>& codes);

struct DiseaseGeneEdge {
  MeshCode disease;
  std::string gene;
  friend bool operator==(const DiseaseGeneEdge&, const DiseaseGeneEdge&) = default;
  friend auto operator<=>(const DiseaseGeneEdge&, const DiseaseGeneEdge&) = default;
};

/// Drops disease-gene edges whose disease is an ancestor of another disease
/// linked to the same gene, so only the most specific edge per branch remains.
/// Output is sorted and deduplicated.
std::vector<DiseaseGeneEdge> prune_upward_disease_gene(std::vector<DiseaseGeneEdge> edges);

}  // namespace graphix

#endif  // GRAPHIX_MESH_HPP_
