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

#include "graphix/mesh.hpp"

#include <algorithm>
#include <fstream>

#include "graphix/common.hpp"

namespace graphix {

MeshCode::MeshCode(std::string code) : code_(std::move(code)) {
  if (code_.empty()) throw InputError("empty MeSH tree number");
  std::size_t start = 0;
  while (true) {
    const auto dot = code_.find('.', start);
    const auto end = dot == std::string::npos ? code_.size() : dot;
    if (end == start) throw InputError("malformed MeSH tree number '" + code_ + "'");
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
}

int MeshCode::depth() const {
  return 1 + static_cast<int>(std::count(code_.begin(), code_.end(), '.'));
}

bool MeshCode::has_parent() const { return code_.find('.') != std::string::npos; }

MeshCode MeshCode::parent() const {
  const auto dot = code_.rfind('.');
  if (dot == std::string::npos) throw InputError("MeSH tree number '" + code_ + "' has no parent");
  return MeshCode(code_.substr(0, dot));
}

std::string_view MeshCode::first_level() const {
  return std::string_view(code_).substr(0, code_.find('.'));
}

bool MeshCode::is_ancestor_of(const MeshCode& other) const {
  return other.code_.size() > code_.size() && other.code_.compare(0, code_.size(), code_) == 0 &&
         other.code_[code_.size()] == '.';
}

MeshMapping load_mesh_mapping(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read MeSH mapping " + path);
  MeshMapping mapping;
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
    try {
      mapping[line.substr(0, tab)].insert(MeshCode(line.substr(tab + 1)));
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(path, lineno, e.what());
    }
  }
  if (mapping.empty()) throw InputError("MeSH mapping " + path + " has no entries");
  return mapping;
}

std::set<MeshCode> mesh_expand(std::string_view disease_label, const MeshMapping& mapping,
                               std::vector<SkipRecord>* skipped) {
  const auto it = mapping.find(disease_label);
  if (it == mapping.end()) {
    if (skipped) skipped->push_back({std::string(disease_label), "no MeSH tree number"});
    return {};
  }
  return it->second;
}

std::vector<std::pair<MeshCode, MeshCode>> mesh_tree_edges(const std::set<MeshCode>& codes) {
  std::vector<std::pair<MeshCode, MeshCode>> edges;
  for (const auto& code : codes) {
    if (!code.has_parent()) continue;
    MeshCode parent = code.parent();
    if (codes.contains(parent)) edges.emplace_back(code, std::move(parent));
  }
  return edges;
}

std::vector<DiseaseGeneEdge> prune_upward_disease_gene(std::vector<DiseaseGeneEdge> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  // Every proper ancestor of a linked code is redundant for that gene.
  std::set<std::pair<std::string, std::string>> redundant;  // (gene, code)
  for (const auto& e : edges) {
    MeshCode code = e.disease;
    while (code.has_parent()) {
      code = code.parent();
      redundant.emplace(e.gene, code.str());
    }
  }
  std::erase_if(edges, [&](const DiseaseGeneEdge& e) {
    return redundant.contains({e.gene, e.disease.str()});
  });
  return edges;
}

}  // namespace graphix
