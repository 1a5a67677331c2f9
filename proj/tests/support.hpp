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

// Helpers shared by the test binaries: random graph construction and the
// dense reference implementation used as an oracle.

#ifndef GRAPHIX_TESTS_SUPPORT_HPP_
#define GRAPHIX_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "graphix/kgraph.hpp"
#include "graphix/model.hpp"

namespace graphix::testing {

struct RandomGraphSpec {
  std::size_t n_disease = 3;
  std::size_t n_drug = 3;
  std::size_t n_gene = 4;
  double density = 0.3;
  std::size_t n_positives = 3;
};

// Edges of each association relation drawn independently with `density`.
// Not necessarily connected; no component restriction is applied.
struct RandomGraph {
  KnowledgeGraph graph;
  // relation index -> pairs, kept for the dense oracle
  std::vector<std::vector<NodePair>> pairs;
};

inline RandomGraph random_graph(const RandomGraphSpec& spec, std::mt19937_64& rng) {
  RandomGraph out;
  auto& g = out.graph;
  std::vector<NodeId> dis, drug, gene;
  for (std::size_t i = 0; i < spec.n_disease; ++i)
    dis.push_back(g.labels.intern(NodeKind::Disease, "disease::d" + std::to_string(i)));
  for (std::size_t i = 0; i < spec.n_drug; ++i)
    drug.push_back(g.labels.intern(NodeKind::Drug, "drug::c" + std::to_string(i)));
  for (std::size_t i = 0; i < spec.n_gene; ++i)
    gene.push_back(g.labels.intern(NodeKind::Gene, "gene::g" + std::to_string(i)));
  const auto of = [&](NodeKind k) -> const std::vector<NodeId>& {
    return k == NodeKind::Disease ? dis : k == NodeKind::Drug ? drug : gene;
  };
  std::bernoulli_distribution coin(spec.density);
  const std::size_t n = g.n_nodes();
  for (auto rel : {RelationKind::DiseaseDisease, RelationKind::DiseaseGene, RelationKind::GeneGene,
                   RelationKind::GeneDrug}) {
    const auto [ka, kb] = relation_endpoints(rel);
    std::set<NodePair> edges;
    for (NodeId a : of(ka)) {
      for (NodeId b : of(kb)) {
        if (ka == kb && b <= a) continue;
        if (coin(rng)) edges.insert({a, b});
      }
    }
    std::vector<NodePair> v(edges.begin(), edges.end());
    g.relations.push_back({rel, CsrMatrix::from_undirected(n, v)});
    out.pairs.push_back(std::move(v));
  }
  g.relations.push_back({RelationKind::SelfLoop, CsrMatrix::identity(n)});
  std::vector<NodePair> self;
  for (NodeId i = 0; i < n; ++i) self.push_back({i, i});
  out.pairs.push_back(self);
  g.target = RelationKind::DiseaseDrug;
  std::set<NodePair> pos;
  std::uniform_int_distribution<std::size_t> pd(0, dis.size() - 1), pc(0, drug.size() - 1);
  while (pos.size() < std::min(spec.n_positives, dis.size() * drug.size())) pos.insert({dis[pd(rng)], drug[pc(rng)]});
  g.positives.assign(pos.begin(), pos.end());
  return out;
}

// Dense adjacency built directly from pair lists (independent of CsrMatrix).
inline Matrix dense_adjacency(std::size_t n, const std::vector<NodePair>& pairs) {
  Matrix a = Matrix::Zero(n, n);
  for (const auto& p : pairs) {
    a(p.first, p.second) = 1.0;
    a(p.second, p.first) = 1.0;
  }
  return a;
}

// H_{l+1} = tanh(sum_r A_r H_l W_r) with dense matrices and naive loops.
inline Matrix dense_forward(const RandomGraph& rg, const ModelParams& params) {
  const std::size_t n = rg.graph.n_nodes();
  Matrix h = params.embeddings;
  for (const auto& layer : params.weights) {
    Matrix z = Matrix::Zero(n, layer.front().cols());
    for (std::size_t r = 0; r < layer.size(); ++r) {
      const Matrix a = dense_adjacency(n, rg.pairs[r]);
      for (std::size_t i = 0; i < n; ++i)
        for (Eigen::Index d = 0; d < z.cols(); ++d) {
          double acc = 0.0;
          for (std::size_t u = 0; u < n; ++u) {
            if (a(i, u) == 0.0) continue;
            for (Eigen::Index c = 0; c < h.cols(); ++c) acc += a(i, u) * h(u, c) * layer[r](c, d);
          }
          z(i, d) += acc;
        }
    }
    h = z.array().tanh().matrix();
  }
  return h;
}

inline double max_rel_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double x = a.data()[i], y = b.data()[i];
    const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
    if (x != y) worst = std::max(worst, std::abs(x - y) / scale);
  }
  return worst;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("graphix_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }
  std::string write(const std::string& name, const std::string& content) const {
    const auto p = file(name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

 private:
  std::filesystem::path path_;
};

}  // namespace graphix::testing

#endif  // GRAPHIX_TESTS_SUPPORT_HPP_
