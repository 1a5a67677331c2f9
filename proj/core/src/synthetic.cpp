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

#include "graphix/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace graphix {

namespace {

std::string padded(char prefix, std::size_t i) {
  std::string digits = std::to_string(i);
  if (digits.size() < 4) digits.insert(0, 4 - digits.size(), '0');
  return std::string(1, prefix) + digits;
}

// Adds `count` uniformly random new pairs between `left` and `right`.
void add_noise(std::set<NodePair>& edges, const std::vector<NodeId>& left, const std::vector<NodeId>& right,
               bool symmetric, std::size_t count, std::mt19937_64& rng) {
  const std::size_t possible = symmetric ? left.size() * (left.size() - 1) / 2 : left.size() * right.size();
  if (edges.size() + count > possible) throw InputError("synthetic generator: noise exceeds possible pairs");
  std::uniform_int_distribution<std::size_t> pl(0, left.size() - 1);
  std::uniform_int_distribution<std::size_t> pr(0, right.size() - 1);
  std::size_t added = 0;
  while (added < count) {
    NodePair p{left[pl(rng)], right[pr(rng)]};
    if (symmetric) {
      if (p.first == p.second) continue;
      if (p.second < p.first) std::swap(p.first, p.second);
    }
    if (edges.insert(p).second) ++added;
  }
}

}  // namespace

SyntheticBenchmark generate_synthetic(const SyntheticSpec& spec) {
  if (spec.n_disease < 2 || spec.n_drug < 2 || spec.n_gene < 2) {
    throw InputError("synthetic generator: every node count must be at least 2");
  }
  if (!(spec.mediator_fraction >= 0.0 && spec.mediator_fraction <= 1.0)) {
    throw InputError("synthetic generator: mediator_fraction must lie in [0, 1]");
  }
  if (!(spec.noise_edges >= 0.0)) throw InputError("synthetic generator: noise_edges must be non-negative");
  if (spec.module_size == 0) throw InputError("synthetic generator: module_size must be positive");
  const std::size_t modules = std::max<std::size_t>(1, std::min(spec.n_disease, spec.n_drug) / spec.module_size);
  if (modules >= spec.n_gene) throw InputError("synthetic generator: need more genes than modules");

  std::mt19937_64 rng(spec.seed);
  LabelTable labels;
  std::vector<NodeId> diseases, drugs, genes;
  for (std::size_t i = 0; i < spec.n_disease; ++i) {
    diseases.push_back(labels.intern(NodeKind::Disease, make_label(NodeKind::Disease, padded('d', i))));
  }
  for (std::size_t i = 0; i < spec.n_drug; ++i) {
    drugs.push_back(labels.intern(NodeKind::Drug, make_label(NodeKind::Drug, padded('c', i))));
  }
  for (std::size_t i = 0; i < spec.n_gene; ++i) {
    genes.push_back(labels.intern(NodeKind::Gene, make_label(NodeKind::Gene, padded('g', i))));
  }
  const std::vector<NodeId> background(genes.begin() + static_cast<std::ptrdiff_t>(modules), genes.end());

  std::set<NodePair> dd, dg, gg, gc;
  std::bernoulli_distribution attach(spec.mediator_fraction);
  std::uniform_int_distribution<std::size_t> pick_background(0, background.size() - 1);
  std::vector<char> disease_linked(spec.n_disease), drug_linked(spec.n_drug);
  for (std::size_t i = 0; i < spec.n_disease; ++i) {
    disease_linked[i] = attach(rng);
    const NodeId gene = disease_linked[i] ? genes[i % modules] : background[pick_background(rng)];
    dg.insert({diseases[i], gene});
  }
  for (std::size_t i = 0; i < spec.n_drug; ++i) {
    drug_linked[i] = attach(rng);
    const NodeId gene = drug_linked[i] ? genes[i % modules] : background[pick_background(rng)];
    gc.insert({gene, drugs[i]});
  }
  for (std::size_t i = 0; i + 1 < spec.n_gene; ++i) gg.insert({genes[i], genes[i + 1]});
  for (std::size_t i = 0; i + 1 < spec.n_disease; ++i) dd.insert({diseases[i], diseases[i + 1]});

  auto noise_count = [&](std::size_t structural) {
    return static_cast<std::size_t>(std::llround(spec.noise_edges * static_cast<double>(structural)));
  };
  add_noise(dd, diseases, diseases, true, noise_count(spec.n_disease - 1), rng);
  add_noise(dg, diseases, genes, false, noise_count(spec.n_disease), rng);
  add_noise(gg, genes, genes, true, noise_count(spec.n_gene - 1), rng);
  add_noise(gc, genes, drugs, false, noise_count(spec.n_drug), rng);

  std::vector<NodePair> positives;
  std::vector<NodeId> mediators;
  std::vector<bool> mediated;
  for (std::size_t i = 0; i < spec.n_disease; ++i) {
    for (std::size_t j = 0; j < spec.n_drug; ++j) {
      if (i % modules != j % modules) continue;
      positives.push_back({diseases[i], drugs[j]});
      mediators.push_back(genes[i % modules]);
      mediated.push_back(disease_linked[i] && drug_linked[j]);
    }
  }

  auto as_list = [](RelationKind r, const std::set<NodePair>& s) {
    return make_edge_list(r, std::vector<NodePair>(s.begin(), s.end()));
  };
  std::vector<EdgeList> lists = {
      as_list(RelationKind::DiseaseDisease, dd), as_list(RelationKind::DiseaseGene, dg),
      as_list(RelationKind::GeneGene, gg),       as_list(RelationKind::GeneDrug, gc),
      make_edge_list(RelationKind::DiseaseDrug, positives),
  };
  auto assembled = assemble(lists, RelationKind::DiseaseDrug, labels);
  if (assembled.graph.n_nodes() != labels.size()) throw Error("synthetic graph is not connected");

  // Node ids survive assembly unchanged because every node is kept.
  SyntheticBenchmark bench{std::move(assembled.graph), {}};
  std::vector<std::size_t> order(positives.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return positives[a] < positives[b]; });
  for (std::size_t k : order) {
    bench.truth.positives.push_back(positives[k]);
    bench.truth.mediator.push_back(mediators[k]);
    bench.truth.mediated.push_back(mediated[k]);
  }
  return bench;
}

}  // namespace graphix
