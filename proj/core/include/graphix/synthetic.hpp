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

// Planted-mediator benchmark graphs with known associations and known
// explanatory genes.
//
// Diseases and drugs are split round-robin into modules of `module_size`
// members; module k owns mediator gene k. Every (disease, drug) pair inside a
// module is a positive. Each module member is linked to its mediator with
// probability `mediator_fraction`; otherwise it is linked to one random
// non-mediator gene. Gene-gene and disease-disease spanning chains keep the
// graph connected, and every relation receives
// round(noise_edges x structural edge count) uniformly random extra edges.
//
// With mediator_fraction = 1 and noise_edges = 0 each positive has exactly one
// gene within one hop: its mediator.

#ifndef GRAPHIX_SYNTHETIC_HPP_
#define GRAPHIX_SYNTHETIC_HPP_

#include <cstdint>
#include <vector>

#include "graphix/kgraph.hpp"

namespace graphix {

struct SyntheticSpec {
  std::size_t n_disease = 200;
  std::size_t n_drug = 200;
  std::size_t n_gene = 500;
  double mediator_fraction = 0.8;
  double noise_edges = 0.1;
  std::size_t module_size = 4;
  std::uint64_t seed = 0;
};

struct SyntheticTruth {
  std::vector<NodePair> positives;  // same order as graph.positives
  std::vector<NodeId> mediator;     // per positive
  std::vector<bool> mediated;       // both endpoints linked to the mediator
};

struct SyntheticBenchmark {
  KnowledgeGraph graph;
  SyntheticTruth truth;
};

/// Throws InputError for counts below 2, fractions outside [0, 1], more
/// modules than genes, or more noise than free pairs.
SyntheticBenchmark generate_synthetic(const SyntheticSpec& spec);

}  // namespace graphix

#endif  // GRAPHIX_SYNTHETIC_HPP_
