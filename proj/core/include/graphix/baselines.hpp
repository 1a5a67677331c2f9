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

// TransE and DistMult comparators. Both score target-relation pairs with a
// single relation vector and ignore the message-passing relations.

#ifndef GRAPHIX_BASELINES_HPP_
#define GRAPHIX_BASELINES_HPP_

#include <cstdint>

#include "graphix/common.hpp"
#include "graphix/model.hpp"

namespace graphix {

struct TripletParams {
  Matrix entities;  // N x C
  Matrix relation;  // 1 x C

  TripletParams zeros_like() const;
};

using VecRef = Eigen::Ref<const RowVector>;

/// ||h + r - t||_1
double transe_distance(const VecRef& h, const VecRef& r, const VecRef& t);
/// Negated distance, so higher means more plausible.
double transe_score(const VecRef& h, const VecRef& r, const VecRef& t);
/// sum_d h_d r_d t_d
double distmult_score(const VecRef& h, const VecRef& r, const VecRef& t);

/// Entities and relation uniform in [-6/sqrt(C), 6/sqrt(C)] (TransE, then
/// unit-normalized) or [-1/sqrt(C), 1/sqrt(C)] (DistMult).
TripletParams init_triplet_params(ModelKind kind, std::size_t n_nodes, int dim, std::uint64_t seed);

double triplet_score(ModelKind kind, const TripletParams& params, NodeId head, NodeId tail);

/// Ranking loss over baseline scores; fills `grads` when non-null.
double triplet_loss_and_gradients(ModelKind kind, const TripletParams& params, const PairBatch& batch,
                                  LossMode mode, TripletParams* grads);

/// Rescales every entity row to unit L2 norm (TransE constraint).
void renormalize_entities(TripletParams& params);

}  // namespace graphix

#endif  // GRAPHIX_BASELINES_HPP_
