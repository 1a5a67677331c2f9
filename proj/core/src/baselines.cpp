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

#include "graphix/baselines.hpp"

#include <cmath>
#include <random>

namespace graphix {

TripletParams TripletParams::zeros_like() const {
  return {Matrix::Zero(entities.rows(), entities.cols()), Matrix::Zero(relation.rows(), relation.cols())};
}

double transe_distance(const VecRef& h, const VecRef& r, const VecRef& t) {
  return (h + r - t).cwiseAbs().sum();
}

double transe_score(const VecRef& h, const VecRef& r, const VecRef& t) { return -transe_distance(h, r, t); }

double distmult_score(const VecRef& h, const VecRef& r, const VecRef& t) {
  return (h.array() * r.array() * t.array()).sum();
}

TripletParams init_triplet_params(ModelKind kind, std::size_t n_nodes, int dim, std::uint64_t seed) {
  if (kind == ModelKind::GraphIX) throw InputError("graphix is not a triplet baseline");
  if (dim <= 0 || n_nodes == 0) throw InputError("baseline needs positive dimension and nodes");
  std::mt19937_64 rng(seed);
  const double bound = (kind == ModelKind::TransE ? 6.0 : 1.0) / std::sqrt(static_cast<double>(dim));
  std::uniform_real_distribution<double> u(-bound, bound);
  TripletParams p;
  p.entities.resize(static_cast<Eigen::Index>(n_nodes), dim);
  for (Eigen::Index i = 0; i < p.entities.size(); ++i) p.entities.data()[i] = u(rng);
  p.relation.resize(1, dim);
  for (Eigen::Index i = 0; i < p.relation.size(); ++i) p.relation.data()[i] = u(rng);
  if (kind == ModelKind::TransE) {
    renormalize_entities(p);
    p.relation /= p.relation.norm();
  }
  return p;
}

double triplet_score(ModelKind kind, const TripletParams& params, NodeId head, NodeId tail) {
  const auto h = params.entities.row(head);
  const auto t = params.entities.row(tail);
  const auto r = params.relation.row(0);
  return kind == ModelKind::TransE ? transe_score(h, r, t) : distmult_score(h, r, t);
}

double triplet_loss_and_gradients(ModelKind kind, const TripletParams& params, const PairBatch& batch,
                                  LossMode mode, TripletParams* grads) {
  std::vector<double> fp, fn;
  for (const auto& p : batch.positives) fp.push_back(triplet_score(kind, params, p.first, p.second));
  for (const auto& p : batch.negatives) fn.push_back(triplet_score(kind, params, p.first, p.second));
  const auto loss = ranking_loss(fp, fn, mode);
  if (!grads) return loss.loss;

  *grads = params.zeros_like();
  const auto r = params.relation.row(0);
  auto accumulate = [&](const std::vector<NodePair>& pairs, const std::vector<double>& coef) {
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [hi, ti] = pairs[k];
      const auto h = params.entities.row(hi);
      const auto t = params.entities.row(ti);
      if (kind == ModelKind::TransE) {
        // score = -sum |h + r - t|
        const RowVector sign = (h + r - t).array().sign().matrix();
        grads->entities.row(hi) -= coef[k] * sign;
        grads->relation.row(0) -= coef[k] * sign;
        grads->entities.row(ti) += coef[k] * sign;
      } else {
        grads->entities.row(hi) += coef[k] * (r.array() * t.array()).matrix();
        grads->relation.row(0) += coef[k] * (h.array() * t.array()).matrix();
        grads->entities.row(ti) += coef[k] * (h.array() * r.array()).matrix();
      }
    }
  };
  accumulate(batch.positives, loss.pos_coef);
  accumulate(batch.negatives, loss.neg_coef);
  return loss.loss;
}

void renormalize_entities(TripletParams& params) {
  for (Eigen::Index i = 0; i < params.entities.rows(); ++i) {
    const double norm = params.entities.row(i).norm();
    if (norm > 0.0) params.entities.row(i) /= norm;
  }
}

}  // namespace graphix
