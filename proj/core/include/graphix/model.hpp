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

// One-or-more-layer relational graph convolution over learned node
// embeddings, dot-product edge scores and the pairwise ranking loss.
//
//   H^(l+1) = tanh( sum_r A_r H^(l) W_r^(l) ),   H^(0) = X (learned)
//   f(i, j) = H_i . H_j
//   loss    = mean_k -ln( sigmoid(f(pos_k) - f(neg_k)) + 1e-10 )
//
// Gradients are derived by hand; see backward().

#ifndef GRAPHIX_MODEL_HPP_
#define GRAPHIX_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "graphix/common.hpp"
#include "graphix/kgraph.hpp"
#include "graphix/optimizer.hpp"

namespace graphix {

inline constexpr double kLossEpsilon = 1.0e-10;

/// Scoring model family stored in a checkpoint.
enum class ModelKind : std::uint8_t { GraphIX = 0, TransE = 1, DistMult = 2 };

std::string_view to_string(ModelKind kind);
/// "graphix", "transe" or "distmult".
ModelKind parse_model_kind(std::string_view s);

struct ModelConfig {
  int embed_dim = 64;
  int out_dim = 64;
  int n_layers = 1;
  std::uint64_t seed = 0;
  bool normalize_adjacency = false;

  /// Throws InputError unless dims are positive, equal, and n_layers >= 1.
  void validate() const;
};

/// Learned state: input embedding table and per-layer, per-relation weights.
struct ModelParams {
  Matrix embeddings;                         // N x C
  std::vector<std::vector<Matrix>> weights;  // [layer][relation], C x D then D x D

  /// Same shapes, all zeros.
  ModelParams zeros_like() const;
  bool all_finite() const;
};

/// Embeddings uniform in [-1/sqrt(C), 1/sqrt(C)]; weights uniform Glorot.
ModelParams init_params(const ModelConfig& config, std::size_t n_nodes, std::size_t n_relations,
                        std::uint64_t seed);

/// Layer activations; activations.front() is the embedding input and
/// activations.back() the scored representation H.
struct ForwardCache {
  std::vector<Matrix> activations;
  const Matrix& output() const { return activations.back(); }
};

/// Relational convolution bound to one graph. Uses a degree-normalized copy
/// of the adjacency when config.normalize_adjacency is set.
class Rgcn {
 public:
  Rgcn(const KnowledgeGraph& graph, ModelConfig config);

  const KnowledgeGraph& graph() const { return normalized_ ? *normalized_ : *graph_; }
  const ModelConfig& config() const { return config_; }
  std::size_t n_relations() const { return graph().n_relations(); }

  /// Throws NumericError naming the first node whose activation is not finite.
  ForwardCache forward(const ModelParams& params) const;
  /// Gradients of a scalar objective given dObjective/dH for the final layer.
  ModelParams backward(const ModelParams& params, const ForwardCache& cache,
                       const Matrix& output_grad) const;

  void check_shapes(const ModelParams& params) const;

 private:
  const KnowledgeGraph* graph_;
  std::optional<KnowledgeGraph> normalized_;
  ModelConfig config_;
};

/// Dot product of two representation rows.
double score(const Matrix& h, NodeId i, NodeId j);

/// -ln(sigmoid(f_pos - f_neg) + 1e-10).
double pair_loss(double f_pos, double f_neg);

/// Numerically stable logistic function.
double sigmoid(double x);

enum class LossMode {
  PerPair,     ///< mean over matched pairs of pair_loss(f_pos, f_neg)
  LiteralSum,  ///< -ln(sigmoid(sum_p sum_n (f_p - f_n)) + eps), one sigmoid over all pairs
};

std::string_view to_string(LossMode mode);
LossMode parse_loss_mode(std::string_view s);

/// Optimizer and schedule. None of these values come from the model
/// definition itself; defaults are Adam at 1e-2, full batch, fresh negatives
/// every epoch.
struct TrainConfig {
  int epochs = 200;
  double learning_rate = 1e-2;
  OptimizerKind optimizer = OptimizerKind::Adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::size_t batch_size = 0;  // 0 = full batch
  bool resample_negatives_each_epoch = true;
  int early_stop_patience = 10;       // epochs without validation gain; 0 disables
  double validation_fraction = 0.0;   // in [0, 1)
  LossMode loss_mode = LossMode::PerPair;

  void validate() const;
  OptimizerSettings optimizer_settings() const;
};

struct PairBatch {
  std::vector<NodePair> positives;
  std::vector<NodePair> negatives;
};

/// Loss value and the coefficient of each pair score in its gradient:
/// dLoss/df(pos_k) = pos_coef[k], dLoss/df(neg_k) = neg_coef[k].
struct ScoreLoss {
  double loss = 0.0;
  std::vector<double> pos_coef;
  std::vector<double> neg_coef;
};

/// Loss over pair scores. PerPair requires |pos| == |neg|.
ScoreLoss ranking_loss(std::span<const double> pos_scores, std::span<const double> neg_scores,
                       LossMode mode);

/// Batch loss on representations H and its gradient dLoss/dH.
double batch_loss(const Matrix& h, const PairBatch& batch, LossMode mode, Matrix* output_grad);

/// Forward + loss + backward in one call; returns the loss and fills `grads`.
double loss_and_gradients(const Rgcn& model, const ModelParams& params, const PairBatch& batch,
                          LossMode mode, ModelParams* grads);

/// Set of target-relation pairs, order-insensitive for same-kind relations.
class PairSet {
 public:
  explicit PairSet(RelationKind relation) : symmetric_(relation_endpoints(relation).first ==
                                                       relation_endpoints(relation).second) {}
  PairSet(RelationKind relation, std::span<const NodePair> pairs) : PairSet(relation) {
    for (const auto& p : pairs) insert(p);
  }
  void insert(NodePair p) { keys_.insert(key(p)); }
  bool contains(NodePair p) const { return keys_.contains(key(p)); }
  std::size_t size() const { return keys_.size(); }

 private:
  std::uint64_t key(NodePair p) const {
    if (symmetric_ && p.second < p.first) std::swap(p.first, p.second);
    return pair_key(p.first, p.second);
  }
  bool symmetric_;
  std::unordered_set<std::uint64_t> keys_;
};

/// Uniform kind-matched pairs of the graph's target relation, rejecting known
/// pairs (and self pairs for same-kind relations). Up to 100 draws per slot;
/// exhausting them throws NumericError.
class NegativeSampler {
 public:
  explicit NegativeSampler(const KnowledgeGraph& graph);
  std::vector<NodePair> sample(const PairSet& exclude, std::size_t count, std::mt19937_64& rng) const;

  static constexpr int kRetryCap = 100;

 private:
  std::vector<NodeId> left_;
  std::vector<NodeId> right_;
  bool symmetric_;
};

/// |positives| negatives excluding `positives` themselves.
std::vector<NodePair> sample_negatives(const KnowledgeGraph& graph, std::span<const NodePair> positives,
                                       std::mt19937_64& rng);

}  // namespace graphix

#endif  // GRAPHIX_MODEL_HPP_
