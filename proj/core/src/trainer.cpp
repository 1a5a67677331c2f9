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

#include "graphix/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "graphix/metrics.hpp"
#include "graphix/optimizer.hpp"

namespace graphix {

namespace {

// Uniform view of a trainable model for the shared loop.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double loss_and_gradients(const PairBatch& batch) = 0;
  virtual std::vector<Matrix*> parameters() = 0;
  virtual std::vector<const Matrix*> gradients() = 0;
  virtual void after_step() {}
  virtual std::vector<double> scores(std::span<const NodePair> pairs) = 0;
};

class GraphixObjective final : public Objective {
 public:
  GraphixObjective(const Rgcn& model, ModelParams& params, LossMode mode)
      : model_(model), params_(params), mode_(mode), grads_(params.zeros_like()) {}

  // Moves matrix by matrix so the addresses handed out by gradients() stay valid.
  double loss_and_gradients(const PairBatch& batch) override {
    ModelParams fresh;
    const double loss = graphix::loss_and_gradients(model_, params_, batch, mode_, &fresh);
    grads_.embeddings = std::move(fresh.embeddings);
    for (std::size_t l = 0; l < grads_.weights.size(); ++l) {
      for (std::size_t r = 0; r < grads_.weights[l].size(); ++r) grads_.weights[l][r] = std::move(fresh.weights[l][r]);
    }
    return loss;
  }
  std::vector<Matrix*> parameters() override {
    std::vector<Matrix*> out{&params_.embeddings};
    for (auto& layer : params_.weights) {
      for (auto& w : layer) out.push_back(&w);
    }
    return out;
  }
  std::vector<const Matrix*> gradients() override {
    std::vector<const Matrix*> out{&grads_.embeddings};
    for (auto& layer : grads_.weights) {
      for (auto& w : layer) out.push_back(&w);
    }
    return out;
  }
  std::vector<double> scores(std::span<const NodePair> pairs) override {
    const Matrix h = model_.forward(params_).output();
    std::vector<double> out;
    for (const auto& p : pairs) out.push_back(score(h, p.first, p.second));
    return out;
  }

 private:
  const Rgcn& model_;
  ModelParams& params_;
  LossMode mode_;
  ModelParams grads_;
};

class TripletObjective final : public Objective {
 public:
  TripletObjective(ModelKind kind, TripletParams& params, LossMode mode)
      : kind_(kind), params_(params), mode_(mode), grads_(params.zeros_like()) {}

  double loss_and_gradients(const PairBatch& batch) override {
    return triplet_loss_and_gradients(kind_, params_, batch, mode_, &grads_);
  }
  std::vector<Matrix*> parameters() override { return {&params_.entities, &params_.relation}; }
  std::vector<const Matrix*> gradients() override { return {&grads_.entities, &grads_.relation}; }
  void after_step() override {
    if (kind_ == ModelKind::TransE) renormalize_entities(params_);
  }
  std::vector<double> scores(std::span<const NodePair> pairs) override {
    std::vector<double> out;
    for (const auto& p : pairs) out.push_back(triplet_score(kind_, params_, p.first, p.second));
    return out;
  }

 private:
  ModelKind kind_;
  TripletParams& params_;
  LossMode mode_;
  TripletParams grads_;
};

// Sampling stream is kept separate from the initialization stream.
constexpr std::uint64_t kSamplingSalt = 0x9e3779b97f4a7c15ULL;

double validation_auc(Objective& objective, const std::vector<NodePair>& pos,
                      const std::vector<NodePair>& neg) {
  auto scores = objective.scores(pos);
  const auto neg_scores = objective.scores(neg);
  std::vector<int> labels(scores.size(), 1);
  scores.insert(scores.end(), neg_scores.begin(), neg_scores.end());
  labels.resize(scores.size(), 0);
  return roc_auc(scores, labels);
}

void run_loop(const KnowledgeGraph& graph, const TrainConfig& config, const TrainingSet& set,
              std::uint64_t seed, Objective& objective, Checkpoint& ck, const EpochObserver& observer) {
  std::mt19937_64 rng(seed ^ kSamplingSalt);
  std::vector<NodePair> positives = set.positives;
  std::vector<NodePair> val_pos, val_neg;

  PairSet exclude(graph.target, set.known);
  for (const auto& p : positives) exclude.insert(p);
  for (const auto& p : set.reserved) exclude.insert(p);
  const NegativeSampler sampler(graph);

  const bool validate = config.validation_fraction > 0.0;
  if (validate) {
    std::shuffle(positives.begin(), positives.end(), rng);
    auto n_val = static_cast<std::size_t>(
        std::llround(config.validation_fraction * static_cast<double>(positives.size())));
    n_val = std::clamp<std::size_t>(n_val, 1, positives.size() - 1);
    val_pos.assign(positives.begin(), positives.begin() + static_cast<std::ptrdiff_t>(n_val));
    positives.erase(positives.begin(), positives.begin() + static_cast<std::ptrdiff_t>(n_val));
    val_neg = sampler.sample(exclude, val_pos.size(), rng);
    for (const auto& p : val_neg) exclude.insert(p);
  }

  Optimizer optimizer(config.optimizer_settings());
  const auto params = objective.parameters();
  const auto grads = objective.gradients();
  std::vector<NodePair> negatives = sampler.sample(exclude, positives.size(), rng);

  double best_auc = -1.0;
  int since_best = 0;
  std::vector<Matrix> best_params;
  int best_epoch = 0;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (epoch > 1 && config.resample_negatives_each_epoch) {
      negatives = sampler.sample(exclude, positives.size(), rng);
    }
    double epoch_loss = 0.0;
    if (config.batch_size == 0 || config.batch_size >= positives.size()) {
      epoch_loss = objective.loss_and_gradients({positives, negatives});
      optimizer.step(params, grads);
      objective.after_step();
    } else {
      std::vector<std::size_t> order(positives.size());
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      std::size_t n_batches = 0;
      for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
        PairBatch batch;
        for (std::size_t k = start; k < std::min(order.size(), start + config.batch_size); ++k) {
          batch.positives.push_back(positives[order[k]]);
          batch.negatives.push_back(negatives[order[k]]);
        }
        epoch_loss += objective.loss_and_gradients(batch);
        optimizer.step(params, grads);
        objective.after_step();
        ++n_batches;
      }
      epoch_loss /= static_cast<double>(n_batches);
    }
    if (!std::isfinite(epoch_loss)) {
      throw NumericError("training loss became non-finite at epoch " + std::to_string(epoch));
    }
    for (const auto* p : params) {
      if (!p->allFinite()) {
        throw NumericError("parameters became non-finite at epoch " + std::to_string(epoch));
      }
    }
    ck.loss_history.push_back(epoch_loss);
    ck.epoch = epoch;
    if (observer) observer(epoch, epoch_loss);

    if (validate) {
      const double auc = validation_auc(objective, val_pos, val_neg);
      if (auc > best_auc) {
        best_auc = auc;
        best_epoch = epoch;
        since_best = 0;
        best_params.clear();
        for (const auto* p : params) best_params.push_back(*p);
      } else if (config.early_stop_patience > 0 && ++since_best >= config.early_stop_patience) {
        break;
      }
    }
  }
  if (validate && !best_params.empty()) {
    for (std::size_t k = 0; k < params.size(); ++k) *params[k] = best_params[k];
    ck.epoch = best_epoch;
  }
}

}  // namespace

Checkpoint train_model(ModelKind kind, const KnowledgeGraph& graph, const ModelConfig& model_config,
                       const TrainConfig& train_config, const TrainingSet& set, const EpochObserver& observer) {
  model_config.validate();
  train_config.validate();
  if (set.positives.empty()) throw InputError("training needs at least one positive pair");
  if (train_config.validation_fraction > 0.0 && set.positives.size() < 2) {
    throw InputError("validation split needs at least two positives");
  }

  Checkpoint ck;
  ck.model = kind;
  ck.config = model_config;
  ck.train = train_config;
  ck.graph_hash = graph.content_hash();

  if (kind == ModelKind::GraphIX) {
    const Rgcn model(graph, model_config);
    ck.params = init_params(model_config, graph.n_nodes(), graph.n_relations(), model_config.seed);
    GraphixObjective objective(model, ck.params, train_config.loss_mode);
    run_loop(graph, train_config, set, model_config.seed, objective, ck, observer);
  } else {
    ck.triplet = init_triplet_params(kind, graph.n_nodes(), model_config.embed_dim, model_config.seed);
    TripletObjective objective(kind, ck.triplet, train_config.loss_mode);
    run_loop(graph, train_config, set, model_config.seed, objective, ck, observer);
  }
  return ck;
}

Checkpoint train(const KnowledgeGraph& graph, const ModelConfig& model_config, const TrainConfig& train_config) {
  return train_model(ModelKind::GraphIX, graph, model_config, train_config,
                     {graph.positives, graph.positives, {}});
}

Checkpoint train_baseline(ModelKind kind, const KnowledgeGraph& graph, const ModelConfig& model_config,
                          const TrainConfig& train_config) {
  if (kind == ModelKind::GraphIX) throw InputError("train_baseline expects transe or distmult");
  return train_model(kind, graph, model_config, train_config, {graph.positives, graph.positives, {}});
}

}  // namespace graphix
