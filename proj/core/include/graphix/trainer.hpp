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

#ifndef GRAPHIX_TRAINER_HPP_
#define GRAPHIX_TRAINER_HPP_

#include <functional>
#include <vector>

#include "graphix/checkpoint.hpp"
#include "graphix/kgraph.hpp"
#include "graphix/model.hpp"

namespace graphix {

/// Supervision for one training run.
struct TrainingSet {
  std::vector<NodePair> positives;
  /// Known pairs never drawn as negatives (all positives of the graph, or the
  /// shuffled set in label-shuffle controls). The training positives are
  /// always excluded.
  std::vector<NodePair> known;
  /// Pairs reserved for evaluation; also never drawn as training negatives.
  std::vector<NodePair> reserved;
};

/// Called after every epoch with (epoch, loss).
using EpochObserver = std::function<void(int, double)>;

/// Trains the relational convolution model on graph.positives.
Checkpoint train(const KnowledgeGraph& graph, const ModelConfig& model_config,
                 const TrainConfig& train_config);

/// Trains any model kind on an explicit training set. Deterministic for a fixed
/// model_config.seed in single-threaded mode. Throws NumericError on a
/// non-finite loss (with the epoch) and InputError on zero positives.
Checkpoint train_model(ModelKind kind, const KnowledgeGraph& graph, const ModelConfig& model_config,
                       const TrainConfig& train_config, const TrainingSet& set,
                       const EpochObserver& observer = {});

/// TransE or DistMult on graph.positives.
Checkpoint train_baseline(ModelKind kind, const KnowledgeGraph& graph, const ModelConfig& model_config,
                          const TrainConfig& train_config);

}  // namespace graphix

#endif  // GRAPHIX_TRAINER_HPP_
