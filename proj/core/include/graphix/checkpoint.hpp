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

// Trained-state container shared by the convolution model and the baselines.
//
// File layout (little-endian):
//   "GRAPHIXC"  u32 version
//   str         metadata JSON (model kind, configs, graph hash, epoch)
//   u64 n, n x f64   loss history
//   u64 k, k x matrix (u64 rows, u64 cols, row-major f64)
// GraphIX stores the embedding table then weights[layer][relation];
// baselines store entity embeddings then the relation vector.

#ifndef GRAPHIX_CHECKPOINT_HPP_
#define GRAPHIX_CHECKPOINT_HPP_

#include <span>
#include <string>
#include <vector>

#include "graphix/baselines.hpp"
#include "graphix/kgraph.hpp"
#include "graphix/model.hpp"

namespace graphix {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelKind model = ModelKind::GraphIX;
  ModelConfig config;
  TrainConfig train;
  std::string graph_hash;
  int epoch = 0;
  std::vector<double> loss_history;
  ModelParams params;      // GraphIX only
  TripletParams triplet;   // TransE / DistMult only
};

std::string serialize_checkpoint(const Checkpoint& checkpoint);
Checkpoint deserialize_checkpoint(std::string bytes, const std::string& source);
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Throws InputError when the checkpoint was trained on a different graph,
/// unless `force` is set.
void check_graph_hash(const Checkpoint& checkpoint, const KnowledgeGraph& graph, bool force);

/// Scores pairs under any checkpoint; computes GraphIX representations once.
class PairScorer {
 public:
  PairScorer(const KnowledgeGraph& graph, const Checkpoint& checkpoint);

  double operator()(NodeId i, NodeId j) const;
  std::vector<double> score(std::span<const NodePair> pairs) const;
  /// Final representations (GraphIX) or entity embeddings (baselines).
  const Matrix& representations() const { return repr_; }

 private:
  ModelKind kind_;
  Matrix repr_;
  Matrix relation_;
};

/// Flat JSON run configuration: ModelConfig and TrainConfig keys side by side,
/// e.g. {"embed_dim": 64, "epochs": 200, "optimizer": "adam"}. Keys present
/// override the given bases; unknown keys throw InputError.
void apply_config_json(const std::string& json_text, ModelConfig& model, TrainConfig& train);
std::string config_to_json(const ModelConfig& model, const TrainConfig& train);

}  // namespace graphix

#endif  // GRAPHIX_CHECKPOINT_HPP_
