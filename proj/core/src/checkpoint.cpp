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

#include "graphix/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "graphix/binary_io.hpp"
#include "json.hpp"

namespace graphix {

namespace {

constexpr std::string_view kCheckpointMagic = "GRAPHIXC";

nlohmann::ordered_json config_object(const ModelConfig& m, const TrainConfig& t) {
  nlohmann::ordered_json j;
  j["embed_dim"] = m.embed_dim;
  j["out_dim"] = m.out_dim;
  j["n_layers"] = m.n_layers;
  j["seed"] = m.seed;
  j["normalize_adjacency"] = m.normalize_adjacency;
  j["epochs"] = t.epochs;
  j["learning_rate"] = t.learning_rate;
  j["optimizer"] = std::string(to_string(t.optimizer));
  j["adam_beta1"] = t.adam_beta1;
  j["adam_beta2"] = t.adam_beta2;
  j["adam_eps"] = t.adam_eps;
  if (t.batch_size == 0) {
    j["batch_size"] = "full";
  } else {
    j["batch_size"] = t.batch_size;
  }
  j["resample_negatives_each_epoch"] = t.resample_negatives_each_epoch;
  j["early_stop_patience"] = t.early_stop_patience;
  j["validation_fraction"] = t.validation_fraction;
  j["loss_mode"] = std::string(to_string(t.loss_mode));
  return j;
}

void apply_config_object(const nlohmann::json& j, ModelConfig& m, TrainConfig& t) {
  if (!j.is_object()) throw InputError("run configuration must be a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "embed_dim") m.embed_dim = v.get<int>();
    else if (key == "out_dim") m.out_dim = v.get<int>();
    else if (key == "n_layers") m.n_layers = v.get<int>();
    else if (key == "seed") m.seed = v.get<std::uint64_t>();
    else if (key == "normalize_adjacency") m.normalize_adjacency = v.get<bool>();
    else if (key == "epochs") t.epochs = v.get<int>();
    else if (key == "learning_rate") t.learning_rate = v.get<double>();
    else if (key == "optimizer") t.optimizer = parse_optimizer_kind(v.get<std::string>());
    else if (key == "adam_beta1") t.adam_beta1 = v.get<double>();
    else if (key == "adam_beta2") t.adam_beta2 = v.get<double>();
    else if (key == "adam_eps") t.adam_eps = v.get<double>();
    else if (key == "batch_size") {
      if (v.is_string()) {
        if (v.get<std::string>() != "full") throw InputError("batch_size must be a count or \"full\"");
        t.batch_size = 0;
      } else {
        t.batch_size = v.get<std::size_t>();
      }
    } else if (key == "resample_negatives_each_epoch") t.resample_negatives_each_epoch = v.get<bool>();
    else if (key == "early_stop_patience") t.early_stop_patience = v.get<int>();
    else if (key == "validation_fraction") t.validation_fraction = v.get<double>();
    else if (key == "loss_mode") t.loss_mode = parse_loss_mode(v.get<std::string>());
    else throw InputError("unknown configuration key '" + key + "'");
  }
  m.validate();
  t.validate();
}

}  // namespace

void apply_config_json(const std::string& json_text, ModelConfig& model, TrainConfig& train) {
  try {
    apply_config_object(nlohmann::json::parse(json_text), model, train);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("run configuration: ") + e.what());
  }
}

std::string config_to_json(const ModelConfig& model, const TrainConfig& train) {
  return config_object(model, train).dump(2) + "\n";
}

std::string serialize_checkpoint(const Checkpoint& ck) {
  nlohmann::ordered_json meta;
  meta["model"] = std::string(to_string(ck.model));
  meta["config"] = config_object(ck.config, ck.train);
  meta["graph_hash"] = ck.graph_hash;
  meta["epoch"] = ck.epoch;

  BinaryWriter w;
  w.bytes(kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.str(meta.dump());
  w.u64(ck.loss_history.size());
  for (double v : ck.loss_history) w.f64(v);
  if (ck.model == ModelKind::GraphIX) {
    std::size_t count = 1;
    for (const auto& layer : ck.params.weights) count += layer.size();
    w.u64(count);
    w.matrix(ck.params.embeddings);
    for (const auto& layer : ck.params.weights) {
      for (const auto& m : layer) w.matrix(m);
    }
  } else {
    w.u64(2);
    w.matrix(ck.triplet.entities);
    w.matrix(ck.triplet.relation);
  }
  return w.buffer();
}

Checkpoint deserialize_checkpoint(std::string bytes, const std::string& source) {
  BinaryReader r(std::move(bytes), source);
  if (r.bytes(kCheckpointMagic.size()) != kCheckpointMagic) throw InputError(source + ": not a checkpoint");
  if (const auto v = r.u32(); v != kCheckpointVersion) {
    throw InputError(source + ": unsupported checkpoint version " + std::to_string(v));
  }
  Checkpoint ck;
  try {
    const auto meta = nlohmann::json::parse(r.str());
    ck.model = parse_model_kind(meta.at("model").get<std::string>());
    apply_config_object(meta.at("config"), ck.config, ck.train);
    ck.graph_hash = meta.at("graph_hash").get<std::string>();
    ck.epoch = meta.at("epoch").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(source + ": bad checkpoint metadata: " + e.what());
  }
  ck.loss_history.resize(r.u64());
  for (auto& v : ck.loss_history) v = r.f64();
  const auto count = r.u64();
  if (ck.model == ModelKind::GraphIX) {
    if (count < 1) throw InputError(source + ": checkpoint has no embedding table");
    ck.params.embeddings = r.matrix();
    const auto per_layer = (count - 1) / static_cast<std::uint64_t>(ck.config.n_layers);
    if (per_layer * static_cast<std::uint64_t>(ck.config.n_layers) != count - 1) {
      throw InputError(source + ": weight count inconsistent with n_layers");
    }
    ck.params.weights.resize(static_cast<std::size_t>(ck.config.n_layers));
    for (auto& layer : ck.params.weights) {
      for (std::uint64_t k = 0; k < per_layer; ++k) layer.push_back(r.matrix());
    }
  } else {
    if (count != 2) throw InputError(source + ": baseline checkpoint must hold 2 matrices");
    ck.triplet.entities = r.matrix();
    ck.triplet.relation = r.matrix();
  }
  if (!r.at_end()) throw InputError(source + ": trailing bytes in checkpoint");
  return ck;
}

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path) {
  BinaryWriter w;
  w.bytes(serialize_checkpoint(checkpoint));
  w.write_file(path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read checkpoint " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_checkpoint(ss.str(), path);
}

void check_graph_hash(const Checkpoint& checkpoint, const KnowledgeGraph& graph, bool force) {
  if (force) return;
  const auto hash = graph.content_hash();
  if (checkpoint.graph_hash != hash) {
    throw InputError("checkpoint was trained on graph " + checkpoint.graph_hash + " but this graph is " +
                     hash + " (use --force to override)");
  }
}

PairScorer::PairScorer(const KnowledgeGraph& graph, const Checkpoint& checkpoint) : kind_(checkpoint.model) {
  if (kind_ == ModelKind::GraphIX) {
    repr_ = Rgcn(graph, checkpoint.config).forward(checkpoint.params).output();
  } else {
    if (static_cast<std::size_t>(checkpoint.triplet.entities.rows()) != graph.n_nodes()) {
      throw InputError("baseline checkpoint does not match graph size");
    }
    repr_ = checkpoint.triplet.entities;
    relation_ = checkpoint.triplet.relation;
  }
}

double PairScorer::operator()(NodeId i, NodeId j) const {
  if (i >= repr_.rows() || j >= repr_.rows()) throw InputError("node id out of range");
  switch (kind_) {
    case ModelKind::GraphIX: return graphix::score(repr_, i, j);
    case ModelKind::TransE: return transe_score(repr_.row(i), relation_.row(0), repr_.row(j));
    case ModelKind::DistMult: return distmult_score(repr_.row(i), relation_.row(0), repr_.row(j));
  }
  return 0.0;
}

std::vector<double> PairScorer::score(std::span<const NodePair> pairs) const {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back((*this)(p.first, p.second));
  return out;
}

}  // namespace graphix
