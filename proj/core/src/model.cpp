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

#include "graphix/model.hpp"

#include <cmath>

namespace graphix {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::GraphIX: return "graphix";
    case ModelKind::TransE: return "transe";
    case ModelKind::DistMult: return "distmult";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view s) {
  if (s == "graphix") return ModelKind::GraphIX;
  if (s == "transe") return ModelKind::TransE;
  if (s == "distmult") return ModelKind::DistMult;
  throw InputError("unknown model '" + std::string(s) + "' (expected graphix, transe or distmult)");
}

void ModelConfig::validate() const {
  if (embed_dim <= 0 || out_dim <= 0) throw InputError("embedding dimensions must be positive");
  if (embed_dim != out_dim) throw InputError("embed_dim and out_dim must be equal");
  if (n_layers < 1) throw InputError("n_layers must be at least 1");
}

void TrainConfig::validate() const {
  if (epochs < 0) throw InputError("epochs must be non-negative");
  if (!(learning_rate > 0.0)) throw InputError("learning_rate must be positive");
  if (!(validation_fraction >= 0.0 && validation_fraction < 1.0)) {
    throw InputError("validation_fraction must lie in [0, 1)");
  }
  if (early_stop_patience < 0) throw InputError("early_stop_patience must be non-negative");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0 && adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw InputError("adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw InputError("adam_eps must be positive");
}

OptimizerSettings TrainConfig::optimizer_settings() const {
  return {optimizer, learning_rate, adam_beta1, adam_beta2, adam_eps};
}

ModelParams ModelParams::zeros_like() const {
  ModelParams z;
  z.embeddings = Matrix::Zero(embeddings.rows(), embeddings.cols());
  z.weights.resize(weights.size());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (const auto& w : weights[l]) z.weights[l].push_back(Matrix::Zero(w.rows(), w.cols()));
  }
  return z;
}

bool ModelParams::all_finite() const {
  if (!embeddings.allFinite()) return false;
  for (const auto& layer : weights) {
    for (const auto& w : layer) {
      if (!w.allFinite()) return false;
    }
  }
  return true;
}

ModelParams init_params(const ModelConfig& config, std::size_t n_nodes, std::size_t n_relations,
                        std::uint64_t seed) {
  config.validate();
  if (n_nodes == 0) throw InputError("cannot initialize parameters for an empty graph");
  std::mt19937_64 rng(seed);
  const double c = config.embed_dim;
  const double d = config.out_dim;

  ModelParams p;
  std::uniform_real_distribution<double> emb(-1.0 / std::sqrt(c), 1.0 / std::sqrt(c));
  p.embeddings.resize(static_cast<Eigen::Index>(n_nodes), config.embed_dim);
  for (Eigen::Index i = 0; i < p.embeddings.size(); ++i) p.embeddings.data()[i] = emb(rng);

  p.weights.resize(static_cast<std::size_t>(config.n_layers));
  for (int l = 0; l < config.n_layers; ++l) {
    const double fan_in = l == 0 ? c : d;
    const double bound = std::sqrt(6.0 / (fan_in + d));
    std::uniform_real_distribution<double> glorot(-bound, bound);
    for (std::size_t r = 0; r < n_relations; ++r) {
      Matrix w(static_cast<Eigen::Index>(fan_in), config.out_dim);
      for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = glorot(rng);
      p.weights[static_cast<std::size_t>(l)].push_back(std::move(w));
    }
  }
  return p;
}

Rgcn::Rgcn(const KnowledgeGraph& graph, ModelConfig config) : graph_(&graph), config_(config) {
  config_.validate();
  if (config_.normalize_adjacency) normalized_ = graph.with_normalized_adjacency();
}

void Rgcn::check_shapes(const ModelParams& params) const {
  const auto& g = graph();
  if (static_cast<std::size_t>(params.embeddings.rows()) != g.n_nodes() ||
      params.embeddings.cols() != config_.embed_dim) {
    throw InputError("embedding table shape does not match graph and config");
  }
  if (params.weights.size() != static_cast<std::size_t>(config_.n_layers)) {
    throw InputError("parameter layer count does not match config");
  }
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (params.weights[l].size() != g.n_relations()) {
      throw InputError("weight count does not match the graph's relation count");
    }
    const auto rows = l == 0 ? config_.embed_dim : config_.out_dim;
    for (const auto& w : params.weights[l]) {
      if (w.rows() != rows || w.cols() != config_.out_dim) throw InputError("weight matrix shape mismatch");
    }
  }
}

ForwardCache Rgcn::forward(const ModelParams& params) const {
  check_shapes(params);
  const auto& g = graph();
  const auto n = static_cast<Eigen::Index>(g.n_nodes());
  ForwardCache cache;
  cache.activations.reserve(params.weights.size() + 1);
  cache.activations.push_back(params.embeddings);
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    Matrix z = Matrix::Zero(n, config_.out_dim);
    {
      const Matrix& x = cache.activations.back();
      for (std::size_t r = 0; r < g.relations.size(); ++r) {
        Matrix xw = x * params.weights[l][r];
        if (g.relations[r].kind == RelationKind::SelfLoop) {
          z += xw;
        } else {
          g.relations[r].adjacency.multiply_add(xw, z);
        }
      }
    }
    Matrix h = z.array().tanh().matrix();
    if (!h.allFinite()) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!h.row(i).allFinite()) {
          throw NumericError("non-finite activation at layer " + std::to_string(l + 1) + ", node " +
                             g.labels.label(static_cast<NodeId>(i)) + " (row " + std::to_string(i) + ")");
        }
      }
    }
    cache.activations.push_back(std::move(h));
  }
  return cache;
}

ModelParams Rgcn::backward(const ModelParams& params, const ForwardCache& cache,
                           const Matrix& output_grad) const {
  const auto& g = graph();
  ModelParams grads = params.zeros_like();
  Matrix grad = output_grad;
  for (std::size_t l = params.weights.size(); l-- > 0;) {
    const Matrix& x = cache.activations[l];
    const Matrix& h = cache.activations[l + 1];
    // d tanh(z) / dz = 1 - tanh(z)^2
    const Matrix grad_z = (grad.array() * (1.0 - h.array().square())).matrix();
    Matrix grad_x = Matrix::Zero(x.rows(), x.cols());
    for (std::size_t r = 0; r < g.relations.size(); ++r) {
      // A_r is symmetric, so A_r^T grad_z = A_r grad_z.
      const bool self = g.relations[r].kind == RelationKind::SelfLoop;
      const Matrix propagated = self ? grad_z : g.relations[r].adjacency.multiply(grad_z);
      grads.weights[l][r].noalias() = x.transpose() * propagated;
      grad_x.noalias() += propagated * params.weights[l][r].transpose();
    }
    grad = std::move(grad_x);
  }
  grads.embeddings = std::move(grad);
  return grads;
}

double score(const Matrix& h, NodeId i, NodeId j) { return h.row(i).dot(h.row(j)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double pair_loss(double f_pos, double f_neg) { return -std::log(sigmoid(f_pos - f_neg) + kLossEpsilon); }

std::string_view to_string(LossMode mode) {
  return mode == LossMode::PerPair ? "per_pair" : "literal_sum";
}

LossMode parse_loss_mode(std::string_view s) {
  if (s == "per_pair") return LossMode::PerPair;
  if (s == "literal_sum") return LossMode::LiteralSum;
  throw InputError("unknown loss_mode '" + std::string(s) + "'");
}

ScoreLoss ranking_loss(std::span<const double> pos_scores, std::span<const double> neg_scores,
                       LossMode mode) {
  ScoreLoss out;
  out.pos_coef.assign(pos_scores.size(), 0.0);
  out.neg_coef.assign(neg_scores.size(), 0.0);
  // d/dx of -ln(sigmoid(x) + eps) = -sigmoid(x)(1 - sigmoid(x)) / (sigmoid(x) + eps)
  auto dloss = [](double x) {
    const double s = sigmoid(x);
    return -s * (1.0 - s) / (s + kLossEpsilon);
  };
  if (mode == LossMode::PerPair) {
    if (pos_scores.size() != neg_scores.size()) {
      throw InputError("per-pair loss needs as many negatives as positives");
    }
    if (pos_scores.empty()) return out;
    const double inv_n = 1.0 / static_cast<double>(pos_scores.size());
    for (std::size_t k = 0; k < pos_scores.size(); ++k) {
      const double diff = pos_scores[k] - neg_scores[k];
      out.loss += pair_loss(pos_scores[k], neg_scores[k]);
      const double c = dloss(diff) * inv_n;
      out.pos_coef[k] = c;
      out.neg_coef[k] = -c;
    }
    out.loss *= inv_n;
    return out;
  }
  // sum_p sum_n (f_p - f_n) = |N| sum f_p - |P| sum f_n
  const double np = static_cast<double>(pos_scores.size());
  const double nn = static_cast<double>(neg_scores.size());
  double sum_pos = 0.0, sum_neg = 0.0;
  for (double f : pos_scores) sum_pos += f;
  for (double f : neg_scores) sum_neg += f;
  const double total = nn * sum_pos - np * sum_neg;
  out.loss = -std::log(sigmoid(total) + kLossEpsilon);
  const double c = dloss(total);
  std::fill(out.pos_coef.begin(), out.pos_coef.end(), c * nn);
  std::fill(out.neg_coef.begin(), out.neg_coef.end(), -c * np);
  return out;
}

double batch_loss(const Matrix& h, const PairBatch& batch, LossMode mode, Matrix* output_grad) {
  std::vector<double> fp, fn;
  fp.reserve(batch.positives.size());
  fn.reserve(batch.negatives.size());
  for (const auto& p : batch.positives) fp.push_back(score(h, p.first, p.second));
  for (const auto& p : batch.negatives) fn.push_back(score(h, p.first, p.second));
  const auto loss = ranking_loss(fp, fn, mode);
  if (output_grad) {
    output_grad->setZero(h.rows(), h.cols());
    auto accumulate = [&](const std::vector<NodePair>& pairs, const std::vector<double>& coef) {
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        output_grad->row(i) += coef[k] * h.row(j);
        output_grad->row(j) += coef[k] * h.row(i);
      }
    };
    accumulate(batch.positives, loss.pos_coef);
    accumulate(batch.negatives, loss.neg_coef);
  }
  return loss.loss;
}

double loss_and_gradients(const Rgcn& model, const ModelParams& params, const PairBatch& batch,
                          LossMode mode, ModelParams* grads) {
  const auto cache = model.forward(params);
  Matrix output_grad;
  const double loss = batch_loss(cache.output(), batch, mode, grads ? &output_grad : nullptr);
  if (grads) *grads = model.backward(params, cache, output_grad);
  return loss;
}

NegativeSampler::NegativeSampler(const KnowledgeGraph& graph) {
  const auto [a, b] = relation_endpoints(graph.target);
  left_ = graph.nodes_of_kind(a);
  right_ = graph.nodes_of_kind(b);
  symmetric_ = a == b;
}

std::vector<NodePair> NegativeSampler::sample(const PairSet& exclude, std::size_t count,
                                              std::mt19937_64& rng) const {
  std::vector<NodePair> out;
  if (count == 0) return out;
  if (left_.empty() || right_.empty()) throw NumericError("no candidate nodes for negative sampling");
  out.reserve(count);
  std::uniform_int_distribution<std::size_t> pick_left(0, left_.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_right(0, right_.size() - 1);
  for (std::size_t slot = 0; slot < count; ++slot) {
    bool done = false;
    for (int attempt = 0; attempt < kRetryCap && !done; ++attempt) {
      NodePair p{left_[pick_left(rng)], right_[pick_right(rng)]};
      if (symmetric_) {
        if (p.first == p.second) continue;
        if (p.second < p.first) std::swap(p.first, p.second);
      }
      if (exclude.contains(p)) continue;
      out.push_back(p);
      done = true;
    }
    if (!done) {
      throw NumericError("negative sampling exhausted " + std::to_string(kRetryCap) +
                         " draws for one slot; target relation too dense");
    }
  }
  return out;
}

std::vector<NodePair> sample_negatives(const KnowledgeGraph& graph, std::span<const NodePair> positives,
                                       std::mt19937_64& rng) {
  const PairSet known(graph.target, positives);
  return NegativeSampler(graph).sample(known, positives.size(), rng);
}

}  // namespace graphix
