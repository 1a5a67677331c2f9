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

#include "graphix/optimizer.hpp"

#include <cmath>

namespace graphix {

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::Adam ? "adam" : "sgd"; }

OptimizerKind parse_optimizer_kind(std::string_view s) {
  if (s == "adam" || s == "Adam") return OptimizerKind::Adam;
  if (s == "sgd" || s == "SGD") return OptimizerKind::SGD;
  throw InputError("unknown optimizer '" + std::string(s) + "'");
}

void Optimizer::step(std::span<Matrix* const> params, std::span<const Matrix* const> grads) {
  if (params.size() != grads.size()) throw Error("optimizer: parameter/gradient count mismatch");
  const double lr = settings_.learning_rate;
  if (settings_.kind == OptimizerKind::SGD) {
    for (std::size_t k = 0; k < params.size(); ++k) *params[k] -= lr * *grads[k];
    return;
  }
  if (first_moment_.empty()) {
    for (const auto* p : params) {
      first_moment_.push_back(Matrix::Zero(p->rows(), p->cols()));
      second_moment_.push_back(Matrix::Zero(p->rows(), p->cols()));
    }
  }
  ++steps_;
  const double b1 = settings_.beta1;
  const double b2 = settings_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    auto& m = first_moment_[k];
    auto& v = second_moment_[k];
    const auto& g = *grads[k];
    m = b1 * m + (1.0 - b1) * g;
    v = b2 * v + (1.0 - b2) * g.cwiseProduct(g);
    params[k]->array() -=
        lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + settings_.eps);
  }
}

}  // namespace graphix
