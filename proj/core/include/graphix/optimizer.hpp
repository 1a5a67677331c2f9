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

#ifndef GRAPHIX_OPTIMIZER_HPP_
#define GRAPHIX_OPTIMIZER_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "graphix/common.hpp"

namespace graphix {

enum class OptimizerKind { Adam, SGD };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer_kind(std::string_view s);

struct OptimizerSettings {
  OptimizerKind kind = OptimizerKind::Adam;
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Stateful first-order optimizer over a fixed list of parameter matrices.
class Optimizer {
 public:
  explicit Optimizer(OptimizerSettings settings) : settings_(settings) {}

  /// params[k] -= update(grads[k]). Shapes must stay fixed across calls.
  void step(std::span<Matrix* const> params, std::span<const Matrix* const> grads);

 private:
  OptimizerSettings settings_;
  std::vector<Matrix> first_moment_;
  std::vector<Matrix> second_moment_;
  long steps_ = 0;
};

}  // namespace graphix

#endif  // GRAPHIX_OPTIMIZER_HPP_
