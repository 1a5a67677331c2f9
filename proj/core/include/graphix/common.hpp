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

#ifndef GRAPHIX_COMMON_HPP_
#define GRAPHIX_COMMON_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace graphix {

/// Dense row-major matrix used for embeddings, weights and activations.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

using NodeId = std::uint32_t;

/// Unordered or ordered node pair; orientation follows the relation's kinds.
struct NodePair {
  NodeId first = 0;
  NodeId second = 0;
  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Base of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: malformed files, unknown labels, invalid configuration.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Input file that failed to parse at a specific line.
class ParseError : public InputError {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : InputError(path + ":" + std::to_string(line) + ": " + what), path_(path), line_(line) {}
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// Numerical failure at run time (non-finite values, exhausted sampling).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Number of worker threads used by row-parallel kernels. 1 is the determinism mode.
int num_threads();
void set_num_threads(int n);

/// Runs fn(begin, end) over disjoint chunks of [0, n). Chunks write disjoint outputs only.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

/// Key for hashing an ordered pair.
inline std::uint64_t pair_key(NodeId a, NodeId b) {
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

}  // namespace graphix

#endif  // GRAPHIX_COMMON_HPP_
