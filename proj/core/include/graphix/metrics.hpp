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

// Threshold-free ranking metrics.
//
// ROC-AUC is the Mann-Whitney statistic: the probability that a random
// positive outscores a random negative, ties counted one half.
//
// PR-AUC follows the average-precision convention (step integration, no
// trapezoids). Scores are visited in descending order and grouped by distinct
// value; each group contributes (recall gain) x (precision after the group):
//
//   AP = sum_t (R_t - R_{t-1}) P_t
//
// Without ties this is the mean of precision@k over the ranks k of positives.

#ifndef GRAPHIX_METRICS_HPP_
#define GRAPHIX_METRICS_HPP_

#include <span>
#include <vector>

#include "graphix/common.hpp"

namespace graphix {

/// Metric undefined for the given labels (e.g. a single class).
class MetricError : public Error {
 public:
  using Error::Error;
};

double roc_auc(std::span<const double> scores, std::span<const int> labels);
double pr_auc(std::span<const double> scores, std::span<const int> labels);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1); 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

}  // namespace graphix

#endif  // GRAPHIX_METRICS_HPP_
