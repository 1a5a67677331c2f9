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

// Microbenchmarks on the desk-scale synthetic graph.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "graphix/attribution.hpp"
#include "graphix/metrics.hpp"
#include "graphix/model.hpp"
#include "graphix/synthetic.hpp"
#include "graphix/trainer.hpp"

namespace {

using namespace graphix;

const SyntheticBenchmark& bench_graph() {
  static const SyntheticBenchmark b = [] {
    SyntheticSpec s;
    s.seed = 7;
    return generate_synthetic(s);
  }();
  return b;
}

ModelConfig config(int layers) {
  ModelConfig c;
  c.n_layers = layers;
  c.seed = 1;
  return c;
}

void BM_Forward(benchmark::State& state) {
  const auto& g = bench_graph().graph;
  const auto c = config(static_cast<int>(state.range(0)));
  const Rgcn model(g, c);
  const auto p = init_params(c, g.n_nodes(), g.n_relations(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(model.forward(p).output().data());
}
BENCHMARK(BM_Forward)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  const auto& g = bench_graph().graph;
  const auto c = config(static_cast<int>(state.range(0)));
  const Rgcn model(g, c);
  const auto p = init_params(c, g.n_nodes(), g.n_relations(), 1);
  std::mt19937_64 rng(3);
  PairBatch batch;
  batch.positives = g.positives;
  batch.negatives = sample_negatives(g, g.positives, rng);
  ModelParams grads;
  for (auto _ : state) benchmark::DoNotOptimize(loss_and_gradients(model, p, batch, LossMode::PerPair, &grads));
}
BENCHMARK(BM_ForwardBackward)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_IntegratedGradients(benchmark::State& state) {
  const auto& g = bench_graph().graph;
  const auto c = config(1);
  const Rgcn model(g, c);
  const auto p = init_params(c, g.n_nodes(), g.n_relations(), 1);
  AttributionRequest req;
  req.edge = g.positives.front();
  req.steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(integrated_gradients(model, p, req).score);
}
BENCHMARK(BM_IntegratedGradients)->Arg(30)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_RocAuc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  std::vector<double> s(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = nd(rng), y[i] = static_cast<int>(i % 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(roc_auc(s, y));
    benchmark::DoNotOptimize(pr_auc(s, y));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RocAuc)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
