// Copyright 2026 The PSNN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include "psnn/glm.h"
#include "psnn/kernels.h"
#include "psnn/random.h"
#include "psnn/train_observed.h"
#include "psnn/train_variational.h"

namespace psnn {
namespace {

BasisBank Bank(int duration, BankRole role) {
  std::vector<double> durations;
  for (int k = 1; k <= 5; ++k) durations.push_back(duration * k / 5.0);
  return MakeRaisedCosineBank(durations, role);
}

SpikeRaster RandomRaster(int neurons, int steps, double p, Rng& rng) {
  SpikeRaster raster(neurons, steps);
  for (int i = 0; i < neurons; ++i) {
    for (int t = 0; t < steps; ++t) raster.set(i, t, Bernoulli(p, rng));
  }
  return raster;
}

void BM_FilterTraces(benchmark::State& state) {
  const BasisBank bank = Bank(static_cast<int>(state.range(0)), BankRole::kFeedforward);
  Rng rng(1);
  std::vector<std::uint8_t> history(bank.duration());
  for (auto& bit : history) bit = Bernoulli(0.2, rng);
  for (auto _ : state) benchmark::DoNotOptimize(FilterTraces(bank, history));
}
BENCHMARK(BM_FilterTraces)->Arg(10)->Arg(50)->Arg(250);

void BM_LogLikelihoodGradient(benchmark::State& state) {
  const int neurons = static_cast<int>(state.range(0));
  const Network network(Topology::FullyConnected(neurons, 0),
                        Bank(50, BankRole::kFeedforward),
                        Bank(50, BankRole::kFeedback));
  Rng rng(2);
  const NetworkParams params = network.NormalParams(0.0, 0.1, rng);
  const SpikeRaster raster = RandomRaster(neurons, 200, 0.1, rng);
  for (auto _ : state) {
    double ll = 0.0;
    benchmark::DoNotOptimize(LogLikelihoodGradient(network, params, raster, &ll));
  }
}
BENCHMARK(BM_LogLikelihoodGradient)->Arg(4)->Arg(16);

void BM_OnlineVariationalStep(benchmark::State& state) {
  const Network network(Topology::FullyConnected(9, 2),
                        Bank(50, BankRole::kFeedforward),
                        Bank(50, BankRole::kFeedback));
  Rng rng(3);
  OnlineVariationalTrainer trainer(network, network.NormalParams(0.0, 0.1, rng),
                                   VariationalConfig{});
  std::vector<std::uint8_t> observed(9);
  for (auto _ : state) {
    for (auto& bit : observed) bit = Bernoulli(0.1, rng);
    benchmark::DoNotOptimize(trainer.Step(observed, rng));
  }
}
BENCHMARK(BM_OnlineVariationalStep);

}  // namespace
}  // namespace psnn

BENCHMARK_MAIN();
