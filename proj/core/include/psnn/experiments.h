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

// Experiment drivers: batch classification of rate-encoded images and online
// prediction of a streamed scalar sequence.

#ifndef PSNN_EXPERIMENTS_H_
#define PSNN_EXPERIMENTS_H_

#include <span>
#include <vector>

#include "psnn/config.h"
#include "psnn/glm.h"
#include "psnn/io.h"
#include "psnn/random.h"

namespace psnn {

inline constexpr int kTemplateLength = 25;
inline constexpr double kZeroBlockProb = 0.7;

enum class BlockKind { kZero = 0, kTemplateA = 1, kTemplateB = 2 };

struct GeneratedSequence {
  std::vector<double> values;
  std::vector<BlockKind> blocks;  // one per kTemplateLength values
};

// Concatenates length / 25 blocks: all-zero with probability zero_prob,
// otherwise template a or b with equal probability. One uniform per block.
// Throws a data error unless both templates have 25 values and length is a
// nonnegative multiple of 25.
GeneratedSequence GenSequence(std::span<const double> a,
                              std::span<const double> b, int length, Rng& rng,
                              double zero_prob = kZeroBlockProb);

// Two built-in length-25 shapes, min-max normalized to [0, 1].
std::vector<std::vector<double>> DefaultTemplates();

// Previous value quantized to the rate-coding level representative; 0 for an
// empty prefix.
double PersistentPredict(std::span<const double> prefix, int num_levels);

// Balanced two-class 16x16 images: class 0 has a bright left half, class 1 a
// bright right half, with per-pixel noise.
ImageDataset SyntheticImages(int count, Rng& rng);

// Fully connected network (observed neurons first) with banks built from the
// config, kernel durations scaled by `unit` steps.
Network BuildNetwork(const ExperimentConfig& config, double unit);
NetworkParams InitialParams(const ExperimentConfig& config,
                            const Network& network, Rng& rng);

struct BatchResult {
  CsvTable accuracy{{"T", "accuracy"}};
  // Per horizon, "epoch,loglik".
  std::vector<CsvTable> training;
  std::vector<NetworkParams> params;
  std::vector<double> accuracies;
};

// Trains one two-layer network per horizon in config.horizons and reports
// test accuracy. Reads config.data_path when set, synthetic images otherwise.
BatchResult RunBatchClassify(const ExperimentConfig& config);

struct OnlineResult {
  // "sample,mae_snn,mae_persistent,spikes": running MAE over the trailing
  // window and spikes emitted while predicting the sample.
  CsvTable metrics{{"sample", "mae_snn", "mae_persistent", "spikes"}};
  CsvTable samples{{"sample", "block", "value", "prediction", "persistent",
                    "visible_spikes", "hidden_spikes", "prediction_spikes"}};
  CsvTable signal{{"t", "learning_signal", "baseline", "hidden_spike_count"}};
  NetworkParams params;

  // Over the final mae_window samples.
  double mae_snn = 0.0;
  double mae_persistent = 0.0;
  double hidden_rate = 0.0;  // hidden spikes per neuron per training step
  double zero_block_spike_rate = 0.0;      // prediction spikes per step
  double template_block_spike_rate = 0.0;  // prediction spikes per step
  double total_prediction_spikes = 0.0;
  std::size_t clipped = 0;
};

// Streams config.num_samples values. Each value is first predicted by
// free-running a copy of the network for dt steps, then encoded and learned
// with one online variational pass over its dt steps.
OnlineResult RunOnlinePredict(const ExperimentConfig& config);

}  // namespace psnn

#endif  // PSNN_EXPERIMENTS_H_
