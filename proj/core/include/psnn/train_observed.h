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

// Maximum-likelihood training of fully observed networks: batch SGD over
// examples and online SGD with eligibility traces.

#ifndef PSNN_TRAIN_OBSERVED_H_
#define PSNN_TRAIN_OBSERVED_H_

#include <cstdint>
#include <span>
#include <vector>

#include "psnn/glm.h"
#include "psnn/raster.h"

namespace psnn {

struct TrainConfig {
  double eta = 0.05;
  double kappa = 0.5;
  int epochs = 1;
  int batch_size = 1;
  // Online mode applies the accumulated update every `period` steps.
  int period = 1;
  std::uint64_t seed = 0;
  bool shuffle = true;
  // Per-neuron mask for TrainEpochs; unset neurons are neither trained nor
  // scored. Empty trains every neuron.
  std::vector<std::uint8_t> trained;

  void Validate() const;
};

// Full-horizon gradient of log p(raster), summed over all steps.
NetworkParams LogLikelihoodGradient(const Network& network,
                                    const NetworkParams& params,
                                    const SpikeRaster& raster,
                                    double* log_likelihood = nullptr);

// params += eta * grad log p(example). Returns log p(example) before the step.
double BatchSgdStep(const Network& network, NetworkParams& params,
                    const SpikeRaster& example, double eta);

// Sums the gradients of a mini-batch before stepping.
double MiniBatchSgdStep(const Network& network, NetworkParams& params,
                        std::span<const SpikeRaster* const> batch, double eta);

// e = kappa * e + (1 - kappa) * g
void UpdateEligibility(NeuronParams& eligibility, double kappa,
                       const NeuronParams& gradient);

// Online SGD with per-neuron eligibility traces over one long example.
// Each step forms every gradient with the pre-update parameters, then
// updates, then advances the traces with the observed spikes.
class OnlineTrainer {
 public:
  OnlineTrainer(const Network& network, NetworkParams params, double eta,
                double kappa, int period = 1);

  // Consumes the spikes of all neurons at the current time and returns
  // log p(spikes | past) under the pre-update parameters.
  double Step(std::span<const std::uint8_t> spikes);
  // Clears traces, eligibilities and any pending update.
  void Reset();

  const NetworkParams& params() const { return params_; }
  const NetworkParams& eligibility() const { return eligibility_; }
  const NetworkState& state() const { return state_; }

 private:
  const Network* network_;
  NetworkParams params_;
  NetworkParams eligibility_;
  NetworkParams pending_;
  NetworkParams gradient_;
  NetworkState state_;
  double eta_;
  double kappa_;
  int period_;
  int since_update_ = 0;
  std::vector<double> scratch_;
};

struct TrainResult {
  NetworkParams params;
  // Mean per-example log-likelihood seen during each epoch.
  std::vector<double> epoch_log_likelihood;
};

// Batch SGD over a dataset of fully observed rasters. Throws a data error on
// an empty dataset.
TrainResult TrainEpochs(const Network& network, NetworkParams init,
                        std::span<const SpikeRaster> dataset,
                        const TrainConfig& config);

}  // namespace psnn

#endif  // PSNN_TRAIN_OBSERVED_H_
