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

#include "psnn/train_observed.h"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "psnn/error.h"
#include "psnn/random.h"

namespace psnn {

void TrainConfig::Validate() const {
  Require(eta >= 0, ErrorKind::kParameter, "learning rate must be >= 0");
  Require(kappa >= 0 && kappa < 1, ErrorKind::kParameter,
          "kappa must lie in [0, 1)");
  Require(epochs >= 0, ErrorKind::kParameter, "epochs must be >= 0");
  Require(batch_size >= 1, ErrorKind::kParameter, "batch size must be >= 1");
  Require(period >= 1, ErrorKind::kParameter, "update period must be >= 1");
}

NetworkParams LogLikelihoodGradient(const Network& network,
                                    const NetworkParams& params,
                                    const SpikeRaster& raster,
                                    double* log_likelihood) {
  NetworkParams grad = network.ZeroParams();
  const double ll = AccumulateLogLikelihoodGradient(
      network, params, RasterTraces(network, raster), raster, 1.0, grad);
  if (log_likelihood) *log_likelihood = ll;
  return grad;
}

double BatchSgdStep(const Network& network, NetworkParams& params,
                    const SpikeRaster& example, double eta) {
  double ll = 0.0;
  const NetworkParams grad = LogLikelihoodGradient(network, params, example, &ll);
  AddScaled(params, eta, grad);
  return ll;
}

double MiniBatchSgdStep(const Network& network, NetworkParams& params,
                        std::span<const SpikeRaster* const> batch, double eta) {
  NetworkParams grad = network.ZeroParams();
  double ll = 0.0;
  for (const SpikeRaster* example : batch) {
    ll += AccumulateLogLikelihoodGradient(network, params,
                                          RasterTraces(network, *example),
                                          *example, 1.0, grad);
  }
  AddScaled(params, eta, grad);
  return ll;
}

void UpdateEligibility(NeuronParams& eligibility, double kappa,
                       const NeuronParams& gradient) {
  const double fresh = 1.0 - kappa;
  eligibility.bias = kappa * eligibility.bias + fresh * gradient.bias;
  for (std::size_t k = 0; k < eligibility.feedforward.size(); ++k) {
    eligibility.feedforward[k] =
        kappa * eligibility.feedforward[k] + fresh * gradient.feedforward[k];
  }
  for (std::size_t k = 0; k < eligibility.feedback.size(); ++k) {
    eligibility.feedback[k] =
        kappa * eligibility.feedback[k] + fresh * gradient.feedback[k];
  }
}

OnlineTrainer::OnlineTrainer(const Network& network, NetworkParams params,
                             double eta, double kappa, int period)
    : network_(&network),
      params_(std::move(params)),
      eligibility_(network.ZeroParams()),
      pending_(network.ZeroParams()),
      gradient_(network.ZeroParams()),
      state_(network),
      eta_(eta),
      kappa_(kappa),
      period_(period) {
  network.CheckShape(params_);
  TrainConfig check;
  check.eta = eta;
  check.kappa = kappa;
  check.period = period;
  check.Validate();
}

double OnlineTrainer::Step(std::span<const std::uint8_t> spikes) {
  const int n = network_->num_neurons();
  Require(static_cast<int>(spikes.size()) == n, ErrorKind::kStructural,
          "online step needs one bit per neuron");
  double ll = 0.0;
  for (int i = 0; i < n; ++i) {
    state_.GatherFeedforward(i, scratch_);
    const double u =
        MembranePotential(params_[i], scratch_, state_.feedback(i));
    ll += CondLogProb(spikes[i], u, network_->bandwidth());
    SetZero(gradient_[i]);
    AccumulateGradLocal(1.0, spikes[i], u, scratch_, state_.feedback(i),
                        network_->bandwidth(), gradient_[i]);
  }
  for (int i = 0; i < n; ++i) {
    UpdateEligibility(eligibility_[i], kappa_, gradient_[i]);
    if (period_ == 1) {
      AddScaled(params_[i], eta_, eligibility_[i]);
    } else {
      AddScaled(pending_[i], eta_, eligibility_[i]);
    }
  }
  if (period_ > 1 && ++since_update_ == period_) {
    AddScaled(params_, 1.0, pending_);
    SetZero(pending_);
    since_update_ = 0;
  }
  state_.Advance(spikes);
  return ll;
}

void OnlineTrainer::Reset() {
  state_.Reset();
  SetZero(eligibility_);
  SetZero(pending_);
  since_update_ = 0;
}

TrainResult TrainEpochs(const Network& network, NetworkParams init,
                        std::span<const SpikeRaster> dataset,
                        const TrainConfig& config) {
  config.Validate();
  Require(!dataset.empty(), ErrorKind::kData, "training dataset is empty");
  network.CheckShape(init);
  Require(config.trained.empty() ||
              config.trained.size() ==
                  static_cast<std::size_t>(network.num_neurons()),
          ErrorKind::kStructural, "trained mask size does not match network");
  // Fully observed rasters never change, so their traces are computed once.
  std::vector<RasterTraces> traces;
  traces.reserve(dataset.size());
  for (const SpikeRaster& example : dataset) traces.emplace_back(network, example);

  TrainResult result{std::move(init), {}};
  Rng rng(config.seed);
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), 0);
  NetworkParams grad = network.ZeroParams();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += config.batch_size) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      SetZero(grad);
      for (std::size_t b = start; b < end; ++b) {
        const std::size_t m = order[b];
        total += AccumulateLogLikelihoodGradient(network, result.params,
                                                 traces[m], dataset[m], 1.0,
                                                 grad, config.trained);
      }
      AddScaled(result.params, config.eta, grad);
    }
    result.epoch_log_likelihood.push_back(total / dataset.size());
  }
  return result;
}

}  // namespace psnn
