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

// Variational maximum-likelihood training for networks with hidden neurons.
//
// The variational posterior over hidden spikes is the feedforward (causal)
// distribution obtained by running the network with the observed neurons
// clamped: q(h | x) = prod_t prod_{i in H} p(h_{i,t} | u_{i,t}). Its
// parameters are the hidden neurons' own model parameters, so the learning
// signal reduces to the observed log-probability sum_t sum_{i in X}
// log p(x_{i,t} | u_{i,t}) and hidden neurons learn through a score-function
// (REINFORCE) estimator modulated by that signal.

#ifndef PSNN_TRAIN_VARIATIONAL_H_
#define PSNN_TRAIN_VARIATIONAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "psnn/glm.h"
#include "psnn/raster.h"

namespace psnn {

struct VariationalConfig {
  double eta = 0.01;      // observed (model) parameters
  double eta_phi = 0.01;  // hidden parameters in batch mode
  double kappa = 0.5;
  // KL sparsity regularization towards an i.i.d. Bernoulli(rate) prior.
  double alpha = 0.0;
  double rate = 0.1;
  bool use_baseline = true;
  double baseline_const = 0.01;
  // Hidden samples averaged per batch step.
  int num_samples = 1;

  void Validate() const;
};

struct LearningSignalState {
  double signal = 0.0;    // time-averaged learning signal
  double baseline = 0.0;  // moving average used as control variate
  // Baseline updates so far. The first 1 / c updates use rate 1 / (n + 1),
  // i.e. a plain running mean, so the average does not start from zero.
  std::int64_t updates = 0;
};

// kappa * previous + (1 - kappa) * summand
double StepLearningSignal(double previous, double summand, double kappa);

// (1 - c) * baseline + c * signal
double UpdateBaseline(double baseline, double signal, double c);
// Advances state.baseline by one warm-started moving-average update with
// rate max(c, 1 / (updates + 1)).
void AdvanceBaseline(LearningSignalState& state, double signal, double c);

// observed_log_prob - alpha * sum_{i in H} [h log(sigma / r)
//   + (1 - h) log((1 - sigma) / (1 - r))], with sigma the hidden firing
// probabilities. Throws a parameter error unless 0 < rate < 1.
double RegularizedSignalSummand(double observed_log_prob,
                                std::span<const std::uint8_t> hidden_bits,
                                std::span<const double> hidden_probs,
                                double alpha, double rate);
// Same quantity from hidden potentials; finite for any finite potential.
double RegularizedSignalSummandFromPotentials(
    double observed_log_prob, std::span<const std::uint8_t> hidden_bits,
    std::span<const double> hidden_potentials, double bandwidth, double alpha,
    double rate);

// Samples h_t for the hidden neurons (topology order) from the state; one
// uniform draw per hidden neuron.
std::vector<std::uint8_t> SampleHiddenStep(const Network& network,
                                           const NetworkParams& params,
                                           const NetworkState& state, Rng& rng);

// Builds the full raster from observed rows (topology().observed() order) and
// hidden rows (topology().hidden() order).
SpikeRaster MergeRaster(const Network& network, const SpikeRaster& observed,
                        const SpikeRaster& hidden);

// Online doubly stochastic SGD with eligibility traces and a global,
// time-averaged learning signal.
class OnlineVariationalTrainer {
 public:
  struct StepReport {
    double learning_signal = 0.0;
    double baseline = 0.0;
    double observed_log_prob = 0.0;
    int hidden_spikes = 0;
    std::vector<std::uint8_t> hidden;
  };

  OnlineVariationalTrainer(const Network& network, NetworkParams params,
                           const VariationalConfig& config);

  // `observed` carries one bit per observed neuron in topology order.
  StepReport Step(std::span<const std::uint8_t> observed, Rng& rng);
  // Clears traces and eligibilities; the learning signal and baseline persist.
  void ResetTraces();

  const NetworkParams& params() const { return params_; }
  const NetworkParams& eligibility() const { return eligibility_; }
  const NetworkState& state() const { return state_; }
  const LearningSignalState& signal() const { return signal_; }

 private:
  const Network* network_;
  VariationalConfig config_;
  NetworkParams params_;
  NetworkParams eligibility_;
  NetworkParams gradient_;
  NetworkState state_;
  LearningSignalState signal_;
  std::vector<double> potentials_;
  std::vector<std::uint8_t> spikes_;
  std::vector<double> scratch_;
};

struct ElboGradientEstimate {
  // Observed neurons: grad log p(x, h). Hidden neurons: centered learning
  // signal times grad log q(h | x).
  NetworkParams gradient;
  double learning_signal = 0.0;  // mean over samples, before centering
};

// Single- (or few-) sample Monte Carlo estimate on one example. `observed`
// has the observed rows in topology order. Updates the baseline in `signal`
// after use when enabled.
ElboGradientEstimate EstimateElboGradient(const Network& network,
                                          const NetworkParams& params,
                                          const SpikeRaster& observed,
                                          const VariationalConfig& config,
                                          LearningSignalState& signal, Rng& rng);

// Applies eta to observed neurons and eta_phi to hidden neurons at the end of
// the horizon.
ElboGradientEstimate BatchDoublySgdStep(const Network& network,
                                        NetworkParams& params,
                                        const SpikeRaster& observed,
                                        const VariationalConfig& config,
                                        LearningSignalState& signal, Rng& rng);

struct ElboValues {
  double elbo = 0.0;
  double log_likelihood = 0.0;
};

inline constexpr int kMaxEnumeratedHiddenBits = 20;

// Exact ELBO and marginal log-likelihood by enumerating every hidden raster.
// Throws a capacity error when N_H * (T + 1) exceeds kMaxEnumeratedHiddenBits.
ElboValues ElboExhaustive(const Network& network, const NetworkParams& params,
                          const SpikeRaster& observed);

}  // namespace psnn

#endif  // PSNN_TRAIN_VARIATIONAL_H_
