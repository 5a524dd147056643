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

#include "psnn/train_variational.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "psnn/error.h"
#include "psnn/train_observed.h"

namespace psnn {

void VariationalConfig::Validate() const {
  Require(eta >= 0 && eta_phi >= 0, ErrorKind::kParameter,
          "learning rates must be >= 0");
  Require(kappa >= 0 && kappa < 1, ErrorKind::kParameter,
          "kappa must lie in [0, 1)");
  Require(alpha >= 0, ErrorKind::kParameter, "alpha must be >= 0");
  Require(rate > 0 && rate < 1, ErrorKind::kParameter,
          "target rate must lie in (0, 1)");
  Require(baseline_const > 0 && baseline_const <= 1, ErrorKind::kParameter,
          "baseline constant must lie in (0, 1]");
  Require(num_samples >= 1, ErrorKind::kParameter,
          "number of hidden samples must be >= 1");
}

double StepLearningSignal(double previous, double summand, double kappa) {
  return kappa * previous + (1.0 - kappa) * summand;
}

double UpdateBaseline(double baseline, double signal, double c) {
  return (1.0 - c) * baseline + c * signal;
}

void AdvanceBaseline(LearningSignalState& state, double signal, double c) {
  const double rate =
      std::max(c, 1.0 / (static_cast<double>(state.updates) + 1.0));
  state.baseline = UpdateBaseline(state.baseline, signal, rate);
  ++state.updates;
}

double RegularizedSignalSummand(double observed_log_prob,
                                std::span<const std::uint8_t> hidden_bits,
                                std::span<const double> hidden_probs,
                                double alpha, double rate) {
  Require(rate > 0 && rate < 1, ErrorKind::kParameter,
          "target rate must lie in (0, 1)");
  Require(hidden_bits.size() == hidden_probs.size(), ErrorKind::kStructural,
          "hidden bits and probabilities differ in length");
  double penalty = 0.0;
  for (std::size_t i = 0; i < hidden_bits.size(); ++i) {
    penalty += hidden_bits[i]
                   ? std::log(hidden_probs[i] / rate)
                   : std::log((1.0 - hidden_probs[i]) / (1.0 - rate));
  }
  return observed_log_prob - alpha * penalty;
}

double RegularizedSignalSummandFromPotentials(
    double observed_log_prob, std::span<const std::uint8_t> hidden_bits,
    std::span<const double> hidden_potentials, double bandwidth, double alpha,
    double rate) {
  Require(rate > 0 && rate < 1, ErrorKind::kParameter,
          "target rate must lie in (0, 1)");
  const double log_rate = std::log(rate);
  const double log_silent = std::log1p(-rate);
  double penalty = 0.0;
  for (std::size_t i = 0; i < hidden_bits.size(); ++i) {
    penalty += CondLogProb(hidden_bits[i], hidden_potentials[i], bandwidth) -
               (hidden_bits[i] ? log_rate : log_silent);
  }
  return observed_log_prob - alpha * penalty;
}

std::vector<std::uint8_t> SampleHiddenStep(const Network& network,
                                           const NetworkParams& params,
                                           const NetworkState& state,
                                           Rng& rng) {
  const std::vector<int>& hidden = network.topology().hidden();
  std::vector<std::uint8_t> bits(hidden.size());
  for (std::size_t k = 0; k < hidden.size(); ++k) {
    const int h = hidden[k];
    bits[k] = SampleSpike(state.Potential(h, params[h]), network.bandwidth(), rng);
  }
  return bits;
}

SpikeRaster MergeRaster(const Network& network, const SpikeRaster& observed,
                        const SpikeRaster& hidden) {
  const Topology& topo = network.topology();
  Require(observed.num_neurons() == static_cast<int>(topo.observed().size()),
          ErrorKind::kStructural, "observed raster needs one row per observed neuron");
  Require(hidden.num_neurons() == static_cast<int>(topo.hidden().size()) &&
              (hidden.num_neurons() == 0 ||
               hidden.num_steps() == observed.num_steps()),
          ErrorKind::kStructural, "hidden raster shape mismatch");
  SpikeRaster full(network.num_neurons(), observed.num_steps());
  for (std::size_t k = 0; k < topo.observed().size(); ++k) {
    for (int t = 0; t < observed.num_steps(); ++t) {
      full.set(topo.observed()[k], t, observed.at(static_cast<int>(k), t));
    }
  }
  for (std::size_t k = 0; k < topo.hidden().size(); ++k) {
    for (int t = 0; t < observed.num_steps(); ++t) {
      full.set(topo.hidden()[k], t, hidden.at(static_cast<int>(k), t));
    }
  }
  return full;
}

OnlineVariationalTrainer::OnlineVariationalTrainer(
    const Network& network, NetworkParams params,
    const VariationalConfig& config)
    : network_(&network),
      config_(config),
      params_(std::move(params)),
      eligibility_(network.ZeroParams()),
      gradient_(network.ZeroParams()),
      state_(network),
      potentials_(network.num_neurons(), 0.0),
      spikes_(network.num_neurons(), 0) {
  config_.Validate();
  network.CheckShape(params_);
}

OnlineVariationalTrainer::StepReport OnlineVariationalTrainer::Step(
    std::span<const std::uint8_t> observed, Rng& rng) {
  const Topology& topo = network_->topology();
  const double bandwidth = network_->bandwidth();
  Require(observed.size() == topo.observed().size(), ErrorKind::kStructural,
          "online step needs one bit per observed neuron");
  const int n = network_->num_neurons();
  for (std::size_t k = 0; k < observed.size(); ++k) {
    spikes_[topo.observed()[k]] = observed[k];
  }
  for (int i = 0; i < n; ++i) {
    state_.GatherFeedforward(i, scratch_);
    potentials_[i] = MembranePotential(params_[i], scratch_, state_.feedback(i));
  }

  StepReport report;
  report.hidden.resize(topo.hidden().size());
  std::vector<double> hidden_potentials(topo.hidden().size());
  for (std::size_t k = 0; k < topo.hidden().size(); ++k) {
    const int h = topo.hidden()[k];
    spikes_[h] = SampleSpike(potentials_[h], bandwidth, rng);
    report.hidden[k] = spikes_[h];
    report.hidden_spikes += spikes_[h];
    hidden_potentials[k] = potentials_[h];
  }

  // Global feedback: a single reduction over the observed neurons.
  double observed_lp = 0.0;
  for (int i : topo.observed()) {
    observed_lp += CondLogProb(spikes_[i], potentials_[i], bandwidth);
  }
  const double summand =
      config_.alpha > 0
          ? RegularizedSignalSummandFromPotentials(
                observed_lp, report.hidden, hidden_potentials, bandwidth,
                config_.alpha, config_.rate)
          : observed_lp;
  signal_.signal = StepLearningSignal(signal_.signal, summand, config_.kappa);
  if (signal_.updates == 0) signal_.baseline = signal_.signal;
  const double modulator = config_.use_baseline
                               ? signal_.signal - signal_.baseline
                               : signal_.signal;
  if (config_.use_baseline) {
    AdvanceBaseline(signal_, signal_.signal, config_.baseline_const);
  }

  for (int i = 0; i < n; ++i) {
    state_.GatherFeedforward(i, scratch_);
    SetZero(gradient_[i]);
    AccumulateGradLocal(1.0, spikes_[i], potentials_[i], scratch_,
                        state_.feedback(i), bandwidth, gradient_[i]);
    UpdateEligibility(eligibility_[i], config_.kappa, gradient_[i]);
    AddScaled(params_[i],
              topo.is_hidden(i) ? config_.eta * modulator : config_.eta,
              eligibility_[i]);
  }
  state_.Advance(spikes_);

  report.learning_signal = signal_.signal;
  report.baseline = signal_.baseline;
  report.observed_log_prob = observed_lp;
  return report;
}

void OnlineVariationalTrainer::ResetTraces() {
  state_.Reset();
  SetZero(eligibility_);
}

namespace {

std::vector<std::uint8_t> HiddenMask(const Network& network) {
  std::vector<std::uint8_t> mask(network.num_neurons(), 0);
  for (int h : network.topology().hidden()) mask[h] = 1;
  return mask;
}

}  // namespace

ElboGradientEstimate EstimateElboGradient(const Network& network,
                                          const NetworkParams& params,
                                          const SpikeRaster& observed,
                                          const VariationalConfig& config,
                                          LearningSignalState& signal,
                                          Rng& rng) {
  config.Validate();
  network.CheckShape(params);
  const Topology& topo = network.topology();
  const std::vector<std::uint8_t> hidden_mask = HiddenMask(network);
  std::vector<std::uint8_t> observed_mask(hidden_mask.size());
  for (std::size_t i = 0; i < hidden_mask.size(); ++i) {
    observed_mask[i] = hidden_mask[i] ? 0 : 1;
  }

  const SpikeRaster empty_hidden(static_cast<int>(topo.hidden().size()),
                                 observed.num_steps());
  const ClampedRaster clamp = ClampedRaster::Rows(
      MergeRaster(network, observed, empty_hidden), topo.observed());
  const double log_rate = std::log(config.rate);
  const double log_silent = std::log1p(-config.rate);
  const double inv_samples = 1.0 / config.num_samples;

  ElboGradientEstimate estimate{network.ZeroParams(), 0.0};
  NetworkParams score = network.ZeroParams();
  const double baseline = signal.baseline;
  for (int s = 0; s < config.num_samples; ++s) {
    const SpikeRaster full = RollForward(network, params, clamp, rng);
    const RasterTraces traces(network, full);
    const double observed_lp = AccumulateLogLikelihoodGradient(
        network, params, traces, full, inv_samples, estimate.gradient,
        observed_mask);
    SetZero(score);
    const double hidden_lq = AccumulateLogLikelihoodGradient(
        network, params, traces, full, 1.0, score, hidden_mask);
    double learning_signal = observed_lp;
    if (config.alpha > 0) {
      double log_prior = 0.0;
      for (int h : topo.hidden()) {
        const int fired = full.RowCount(h);
        log_prior += fired * log_rate + (full.num_steps() - fired) * log_silent;
      }
      learning_signal -= config.alpha * (hidden_lq - log_prior);
    }
    const double centered =
        config.use_baseline ? learning_signal - baseline : learning_signal;
    AddScaled(estimate.gradient, centered * inv_samples, score);
    estimate.learning_signal += learning_signal * inv_samples;
  }
  signal.signal = estimate.learning_signal;
  if (config.use_baseline) {
    AdvanceBaseline(signal, estimate.learning_signal, config.baseline_const);
  }
  return estimate;
}

ElboGradientEstimate BatchDoublySgdStep(const Network& network,
                                        NetworkParams& params,
                                        const SpikeRaster& observed,
                                        const VariationalConfig& config,
                                        LearningSignalState& signal, Rng& rng) {
  ElboGradientEstimate estimate =
      EstimateElboGradient(network, params, observed, config, signal, rng);
  for (int i = 0; i < network.num_neurons(); ++i) {
    AddScaled(params[i],
              network.topology().is_hidden(i) ? config.eta_phi : config.eta,
              estimate.gradient[i]);
  }
  return estimate;
}

ElboValues ElboExhaustive(const Network& network, const NetworkParams& params,
                          const SpikeRaster& observed) {
  network.CheckShape(params);
  const Topology& topo = network.topology();
  const int num_hidden = static_cast<int>(topo.hidden().size());
  const int steps = observed.num_steps();
  const long long bits = static_cast<long long>(num_hidden) * steps;
  Require(bits <= kMaxEnumeratedHiddenBits, ErrorKind::kCapacity,
          "enumerating " + std::to_string(bits) + " hidden bits exceeds the " +
              std::to_string(kMaxEnumeratedHiddenBits) + "-bit bound");

  SpikeRaster hidden(num_hidden, steps);
  std::vector<double> log_joint;
  log_joint.reserve(std::size_t{1} << bits);
  double elbo = 0.0;
  for (std::uint64_t config = 0; config < (std::uint64_t{1} << bits); ++config) {
    for (int b = 0; b < bits; ++b) {
      hidden.set(b % num_hidden, b / num_hidden, (config >> b) & 1);
    }
    const SpikeRaster full = MergeRaster(network, observed, hidden);
    const RasterTraces traces(network, full);
    double log_px = 0.0;
    double log_q = 0.0;
    for (int i : topo.observed()) {
      log_px += NeuronLogLikelihood(network, params, traces, full, i);
    }
    for (int h : topo.hidden()) {
      log_q += NeuronLogLikelihood(network, params, traces, full, h);
    }
    // With the tied posterior, log p(x, h) - log q(h | x) = log_px.
    elbo += std::exp(log_q) * log_px;
    log_joint.push_back(log_px + log_q);
  }
  const double peak = *std::max_element(log_joint.begin(), log_joint.end());
  double sum = 0.0;
  for (double v : log_joint) sum += std::exp(v - peak);
  return {elbo, peak + std::log(sum)};
}

}  // namespace psnn
