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

#include "psnn/glm.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "psnn/error.h"

namespace psnn {

Topology::Topology(std::vector<std::vector<int>> presynaptic,
                   std::vector<int> hidden)
    : presynaptic_(std::move(presynaptic)) {
  const int n = num_neurons();
  is_hidden_.assign(n, 0);
  for (int h : hidden) {
    Require(h >= 0 && h < n, ErrorKind::kStructural,
            "hidden index " + std::to_string(h) + " out of range");
    Require(!is_hidden_[h], ErrorKind::kStructural,
            "duplicate hidden index " + std::to_string(h));
    is_hidden_[h] = 1;
  }
  for (int i = 0; i < n; ++i) {
    (is_hidden_[i] ? hidden_ : observed_).push_back(i);
    std::vector<std::uint8_t> seen(n, 0);
    for (int j : presynaptic_[i]) {
      Require(j >= 0 && j < n, ErrorKind::kStructural,
              "presynaptic index " + std::to_string(j) + " out of range");
      Require(j != i, ErrorKind::kStructural,
              "neuron " + std::to_string(i) +
                  " lists itself as presynaptic; use the feedback kernel");
      Require(!seen[j], ErrorKind::kStructural,
              "duplicate synapse " + std::to_string(j) + "->" +
                  std::to_string(i));
      seen[j] = 1;
    }
  }
}

Topology Topology::FullyConnected(int num_observed, int num_hidden) {
  const int n = num_observed + num_hidden;
  Require(num_observed >= 0 && num_hidden >= 0 && n >= 1,
          ErrorKind::kStructural, "network needs at least one neuron");
  std::vector<std::vector<int>> pre(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j != i) pre[i].push_back(j);
    }
  }
  std::vector<int> hidden;
  for (int h = num_observed; h < n; ++h) hidden.push_back(h);
  return Topology(std::move(pre), std::move(hidden));
}

Topology Topology::TwoLayer(int num_inputs, int num_outputs) {
  Require(num_inputs >= 1 && num_outputs >= 1, ErrorKind::kStructural,
          "two-layer network needs inputs and outputs");
  std::vector<std::vector<int>> pre(num_inputs + num_outputs);
  for (int o = 0; o < num_outputs; ++o) {
    for (int j = 0; j < num_inputs; ++j) pre[num_inputs + o].push_back(j);
  }
  return Topology(std::move(pre), {});
}

void AddScaled(NeuronParams& y, double scale, const NeuronParams& x) {
  y.bias += scale * x.bias;
  for (std::size_t k = 0; k < y.feedforward.size(); ++k) {
    y.feedforward[k] += scale * x.feedforward[k];
  }
  for (std::size_t k = 0; k < y.feedback.size(); ++k) {
    y.feedback[k] += scale * x.feedback[k];
  }
}

void AddScaled(NetworkParams& y, double scale, const NetworkParams& x) {
  for (std::size_t i = 0; i < y.size(); ++i) AddScaled(y[i], scale, x[i]);
}

void SetZero(NeuronParams& p) {
  p.bias = 0.0;
  std::fill(p.feedforward.begin(), p.feedforward.end(), 0.0);
  std::fill(p.feedback.begin(), p.feedback.end(), 0.0);
}

void SetZero(NetworkParams& p) {
  for (NeuronParams& n : p) SetZero(n);
}

std::vector<double> Flatten(const NetworkParams& params) {
  std::vector<double> flat;
  for (const NeuronParams& p : params) {
    flat.push_back(p.bias);
    flat.insert(flat.end(), p.feedforward.begin(), p.feedforward.end());
    flat.insert(flat.end(), p.feedback.begin(), p.feedback.end());
  }
  return flat;
}

void Unflatten(std::span<const double> flat, NetworkParams& params) {
  std::size_t total = 0;
  for (const NeuronParams& p : params) total += p.size();
  Require(flat.size() == total, ErrorKind::kStructural,
          "parameter vector has " + std::to_string(flat.size()) +
              " entries, expected " + std::to_string(total));
  std::size_t pos = 0;
  for (NeuronParams& p : params) {
    p.bias = flat[pos++];
    for (double& w : p.feedforward) w = flat[pos++];
    for (double& w : p.feedback) w = flat[pos++];
  }
}

Network::Network(Topology topology, BasisBank feedforward, BasisBank feedback,
                 double bandwidth)
    : topology_(std::move(topology)),
      feedforward_(std::move(feedforward)),
      feedback_(std::move(feedback)),
      bandwidth_(bandwidth) {
  Require(bandwidth_ > 0, ErrorKind::kParameter, "bandwidth must be > 0");
  Require(feedforward_.size() >= 1 && feedback_.size() >= 1,
          ErrorKind::kParameter, "network needs nonempty basis banks");
}

int Network::memory() const {
  return std::max(feedforward_.duration(), feedback_.duration());
}

NetworkParams Network::ZeroParams() const {
  NetworkParams params(num_neurons());
  for (int i = 0; i < num_neurons(); ++i) {
    params[i].feedforward.assign(
        topology_.presynaptic(i).size() * feedforward_.size(), 0.0);
    params[i].feedback.assign(feedback_.size(), 0.0);
  }
  return params;
}

namespace {

template <typename Draw>
NetworkParams FillParams(NetworkParams params, Draw draw) {
  for (NeuronParams& p : params) {
    p.bias = draw();
    for (double& w : p.feedforward) w = draw();
    for (double& w : p.feedback) w = draw();
  }
  return params;
}

}  // namespace

NetworkParams Network::UniformParams(double lo, double hi, Rng& rng) const {
  return FillParams(ZeroParams(),
                    [&] { return lo + (hi - lo) * UniformUnit(rng); });
}

NetworkParams Network::NormalParams(double mean, double stddev,
                                    Rng& rng) const {
  std::normal_distribution<double> normal(mean, stddev);
  return FillParams(ZeroParams(), [&] { return normal(rng); });
}

void Network::CheckShape(const NetworkParams& params) const {
  Require(static_cast<int>(params.size()) == num_neurons(),
          ErrorKind::kStructural, "parameter count does not match neurons");
  for (int i = 0; i < num_neurons(); ++i) {
    Require(params[i].feedforward.size() ==
                    topology_.presynaptic(i).size() * feedforward_.size() &&
                static_cast<int>(params[i].feedback.size()) == feedback_.size(),
            ErrorKind::kStructural,
            "parameter shape mismatch at neuron " + std::to_string(i));
  }
}

double LogSigmoid(double x) {
  return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

double FiringProb(double potential, double bandwidth) {
  Require(bandwidth > 0, ErrorKind::kParameter, "bandwidth must be > 0");
  const double x = potential / bandwidth;
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::uint8_t SampleSpike(double potential, double bandwidth, Rng& rng) {
  return Bernoulli(FiringProb(potential, bandwidth), rng) ? 1 : 0;
}

double CondLogProb(std::uint8_t spike, double potential, double bandwidth) {
  const double x = potential / bandwidth;
  return spike ? LogSigmoid(x) : LogSigmoid(-x);
}

double MembranePotential(const NeuronParams& params,
                         std::span<const double> ff_traces,
                         std::span<const double> fb_trace) {
  Require(ff_traces.size() == params.feedforward.size() &&
              fb_trace.size() == params.feedback.size(),
          ErrorKind::kStructural, "trace and weight dimensions differ");
  double u = params.bias;
  for (std::size_t k = 0; k < ff_traces.size(); ++k) {
    u += params.feedforward[k] * ff_traces[k];
  }
  for (std::size_t k = 0; k < fb_trace.size(); ++k) {
    u += params.feedback[k] * fb_trace[k];
  }
  return u;
}

void AccumulateGradLocal(double scale, std::uint8_t spike, double potential,
                         std::span<const double> ff_traces,
                         std::span<const double> fb_trace, double bandwidth,
                         NeuronParams& grad) {
  const double err =
      scale * (spike - FiringProb(potential, bandwidth)) / bandwidth;
  grad.bias += err;
  for (std::size_t k = 0; k < ff_traces.size(); ++k) {
    grad.feedforward[k] += ff_traces[k] * err;
  }
  for (std::size_t k = 0; k < fb_trace.size(); ++k) {
    grad.feedback[k] += fb_trace[k] * err;
  }
}

NeuronParams GradLocal(const NeuronParams& params, std::uint8_t spike,
                       double potential, std::span<const double> ff_traces,
                       std::span<const double> fb_trace, double bandwidth) {
  NeuronParams grad{0.0, std::vector<double>(params.feedforward.size(), 0.0),
                    std::vector<double>(params.feedback.size(), 0.0)};
  AccumulateGradLocal(1.0, spike, potential, ff_traces, fb_trace, bandwidth,
                      grad);
  return grad;
}

RasterTraces::RasterTraces(const Network& network, const SpikeRaster& raster)
    : num_steps_(raster.num_steps()),
      k_ff_(network.feedforward_bank().size()),
      k_fb_(network.feedback_bank().size()),
      zeros_(std::max(k_ff_, k_fb_), 0.0) {
  Require(raster.num_neurons() == network.num_neurons(),
          ErrorKind::kStructural, "raster has " +
                                      std::to_string(raster.num_neurons()) +
                                      " neurons, network has " +
                                      std::to_string(network.num_neurons()));
  const int n = raster.num_neurons();
  ff_.assign(static_cast<std::size_t>(n) * num_steps_ * k_ff_, 0.0);
  fb_.assign(static_cast<std::size_t>(n) * num_steps_ * k_fb_, 0.0);
  const BasisBank& ffb = network.feedforward_bank();
  const BasisBank& fbb = network.feedback_bank();
  // Scatter each spike forward into the traces it influences.
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < num_steps_; ++s) {
      if (!raster.at(i, s)) continue;
      const int ff_end = std::min(num_steps_, s + ffb.duration());
      for (int t = s; t < ff_end; ++t) {
        double* out = &ff_[(static_cast<std::size_t>(i) * num_steps_ + t) * k_ff_];
        for (int k = 0; k < k_ff_; ++k) out[k] += ffb.at(k, t - s);
      }
      const int fb_end = std::min(num_steps_, s + fbb.duration());
      for (int t = s; t < fb_end; ++t) {
        double* out = &fb_[(static_cast<std::size_t>(i) * num_steps_ + t) * k_fb_];
        for (int k = 0; k < k_fb_; ++k) out[k] += fbb.at(k, t - s);
      }
    }
  }
}

std::span<const double> RasterTraces::feedforward(int j, int t) const {
  if (t < 0) return {zeros_.data(), static_cast<std::size_t>(k_ff_)};
  return {&ff_[(static_cast<std::size_t>(j) * num_steps_ + t) * k_ff_],
          static_cast<std::size_t>(k_ff_)};
}

std::span<const double> RasterTraces::feedback(int i, int t) const {
  if (t < 0) return {zeros_.data(), static_cast<std::size_t>(k_fb_)};
  return {&fb_[(static_cast<std::size_t>(i) * num_steps_ + t) * k_fb_],
          static_cast<std::size_t>(k_fb_)};
}

void RasterTraces::GatherFeedforward(const Topology& topology, int i, int t,
                                     std::vector<double>& out) const {
  out.clear();
  for (int j : topology.presynaptic(i)) {
    std::span<const double> tr = feedforward(j, t);
    out.insert(out.end(), tr.begin(), tr.end());
  }
}

double NeuronLogLikelihood(const Network& network, const NetworkParams& params,
                           const RasterTraces& traces,
                           const SpikeRaster& raster, int neuron) {
  std::vector<double> ff;
  double total = 0.0;
  for (int t = 0; t < raster.num_steps(); ++t) {
    traces.GatherFeedforward(network.topology(), neuron, t - 1, ff);
    const double u =
        MembranePotential(params[neuron], ff, traces.feedback(neuron, t - 1));
    total += CondLogProb(raster.at(neuron, t), u, network.bandwidth());
  }
  return total;
}

double LogLikelihood(const Network& network, const NetworkParams& params,
                     const RasterTraces& traces, const SpikeRaster& raster) {
  network.CheckShape(params);
  double total = 0.0;
  for (int i = 0; i < network.num_neurons(); ++i) {
    total += NeuronLogLikelihood(network, params, traces, raster, i);
  }
  return total;
}

double LogLikelihood(const Network& network, const NetworkParams& params,
                     const SpikeRaster& raster) {
  return LogLikelihood(network, params, RasterTraces(network, raster), raster);
}

double AccumulateLogLikelihoodGradient(const Network& network,
                                       const NetworkParams& params,
                                       const RasterTraces& traces,
                                       const SpikeRaster& raster, double scale,
                                       NetworkParams& grad,
                                       std::span<const std::uint8_t> include) {
  network.CheckShape(params);
  std::vector<double> ff;
  double total = 0.0;
  for (int i = 0; i < network.num_neurons(); ++i) {
    if (!include.empty() && !include[i]) continue;
    for (int t = 0; t < raster.num_steps(); ++t) {
      traces.GatherFeedforward(network.topology(), i, t - 1, ff);
      std::span<const double> fb = traces.feedback(i, t - 1);
      const double u = MembranePotential(params[i], ff, fb);
      const std::uint8_t s = raster.at(i, t);
      total += CondLogProb(s, u, network.bandwidth());
      AccumulateGradLocal(scale, s, u, ff, fb, network.bandwidth(), grad[i]);
    }
  }
  return total;
}

NetworkState::NetworkState(const Network& network)
    : network_(&network),
      windows_(network.num_neurons(), SpikeWindow(network.memory())),
      ff_(static_cast<std::size_t>(network.num_neurons()) *
              network.feedforward_bank().size(),
          0.0),
      fb_(static_cast<std::size_t>(network.num_neurons()) *
              network.feedback_bank().size(),
          0.0) {}

std::span<const double> NetworkState::feedforward(int j) const {
  const std::size_t k = network_->feedforward_bank().size();
  return {&ff_[j * k], k};
}

std::span<const double> NetworkState::feedback(int i) const {
  const std::size_t k = network_->feedback_bank().size();
  return {&fb_[i * k], k};
}

void NetworkState::GatherFeedforward(int i, std::vector<double>& out) const {
  out.clear();
  for (int j : network_->topology().presynaptic(i)) {
    std::span<const double> tr = feedforward(j);
    out.insert(out.end(), tr.begin(), tr.end());
  }
}

double NetworkState::Potential(int i, const NeuronParams& params) const {
  std::vector<double> ff;
  GatherFeedforward(i, ff);
  return MembranePotential(params, ff, feedback(i));
}

void NetworkState::Advance(std::span<const std::uint8_t> spikes) {
  const int n = network_->num_neurons();
  Require(static_cast<int>(spikes.size()) == n, ErrorKind::kStructural,
          "spike vector size does not match the network");
  const BasisBank& ffb = network_->feedforward_bank();
  const BasisBank& fbb = network_->feedback_bank();
  std::fill(ff_.begin(), ff_.end(), 0.0);
  std::fill(fb_.begin(), fb_.end(), 0.0);
  for (int i = 0; i < n; ++i) {
    windows_[i].Push(spikes[i]);
    windows_[i].AccumulateTrace(ffb, &ff_[static_cast<std::size_t>(i) * ffb.size()]);
    windows_[i].AccumulateTrace(fbb, &fb_[static_cast<std::size_t>(i) * fbb.size()]);
  }
  ++time_;
}

void NetworkState::Reset() {
  for (SpikeWindow& w : windows_) w.Clear();
  std::fill(ff_.begin(), ff_.end(), 0.0);
  std::fill(fb_.begin(), fb_.end(), 0.0);
  time_ = 0;
}

ClampedRaster ClampedRaster::Free(int num_neurons, int num_steps) {
  return {SpikeRaster(num_neurons, num_steps),
          std::vector<std::uint8_t>(
              static_cast<std::size_t>(num_neurons) * num_steps, 0)};
}

ClampedRaster ClampedRaster::Rows(const SpikeRaster& values,
                                  std::span<const int> rows) {
  ClampedRaster clamp = Free(values.num_neurons(), values.num_steps());
  for (int i : rows) {
    for (int t = 0; t < values.num_steps(); ++t) clamp.Clamp(i, t, values.at(i, t));
  }
  return clamp;
}

void ClampedRaster::Clamp(int neuron, int t, std::uint8_t bit) {
  bits.set(neuron, t, bit);
  mask[static_cast<std::size_t>(neuron) * bits.num_steps() + t] = 1;
}

namespace {

// Fills spikes for the current step of `state`: clamped entries keep their
// value, free entries are sampled.
void SampleStep(const Network& network, const NetworkParams& params,
                const NetworkState& state,
                std::span<const std::uint8_t> clamped,
                std::vector<std::uint8_t>& spikes, Rng& rng) {
  std::vector<double> ff;
  for (int i = 0; i < network.num_neurons(); ++i) {
    if (!clamped.empty() && clamped[i]) continue;
    state.GatherFeedforward(i, ff);
    const double u = MembranePotential(params[i], ff, state.feedback(i));
    spikes[i] = SampleSpike(u, network.bandwidth(), rng);
  }
}

}  // namespace

SpikeRaster RollForward(const Network& network, const NetworkParams& params,
                        const ClampedRaster& clamp, Rng& rng) {
  network.CheckShape(params);
  const int n = network.num_neurons();
  Require(clamp.bits.num_neurons() == n, ErrorKind::kStructural,
          "clamp raster does not match the network");
  const int steps = clamp.bits.num_steps();
  SpikeRaster out(n, steps);
  NetworkState state(network);
  std::vector<std::uint8_t> spikes(n), mask(n);
  for (int t = 0; t < steps; ++t) {
    for (int i = 0; i < n; ++i) {
      mask[i] = clamp.clamped(i, t);
      spikes[i] = mask[i] ? clamp.bits.at(i, t) : 0;
      Require(spikes[i] <= 1, ErrorKind::kData,
              "clamped bit at neuron " + std::to_string(i) + ", t=" +
                  std::to_string(t) + " is not 0/1");
    }
    SampleStep(network, params, state, mask, spikes, rng);
    for (int i = 0; i < n; ++i) out.set(i, t, spikes[i]);
    state.Advance(spikes);
  }
  return out;
}

SpikeRaster FreeRun(const Network& network, const NetworkParams& params,
                    NetworkState& state, int steps, Rng& rng) {
  const int n = network.num_neurons();
  SpikeRaster out(n, steps);
  std::vector<std::uint8_t> spikes(n);
  for (int t = 0; t < steps; ++t) {
    SampleStep(network, params, state, {}, spikes, rng);
    for (int i = 0; i < n; ++i) out.set(i, t, spikes[i]);
    state.Advance(spikes);
  }
  return out;
}

}  // namespace psnn
