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

// Discrete-time generalized linear model (GLM) of a spiking network: the
// membrane potential is a linear function of filtered spike history and each
// neuron spikes with probability sigmoid(u / bandwidth).

#ifndef PSNN_GLM_H_
#define PSNN_GLM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "psnn/kernels.h"
#include "psnn/random.h"
#include "psnn/raster.h"

namespace psnn {

// Directed graph over N neurons with the observed/hidden partition.
class Topology {
 public:
  Topology() = default;
  // presynaptic[i] lists the neurons feeding neuron i. Neurons not listed in
  // `hidden` are observed. Throws a structural error on self-synapses,
  // out-of-range or duplicate indices.
  Topology(std::vector<std::vector<int>> presynaptic, std::vector<int> hidden);

  // Every neuron receives every other neuron; neurons [0, num_observed) are
  // observed and the rest hidden.
  static Topology FullyConnected(int num_observed, int num_hidden);
  // Inputs [0, num_inputs) have no synapses; each output receives all inputs.
  // No hidden neurons.
  static Topology TwoLayer(int num_inputs, int num_outputs);

  int num_neurons() const { return static_cast<int>(presynaptic_.size()); }
  const std::vector<int>& presynaptic(int i) const { return presynaptic_[i]; }
  const std::vector<int>& observed() const { return observed_; }
  const std::vector<int>& hidden() const { return hidden_; }
  bool is_hidden(int i) const { return is_hidden_[i] != 0; }

 private:
  std::vector<std::vector<int>> presynaptic_;
  std::vector<int> observed_;
  std::vector<int> hidden_;
  std::vector<std::uint8_t> is_hidden_;
};

// Local parameters of one neuron. feedforward holds K_a weights per
// presynaptic neuron, synapse-major in presynaptic order.
struct NeuronParams {
  double bias = 0.0;
  std::vector<double> feedforward;
  std::vector<double> feedback;

  std::size_t size() const { return 1 + feedforward.size() + feedback.size(); }
  friend bool operator==(const NeuronParams&, const NeuronParams&) = default;
};

using NetworkParams = std::vector<NeuronParams>;

// y += scale * x, elementwise over matching shapes.
void AddScaled(NeuronParams& y, double scale, const NeuronParams& x);
void AddScaled(NetworkParams& y, double scale, const NetworkParams& x);
void SetZero(NeuronParams& p);
void SetZero(NetworkParams& p);

// Flat layout: per neuron, bias, then feedforward weights, then feedback.
std::vector<double> Flatten(const NetworkParams& params);
void Unflatten(std::span<const double> flat, NetworkParams& params);

// Fixed structure of a model: topology, basis banks and bandwidth.
class Network {
 public:
  Network(Topology topology, BasisBank feedforward, BasisBank feedback,
          double bandwidth = 1.0);

  const Topology& topology() const { return topology_; }
  const BasisBank& feedforward_bank() const { return feedforward_; }
  const BasisBank& feedback_bank() const { return feedback_; }
  double bandwidth() const { return bandwidth_; }
  int num_neurons() const { return topology_.num_neurons(); }
  // Number of past steps that influence a potential.
  int memory() const;

  NetworkParams ZeroParams() const;
  NetworkParams UniformParams(double lo, double hi, Rng& rng) const;
  NetworkParams NormalParams(double mean, double stddev, Rng& rng) const;
  // Throws a structural error if the shapes do not match this network.
  void CheckShape(const NetworkParams& params) const;

 private:
  Topology topology_;
  BasisBank feedforward_;
  BasisBank feedback_;
  double bandwidth_;
};

// log sigmoid(x), never exponentiating a large positive argument.
double LogSigmoid(double x);
// Throws a parameter error when bandwidth <= 0.
double FiringProb(double potential, double bandwidth = 1.0);
// Consumes exactly one uniform variate.
std::uint8_t SampleSpike(double potential, double bandwidth, Rng& rng);
double CondLogProb(std::uint8_t spike, double potential, double bandwidth = 1.0);

// gamma + <w_ff, ff_traces> + <w_fb, fb_trace>; traces are those at t - 1,
// ff_traces laid out like params.feedforward.
double MembranePotential(const NeuronParams& params,
                         std::span<const double> ff_traces,
                         std::span<const double> fb_trace);

// Gradient of log p(s | u) with respect to the neuron's parameters:
// (s - sigmoid(u / bandwidth)) / bandwidth times (1, ff_traces, fb_trace).
NeuronParams GradLocal(const NeuronParams& params, std::uint8_t spike,
                       double potential, std::span<const double> ff_traces,
                       std::span<const double> fb_trace, double bandwidth);
// grad += scale * GradLocal(...), without allocating.
void AccumulateGradLocal(double scale, std::uint8_t spike, double potential,
                         std::span<const double> ff_traces,
                         std::span<const double> fb_trace, double bandwidth,
                         NeuronParams& grad);

// Filtered traces of every neuron of a raster at every step (the trace at t
// includes the spike at t).
class RasterTraces {
 public:
  RasterTraces(const Network& network, const SpikeRaster& raster);

  int num_steps() const { return num_steps_; }
  // Feedforward trace of neuron j at time t (K_a values); zeros for t < 0.
  std::span<const double> feedforward(int j, int t) const;
  std::span<const double> feedback(int i, int t) const;
  // Concatenated feedforward traces at t of neuron i's presynaptic neurons.
  void GatherFeedforward(const Topology& topology, int i, int t,
                         std::vector<double>& out) const;

 private:
  int num_steps_;
  int k_ff_;
  int k_fb_;
  std::vector<double> ff_;
  std::vector<double> fb_;
  std::vector<double> zeros_;
};

double NeuronLogLikelihood(const Network& network, const NetworkParams& params,
                           const RasterTraces& traces,
                           const SpikeRaster& raster, int neuron);
double LogLikelihood(const Network& network, const NetworkParams& params,
                     const SpikeRaster& raster);
double LogLikelihood(const Network& network, const NetworkParams& params,
                     const RasterTraces& traces, const SpikeRaster& raster);

// Adds scale * d/dtheta log p(raster) to grad and returns log p(raster).
// Only neurons with include[i] set contribute (an empty mask means all).
double AccumulateLogLikelihoodGradient(
    const Network& network, const NetworkParams& params,
    const RasterTraces& traces, const SpikeRaster& raster, double scale,
    NetworkParams& grad, std::span<const std::uint8_t> include = {});

// Per-neuron circular spike windows plus the current traces; the state at
// time t holds traces through t - 1.
class NetworkState {
 public:
  explicit NetworkState(const Network& network);

  int time() const { return time_; }
  std::span<const double> feedforward(int j) const;
  std::span<const double> feedback(int i) const;
  void GatherFeedforward(int i, std::vector<double>& out) const;
  double Potential(int i, const NeuronParams& params) const;

  // Records the spikes of every neuron at the current time and advances.
  void Advance(std::span<const std::uint8_t> spikes);
  void Reset();

 private:
  const Network* network_;
  std::vector<SpikeWindow> windows_;
  std::vector<double> ff_;
  std::vector<double> fb_;
  int time_ = 0;
};

// Cells with mask set are copied from bits; others are sampled.
struct ClampedRaster {
  SpikeRaster bits;
  std::vector<std::uint8_t> mask;  // same layout as bits

  // Nothing clamped.
  static ClampedRaster Free(int num_neurons, int num_steps);
  // The given neurons clamped to their rows in `values` for every step.
  static ClampedRaster Rows(const SpikeRaster& values, std::span<const int> rows);
  bool clamped(int neuron, int t) const {
    return mask[static_cast<std::size_t>(neuron) * bits.num_steps() + t] != 0;
  }
  void Clamp(int neuron, int t, std::uint8_t bit);
};

// Simulates t = 0..clamp.bits.horizon(). Free cells draw one uniform each,
// in time-major, neuron-ascending order. Throws a data error on clamped
// values outside {0, 1}.
SpikeRaster RollForward(const Network& network, const NetworkParams& params,
                        const ClampedRaster& clamp, Rng& rng);

// Continues `state` for `steps` free-running steps, advancing it.
SpikeRaster FreeRun(const Network& network, const NetworkParams& params,
                    NetworkState& state, int steps, Rng& rng);

}  // namespace psnn

#endif  // PSNN_GLM_H_
