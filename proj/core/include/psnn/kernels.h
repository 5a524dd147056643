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

// Synaptic and feedback kernels, basis banks, and causal filtered traces of
// binary spike trains.

#ifndef PSNN_KERNELS_H_
#define PSNN_KERNELS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace psnn {

enum class KernelFamily {
  kExponential,          // exp(-t / tau1)
  kDiffExponential,      // exp(-t / tau1) - exp(-t / tau2), tau1 > tau2
  kFeedbackExponential,  // -exp(-t / tau_m), refractory feedback
  kRaisedCosine,
  kStdp,
  kCustom,
};

const char* KernelFamilyName(KernelFamily family);
// Throws a parameter error for unknown names.
KernelFamily ParseKernelFamily(const std::string& name);

struct TimeConstants {
  double tau1 = 10.0;
  double tau2 = 2.0;
  double tau_m = 5.0;
};

// A sampled causal waveform: samples[d] weights a spike d steps in the past.
struct Kernel {
  std::vector<double> samples;
  KernelFamily family = KernelFamily::kCustom;

  int duration() const { return static_cast<int>(samples.size()); }
};

enum class BankRole { kFeedforward, kFeedback };

// K fixed kernels sharing one (zero-padded) duration. Every synapse of a
// given role filters its presynaptic spikes through the whole bank.
class BasisBank {
 public:
  BasisBank() = default;
  // Pads all members to the longest duration. Throws on an empty list.
  BasisBank(std::vector<Kernel> kernels, BankRole role);

  int size() const { return static_cast<int>(kernels_.size()); }
  int duration() const { return duration_; }
  BankRole role() const { return role_; }
  const Kernel& kernel(int k) const { return kernels_[k]; }
  const std::vector<Kernel>& kernels() const { return kernels_; }

  // Value of member k at lag d (zero past the duration).
  double at(int k, int lag) const {
    return lag < duration_ ? kernels_[k].samples[lag] : 0.0;
  }

 private:
  std::vector<Kernel> kernels_;
  int duration_ = 0;
  BankRole role_ = BankRole::kFeedforward;
};

using TraceVector = std::vector<double>;

Kernel MakeKernel(KernelFamily family, const TimeConstants& constants,
                  int duration);

// Member k is 0.5 * (1 + cos(pi * (2t / tau_k - 1))) on [0, tau_k): zero at
// both ends of its support and 1 at the midpoint. Durations are rounded up.
BasisBank MakeRaisedCosineBank(std::span<const double> durations,
                               BankRole role = BankRole::kFeedforward);

// Two flat plateaus: member 0 (LTP) covers lags [delay, duration), member 1
// (LTD) covers lags [0, delay).
BasisBank MakeStdpBank(int delay, int duration,
                       BankRole role = BankRole::kFeedforward);

// A single-member bank, the scalar-weight special case.
BasisBank MakeSingleKernelBank(Kernel kernel,
                               BankRole role = BankRole::kFeedforward);

// Copy of `bank` with every member scaled to unit Euclidean norm, the
// convention of common GLM basis code. Throws a parameter error on an
// all-zero member.
BasisBank L2NormalizedBank(const BasisBank& bank);

// Trace at the last time step of `history` (history.back() is time t):
// values[k] = sum_d bank.at(k, d) * history[t - d].
TraceVector FilterTraces(const BasisBank& bank,
                         std::span<const std::uint8_t> history);

// One step of the constant-memory trace for an infinite exponential kernel:
// exp(-1 / tau1) * (state + spike).
double ArExpTraceStep(double state, std::uint8_t spike, double tau1);

// Fixed-capacity circular record of the most recent spikes of one neuron.
class SpikeWindow {
 public:
  explicit SpikeWindow(int capacity = 1);

  void Push(std::uint8_t spike);
  void Clear();
  // Spike emitted `lag` steps before the most recent push (lag 0 = newest).
  std::uint8_t at(int lag) const;
  int capacity() const { return static_cast<int>(bits_.size()); }

  // Adds the filtered trace of the stored history to out[0..bank.size()).
  void AccumulateTrace(const BasisBank& bank, double* out) const;

 private:
  std::vector<std::uint8_t> bits_;
  int head_ = 0;  // slot of the newest spike
};

}  // namespace psnn

#endif  // PSNN_KERNELS_H_
