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

#include "psnn/kernels.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "psnn/error.h"

namespace psnn {

const char* KernelFamilyName(KernelFamily family) {
  switch (family) {
    case KernelFamily::kExponential:
      return "exponential";
    case KernelFamily::kDiffExponential:
      return "diff-exponential";
    case KernelFamily::kFeedbackExponential:
      return "feedback-exponential";
    case KernelFamily::kRaisedCosine:
      return "raised-cosine";
    case KernelFamily::kStdp:
      return "stdp";
    case KernelFamily::kCustom:
      return "custom";
  }
  return "custom";
}

KernelFamily ParseKernelFamily(const std::string& name) {
  for (KernelFamily f :
       {KernelFamily::kExponential, KernelFamily::kDiffExponential,
        KernelFamily::kFeedbackExponential, KernelFamily::kRaisedCosine,
        KernelFamily::kStdp, KernelFamily::kCustom}) {
    if (name == KernelFamilyName(f)) return f;
  }
  Fail(ErrorKind::kParameter, "unknown kernel family '" + name + "'");
}

BasisBank::BasisBank(std::vector<Kernel> kernels, BankRole role)
    : kernels_(std::move(kernels)), role_(role) {
  Require(!kernels_.empty(), ErrorKind::kParameter,
          "basis bank needs at least one kernel");
  for (const Kernel& k : kernels_) {
    Require(k.duration() >= 1, ErrorKind::kParameter,
            "kernel duration must be >= 1");
    for (double v : k.samples) {
      Require(std::isfinite(v), ErrorKind::kParameter,
              "kernel samples must be finite");
    }
    duration_ = std::max(duration_, k.duration());
  }
  for (Kernel& k : kernels_) k.samples.resize(duration_, 0.0);
}

Kernel MakeKernel(KernelFamily family, const TimeConstants& constants,
                  int duration) {
  Require(duration >= 1, ErrorKind::kParameter,
          "kernel duration must be >= 1, got " + std::to_string(duration));
  Kernel kernel;
  kernel.family = family;
  kernel.samples.resize(duration);
  switch (family) {
    case KernelFamily::kExponential:
      Require(constants.tau1 > 0, ErrorKind::kParameter, "tau1 must be > 0");
      for (int t = 0; t < duration; ++t) {
        kernel.samples[t] = std::exp(-t / constants.tau1);
      }
      break;
    case KernelFamily::kDiffExponential:
      Require(constants.tau1 > 0 && constants.tau2 > 0, ErrorKind::kParameter,
              "time constants must be > 0");
      Require(constants.tau1 > constants.tau2, ErrorKind::kParameter,
              "diff-exponential kernel needs tau1 > tau2");
      for (int t = 0; t < duration; ++t) {
        kernel.samples[t] =
            std::exp(-t / constants.tau1) - std::exp(-t / constants.tau2);
      }
      break;
    case KernelFamily::kFeedbackExponential:
      Require(constants.tau_m > 0, ErrorKind::kParameter, "tau_m must be > 0");
      for (int t = 0; t < duration; ++t) {
        kernel.samples[t] = -std::exp(-t / constants.tau_m);
      }
      break;
    default:
      Fail(ErrorKind::kParameter,
           std::string("family '") + KernelFamilyName(family) +
               "' is built through its bank constructor");
  }
  return kernel;
}

BasisBank MakeRaisedCosineBank(std::span<const double> durations,
                               BankRole role) {
  Require(!durations.empty(), ErrorKind::kParameter,
          "raised-cosine bank needs at least one duration");
  std::vector<Kernel> kernels;
  int previous = 0;
  for (double raw : durations) {
    Require(std::isfinite(raw) && raw > 0, ErrorKind::kParameter,
            "raised-cosine durations must be positive");
    const int duration = static_cast<int>(std::ceil(raw));
    Require(duration >= previous, ErrorKind::kParameter,
            "raised-cosine durations must be nondecreasing");
    previous = duration;
    Kernel kernel;
    kernel.family = KernelFamily::kRaisedCosine;
    kernel.samples.resize(duration);
    for (int t = 0; t < duration; ++t) {
      kernel.samples[t] =
          0.5 * (1.0 + std::cos(std::numbers::pi *
                                (2.0 * t / duration - 1.0)));
    }
    kernels.push_back(std::move(kernel));
  }
  return BasisBank(std::move(kernels), role);
}

BasisBank MakeStdpBank(int delay, int duration, BankRole role) {
  Require(duration >= 1, ErrorKind::kParameter, "STDP duration must be >= 1");
  Require(delay >= 0 && delay < duration, ErrorKind::kParameter,
          "STDP delay must satisfy 0 <= d < duration");
  Kernel ltp{std::vector<double>(duration, 0.0), KernelFamily::kStdp};
  Kernel ltd{std::vector<double>(duration, 0.0), KernelFamily::kStdp};
  for (int t = 0; t < duration; ++t) {
    (t >= delay ? ltp : ltd).samples[t] = 1.0;
  }
  return BasisBank({std::move(ltp), std::move(ltd)}, role);
}

BasisBank MakeSingleKernelBank(Kernel kernel, BankRole role) {
  return BasisBank({std::move(kernel)}, role);
}

BasisBank L2NormalizedBank(const BasisBank& bank) {
  std::vector<Kernel> kernels = bank.kernels();
  for (Kernel& kernel : kernels) {
    double sum_sq = 0.0;
    for (double v : kernel.samples) sum_sq += v * v;
    Require(sum_sq > 0, ErrorKind::kParameter,
            "cannot normalize an all-zero kernel");
    const double scale = 1.0 / std::sqrt(sum_sq);
    for (double& v : kernel.samples) v *= scale;
  }
  return BasisBank(std::move(kernels), bank.role());
}

TraceVector FilterTraces(const BasisBank& bank,
                         std::span<const std::uint8_t> history) {
  TraceVector values(bank.size(), 0.0);
  const int t = static_cast<int>(history.size()) - 1;
  const int max_lag = std::min(bank.duration() - 1, t);
  for (int lag = 0; lag <= max_lag; ++lag) {
    if (!history[t - lag]) continue;
    for (int k = 0; k < bank.size(); ++k) values[k] += bank.at(k, lag);
  }
  return values;
}

double ArExpTraceStep(double state, std::uint8_t spike, double tau1) {
  return std::exp(-1.0 / tau1) * (state + spike);
}

SpikeWindow::SpikeWindow(int capacity)
    : bits_(std::max(capacity, 1), std::uint8_t{0}) {}

void SpikeWindow::Push(std::uint8_t spike) {
  head_ = (head_ + 1) % capacity();
  bits_[head_] = spike;
}

void SpikeWindow::Clear() {
  std::fill(bits_.begin(), bits_.end(), std::uint8_t{0});
  head_ = 0;
}

std::uint8_t SpikeWindow::at(int lag) const {
  if (lag >= capacity()) return 0;
  return bits_[(head_ - lag + capacity()) % capacity()];
}

void SpikeWindow::AccumulateTrace(const BasisBank& bank, double* out) const {
  const int max_lag = std::min(bank.duration(), capacity());
  for (int lag = 0; lag < max_lag; ++lag) {
    if (!at(lag)) continue;
    for (int k = 0; k < bank.size(); ++k) out[k] += bank.at(k, lag);
  }
}

}  // namespace psnn
