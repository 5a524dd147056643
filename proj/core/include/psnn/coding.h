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

// Conversion between natural signals and spike rasters. Blocks produced for a
// single value have one row per neuron and one column per time slot.

#ifndef PSNN_CODING_H_
#define PSNN_CODING_H_

#include <cstddef>
#include <span>
#include <string>

#include "psnn/random.h"
#include "psnn/raster.h"

namespace psnn {

// Rate coding quantizes [0, 1] into num_neurons + 1 levels by rounding down;
// level 0 is silent and level i >= 1 drives neuron i - 1.
int RateLevel(double value, int num_neurons, std::size_t* clipped = nullptr);
// Lower edge of a level's region: level / (num_neurons + 1).
double LevelRepresentative(int level, int num_neurons);
double QuantizeValue(double value, int num_neurons);

// num_neurons x dt block; values outside [0, 1] are clipped and counted.
SpikeRaster RateEncode(double value, int num_neurons, int dt,
                       std::size_t* clipped = nullptr);
// Representative of the level of the neuron with the most spikes (lowest
// index on ties); 0 for an all-zero block.
double RateDecode(const SpikeRaster& block);

// Truncated Gaussian receptive fields over [0.1, 1] for time coding. Field i
// is centred on the midpoint of the i-th of num_neurons equal sub-regions,
// has unit variance, and is rescaled so its peak maps to dt and the lowest
// value on the support maps to 0.
class ReceptiveFieldBank {
 public:
  static constexpr double kLow = 0.1;
  static constexpr double kHigh = 1.0;
  static constexpr double kVariance = 1.0;

  ReceptiveFieldBank(int num_neurons, int dt);

  int size() const { return num_neurons_; }
  int dt() const { return dt_; }
  double center(int i) const;
  // Normalized field value in [0, dt]; meaningful on [kLow, kHigh].
  double Normalized(int i, double value) const;
  // Spike slot in {1, ..., dt}, or 0 for no spike (silent input or a field
  // value that rounds to 0).
  int Timing(int i, double value) const;

 private:
  double Gaussian(int i, double value) const;

  int num_neurons_;
  int dt_;
};

// One block with at most one spike per neuron, at slot Timing(i, value).
SpikeRaster TimeEncode(double value, const ReceptiveFieldBank& bank);

inline constexpr int kTimeDecodeGridSize = 512;

// Least-squares fit of first-spike timings against the fields over a
// uniform grid on [0, 1]. A neuron that spikes where the candidate predicts
// silence (or vice versa) costs (dt + 1)^2. All-zero block decodes to 0.
double TimeDecode(const SpikeRaster& block, const ReceptiveFieldBank& bank);

enum class CodingScheme { kRate, kTime };
CodingScheme ParseCodingScheme(const std::string& name);
const char* CodingSchemeName(CodingScheme scheme);

// Encoder/decoder pair for one scalar stream.
class ValueCoder {
 public:
  ValueCoder(CodingScheme scheme, int num_neurons, int dt);

  SpikeRaster Encode(double value);
  double Decode(const SpikeRaster& block) const;
  // Value the decoder would ideally return for `value`.
  double Representative(double value) const;

  CodingScheme scheme() const { return scheme_; }
  int num_neurons() const { return num_neurons_; }
  int dt() const { return dt_; }
  std::size_t clipped() const { return clipped_; }

 private:
  CodingScheme scheme_;
  int num_neurons_;
  int dt_;
  ReceptiveFieldBank fields_;
  std::size_t clipped_ = 0;
};

// One neuron per pixel; every bit is Bernoulli(0.5 * intensity) over
// horizon + 1 steps. Pixels are clipped to [0, 1].
SpikeRaster ImageRateEncode(std::span<const double> pixels, int horizon,
                            Rng& rng);

// The label's neuron spikes at every t divisible by 3; others are silent.
SpikeRaster LabelRateEncode(int label, int num_classes, int horizon);

// Index of the row with the most spikes; ties go to the lowest index.
int ClassifyDecode(const SpikeRaster& outputs);

}  // namespace psnn

#endif  // PSNN_CODING_H_
