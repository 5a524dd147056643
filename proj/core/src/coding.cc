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

#include "psnn/coding.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "psnn/error.h"

namespace psnn {

int RateLevel(double value, int num_neurons, std::size_t* clipped) {
  if (value < 0.0 || value > 1.0 || std::isnan(value)) {
    if (clipped) ++*clipped;
    value = std::isnan(value) ? 0.0 : std::clamp(value, 0.0, 1.0);
  }
  const int level = static_cast<int>(std::floor(value * (num_neurons + 1)));
  return std::min(level, num_neurons);
}

double LevelRepresentative(int level, int num_neurons) {
  return static_cast<double>(level) / (num_neurons + 1);
}

double QuantizeValue(double value, int num_neurons) {
  return LevelRepresentative(RateLevel(value, num_neurons), num_neurons);
}

SpikeRaster RateEncode(double value, int num_neurons, int dt,
                       std::size_t* clipped) {
  Require(num_neurons >= 1 && dt >= 1, ErrorKind::kParameter,
          "rate coding needs num_neurons >= 1 and dt >= 1");
  SpikeRaster block(num_neurons, dt);
  const int level = RateLevel(value, num_neurons, clipped);
  if (level > 0) {
    for (int t = 0; t < dt; ++t) block.set(level - 1, t, 1);
  }
  return block;
}

double RateDecode(const SpikeRaster& block) {
  int best = -1;
  int best_count = 0;
  for (int i = 0; i < block.num_neurons(); ++i) {
    const int count = block.RowCount(i);
    if (count > best_count) {
      best = i;
      best_count = count;
    }
  }
  return best < 0 ? 0.0 : LevelRepresentative(best + 1, block.num_neurons());
}

ReceptiveFieldBank::ReceptiveFieldBank(int num_neurons, int dt)
    : num_neurons_(num_neurons), dt_(dt) {
  Require(num_neurons >= 1 && dt >= 1, ErrorKind::kParameter,
          "time coding needs num_neurons >= 1 and dt >= 1");
}

double ReceptiveFieldBank::center(int i) const {
  const double width = (kHigh - kLow) / num_neurons_;
  return kLow + (i + 0.5) * width;
}

double ReceptiveFieldBank::Gaussian(int i, double value) const {
  const double d = value - center(i);
  return std::exp(-d * d / (2.0 * kVariance));
}

double ReceptiveFieldBank::Normalized(int i, double value) const {
  const double lowest = std::min(Gaussian(i, kLow), Gaussian(i, kHigh));
  return dt_ * (Gaussian(i, value) - lowest) / (1.0 - lowest);
}

int ReceptiveFieldBank::Timing(int i, double value) const {
  if (value < kLow) return 0;
  value = std::min(value, kHigh);
  return static_cast<int>(std::lround(Normalized(i, value)));
}

SpikeRaster TimeEncode(double value, const ReceptiveFieldBank& bank) {
  SpikeRaster block(bank.size(), bank.dt());
  for (int i = 0; i < bank.size(); ++i) {
    const int slot = bank.Timing(i, value);
    if (slot >= 1) block.set(i, slot - 1, 1);
  }
  return block;
}

double TimeDecode(const SpikeRaster& block, const ReceptiveFieldBank& bank) {
  Require(block.num_neurons() == bank.size(), ErrorKind::kStructural,
          "block rows do not match the receptive fields");
  std::vector<int> first(bank.size(), 0);
  bool any = false;
  for (int i = 0; i < bank.size(); ++i) {
    for (int t = 0; t < block.num_steps(); ++t) {
      if (block.at(i, t)) {
        first[i] = t + 1;
        any = true;
        break;
      }
    }
  }
  if (!any) return 0.0;

  const double mismatch = static_cast<double>(bank.dt() + 1) * (bank.dt() + 1);
  double best_value = 0.0;
  double best_cost = std::numeric_limits<double>::infinity();
  for (int g = 0; g < kTimeDecodeGridSize; ++g) {
    const double candidate = static_cast<double>(g) / (kTimeDecodeGridSize - 1);
    double cost = 0.0;
    for (int i = 0; i < bank.size(); ++i) {
      const bool predicted = bank.Timing(i, candidate) >= 1;
      const bool observed = first[i] >= 1;
      if (predicted && observed) {
        const double d = first[i] - bank.Normalized(i, candidate);
        cost += d * d;
      } else if (predicted != observed) {
        cost += mismatch;
      }
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_value = candidate;
    }
  }
  return best_value;
}

CodingScheme ParseCodingScheme(const std::string& name) {
  if (name == "rate") return CodingScheme::kRate;
  if (name == "time") return CodingScheme::kTime;
  Fail(ErrorKind::kParameter, "unknown coding scheme '" + name + "'");
}

const char* CodingSchemeName(CodingScheme scheme) {
  return scheme == CodingScheme::kRate ? "rate" : "time";
}

ValueCoder::ValueCoder(CodingScheme scheme, int num_neurons, int dt)
    : scheme_(scheme), num_neurons_(num_neurons), dt_(dt), fields_(num_neurons, dt) {}

SpikeRaster ValueCoder::Encode(double value) {
  if (scheme_ == CodingScheme::kRate) {
    return RateEncode(value, num_neurons_, dt_, &clipped_);
  }
  if (value < 0.0 || value > 1.0) {
    ++clipped_;
    value = std::clamp(value, 0.0, 1.0);
  }
  return TimeEncode(value, fields_);
}

double ValueCoder::Decode(const SpikeRaster& block) const {
  return scheme_ == CodingScheme::kRate ? RateDecode(block)
                                        : TimeDecode(block, fields_);
}

double ValueCoder::Representative(double value) const {
  if (scheme_ == CodingScheme::kRate) return QuantizeValue(value, num_neurons_);
  return Decode(TimeEncode(std::clamp(value, 0.0, 1.0), fields_));
}

SpikeRaster ImageRateEncode(std::span<const double> pixels, int horizon,
                            Rng& rng) {
  Require(horizon >= 0, ErrorKind::kParameter, "horizon must be >= 0");
  SpikeRaster raster(static_cast<int>(pixels.size()), horizon + 1);
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    const double p = 0.5 * std::clamp(pixels[i], 0.0, 1.0);
    for (int t = 0; t <= horizon; ++t) {
      raster.set(static_cast<int>(i), t, Bernoulli(p, rng) ? 1 : 0);
    }
  }
  return raster;
}

SpikeRaster LabelRateEncode(int label, int num_classes, int horizon) {
  Require(label >= 0 && label < num_classes, ErrorKind::kData,
          "label " + std::to_string(label) + " outside [0, " +
              std::to_string(num_classes) + ")");
  SpikeRaster raster(num_classes, horizon + 1);
  for (int t = 0; t <= horizon; t += 3) raster.set(label, t, 1);
  return raster;
}

int ClassifyDecode(const SpikeRaster& outputs) {
  int best = 0;
  int best_count = -1;
  for (int i = 0; i < outputs.num_neurons(); ++i) {
    const int count = outputs.RowCount(i);
    if (count > best_count) {
      best = i;
      best_count = count;
    }
  }
  return best;
}

}  // namespace psnn
