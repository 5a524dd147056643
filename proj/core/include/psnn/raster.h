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

#ifndef PSNN_RASTER_H_
#define PSNN_RASTER_H_

#include <cstdint>
#include <span>
#include <vector>

namespace psnn {

// Binary spike signals of N neurons over T + 1 steps (t = 0..T), stored
// neuron-major so one neuron's history is contiguous.
class SpikeRaster {
 public:
  SpikeRaster() = default;
  SpikeRaster(int num_neurons, int num_steps)
      : num_neurons_(num_neurons),
        num_steps_(num_steps),
        bits_(static_cast<std::size_t>(num_neurons) * num_steps, 0) {}

  int num_neurons() const { return num_neurons_; }
  int num_steps() const { return num_steps_; }
  // The last time index T.
  int horizon() const { return num_steps_ - 1; }

  std::uint8_t at(int neuron, int t) const { return bits_[index(neuron, t)]; }
  void set(int neuron, int t, std::uint8_t bit) { bits_[index(neuron, t)] = bit; }

  std::span<const std::uint8_t> row(int neuron) const {
    return {bits_.data() + index(neuron, 0), static_cast<std::size_t>(num_steps_)};
  }
  std::vector<std::uint8_t> column(int t) const {
    std::vector<std::uint8_t> out(num_neurons_);
    for (int i = 0; i < num_neurons_; ++i) out[i] = at(i, t);
    return out;
  }

  int RowCount(int neuron) const {
    int n = 0;
    for (std::uint8_t b : row(neuron)) n += b;
    return n;
  }
  int Count() const {
    int n = 0;
    for (std::uint8_t b : bits_) n += b;
    return n;
  }
  // True when every cell is 0 or 1.
  bool IsBinary() const {
    for (std::uint8_t b : bits_) {
      if (b > 1) return false;
    }
    return true;
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  friend bool operator==(const SpikeRaster&, const SpikeRaster&) = default;

 private:
  std::size_t index(int neuron, int t) const {
    return static_cast<std::size_t>(neuron) * num_steps_ + t;
  }

  int num_neurons_ = 0;
  int num_steps_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace psnn

#endif  // PSNN_RASTER_H_
