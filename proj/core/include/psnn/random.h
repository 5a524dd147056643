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

#ifndef PSNN_RANDOM_H_
#define PSNN_RANDOM_H_

#include <cstdint>
#include <random>

namespace psnn {

// All randomness in the library flows through this engine so that a single
// 64-bit seed determines every experiment.
using Rng = std::mt19937_64;

// Uniform variate in [0, 1) built from the top 53 bits of one engine draw.
// Unlike std::uniform_real_distribution this is identical across standard
// library implementations.
inline double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(double p, Rng& rng) { return UniformUnit(rng) < p; }

// Derives an independent stream for a named sub-task from a base seed.
inline Rng SubStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace psnn

#endif  // PSNN_RANDOM_H_
