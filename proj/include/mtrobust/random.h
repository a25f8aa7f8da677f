// Copyright 2026 The mtrobust Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MTROBUST_RANDOM_H_
#define MTROBUST_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <random>

namespace mtrobust {

// Source of the random decisions made by perturbation, sampling and
// bootstrap code. Tests substitute scripted implementations.
class RandomStream {
 public:
  virtual ~RandomStream() = default;

  // Uniform integer in [0, n). n must be positive.
  virtual size_t UniformIndex(size_t n) = 0;
  // Uniform real in [0, 1).
  virtual double UniformReal() = 0;

  bool Bernoulli(double p) { return UniformReal() < p; }
};

// Platform-independent stream: mt19937_64 is fully specified by the
// standard, and the distributions below are implemented here rather than
// taken from <random>, whose distributions are implementation-defined.
class Rng final : public RandomStream {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  size_t UniformIndex(size_t n) override;
  double UniformReal() override;
  uint64_t NextU64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Derives an independent stream seed from (seed, stream) with splitmix64
// finalization. Used for per-sentence, per-resample and per-level streams.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

}  // namespace mtrobust

#endif  // MTROBUST_RANDOM_H_
