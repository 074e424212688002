// Copyright 2026 The PrivaTree Authors
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

#ifndef PRIVATREE_RANDOM_H_
#define PRIVATREE_RANDOM_H_

#include <cstdint>
#include <random>

namespace privatree {

// Deterministic pseudo-random source. Identical seeds and identical call
// sequences produce identical outputs within one build. Not thread-safe; give
// each concurrent caller its own stream.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : engine_(seed) {}

  // Stream for an independent sub-task, e.g. one feature's quantiles or one
  // trial of an experiment. Depends only on (seed, tag, index).
  static RandomStream Derive(uint64_t seed, uint64_t tag, uint64_t index = 0);

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double Uniform();

  // Uniform on (0, 1]; safe to take the log of.
  double UniformPositive() { return 1.0 - Uniform(); }

  // Uniform integer on [0, n). n must be positive.
  uint64_t UniformInt(uint64_t n);

  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// SplitMix64 finalizer; used to derive seeds.
uint64_t MixSeed(uint64_t x);

}  // namespace privatree

#endif  // PRIVATREE_RANDOM_H_
