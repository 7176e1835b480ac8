// Copyright 2026 The rankdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RANKDP_RNG_H_
#define RANKDP_RNG_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <random>
#include <string_view>

namespace rankdp {

// Seeded generator used by every randomized routine. Wraps mt19937_64 and
// produces doubles from the top 53 bits so that draws are identical across
// standard library implementations.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1).
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on the open interval (0, 1); never returns an endpoint.
  double UniformOpen() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). Rejection sampling, no modulo bias.
  uint64_t Below(uint64_t n);

  // Laplace(0, scale) by inverse CDF.
  double Laplace(double scale);

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer.
uint64_t Mix64(uint64_t x);

// Stable 64-bit FNV-1a hash of a string label.
uint64_t HashLabel(std::string_view label);

// Derives an independent stream seed from a base seed and an ordered list of
// coordinates. Each coordinate is folded in with Mix64, so the result depends
// on order and value of every part and nothing else.
uint64_t DeriveSeed(uint64_t base_seed, std::initializer_list<uint64_t> parts);

// Bit pattern of a double, used to fold real-valued coordinates (epsilon)
// into a derived seed.
uint64_t DoubleBits(double value);

// Worker count for parallel loops: RANKDP_THREADS when set and positive,
// otherwise `requested` when positive, otherwise hardware concurrency.
int ResolveWorkerCount(int requested);

// Runs body(i) for i in [0, count) on `workers` threads. Work items are
// claimed from a shared counter; callers write results into slot i so output
// order never depends on scheduling.
void ParallelFor(int64_t count, int workers,
                 const std::function<void(int64_t)>& body);

}  // namespace rankdp

#endif  // RANKDP_RNG_H_
