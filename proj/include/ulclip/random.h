//
// Copyright 2026 The ulclip Authors
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
//

// Deterministic random streams. Every randomized routine in the library takes
// an explicit RandomStream so that results are a pure function of the seed and
// never depend on a shared generator or on the thread schedule.

#ifndef ULCLIP_RANDOM_H_
#define ULCLIP_RANDOM_H_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>

namespace ulclip {

// SplitMix64 finalizer; used to turn structured seeds into well-mixed ones.
inline uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives a child seed from a parent seed and a path of indices, e.g.
// DeriveSeed(seed, {epsilon_index, trial_index, stream_id}).
inline uint64_t DeriveSeed(uint64_t seed, std::initializer_list<uint64_t> path) {
  uint64_t h = MixSeed(seed);
  for (uint64_t index : path) h = MixSeed(h ^ MixSeed(index + 1));
  return h;
}

class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution. The conversion is spelled
  // out rather than delegated to std::uniform_real_distribution, whose output
  // is implementation-defined.
  double NextUniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on (0, 1].
  double NextUniformOpenClosed() { return 1.0 - NextUniform(); }

  // Standard normal via Box-Muller (one variate per call).
  double NextStandardNormal() {
    const double u1 = NextUniformOpenClosed();
    const double u2 = NextUniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ulclip

#endif  // ULCLIP_RANDOM_H_
