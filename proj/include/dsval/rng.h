// Copyright 2026 The dsval Authors
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

#ifndef DSVAL_RNG_H_
#define DSVAL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace dsval {

// One step of the SplitMix64 sequence; advances `state`.
inline uint64_t SplitMix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives the seed of a substream identified by `path` (e.g. {tag, player,
// sample}) from a master seed. The mapping is a pure function of its inputs,
// so a substream does not depend on which thread consumes it or when.
inline uint64_t DeriveSeed(uint64_t master, std::initializer_list<uint64_t> path) {
  uint64_t state = master;
  uint64_t out = SplitMix64(state);
  for (uint64_t key : path) {
    state = out ^ (key * 0xd1b54a32d192ed03ULL + 0x8bb84b93962eacc9ULL);
    out = SplitMix64(state);
  }
  return out;
}

// Substream tags. Stable values: changing them changes every seeded output.
enum StreamTag : uint64_t {
  kTagMonteCarlo = 1,
  kTagAntithetic = 2,
  kTagOwen = 3,
  kTagRegressionData = 4,
  kTagRegressionTest = 5,
  kTagOracle = 6,
  kTagPartition = 7,
  kTagTraining = 8,
  kTagProxy = 9,
  kTagBench = 10,
  kTagSizes = 11,
  kTagConvergence = 12,
  kTagSynthetic = 13,
};

// SplitMix64 stream. Satisfies UniformRandomBitGenerator so it plugs into the
// <random> distributions.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) : state_(seed) {}
  Rng(uint64_t master, std::initializer_list<uint64_t> path)
      : state_(DeriveSeed(master, path)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() { return SplitMix64(state_); }

  // Uniform double in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, n) (Lemire's multiply-and-reject). n > 0.
  uint64_t Below(uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
    uint64_t low = static_cast<uint64_t>(m);
    if (low < n) {
      const uint64_t threshold = -n % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>((*this)()) * n;
        low = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

 private:
  uint64_t state_;
};

}  // namespace dsval

#endif  // DSVAL_RNG_H_
