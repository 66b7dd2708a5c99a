// Copyright 2026 The dpts Authors
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

#ifndef DPTS_RNG_HPP_
#define DPTS_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace dpts {

// SplitMix64 finalizer. Used to derive substream seeds; bit-exact on every
// platform.
inline std::uint64_t split_mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. All distribution transforms are implemented
// explicitly on top of the raw mt19937_64 output (std::*_distribution is
// implementation-defined), so identical seeds give identical draws across
// compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Substream derivation: seed' = mix(mix(seed) ^ mix(stream)). Streams with
  // distinct (seed, stream) pairs are independent for practical purposes and
  // may be consumed concurrently.
  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(split_mix64(split_mix64(seed) ^ split_mix64(~stream)));
  }

  std::uint64_t bits() { return gen_(); }

  // Uniform on the open interval (0, 1): ((bits >> 11) + 0.5) * 2^-53.
  double uniform01() {
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform on {0, ..., m-1} by bit-mask rejection.
  std::uint64_t below(std::uint64_t m) {
    std::uint64_t mask = m - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      std::uint64_t v = gen_() & mask;
      if (v < m) return v;
    }
  }

  // Standard normal deviate via the Box-Muller transform,
  //   sqrt(-2 ln u1) * cos(2 pi u2),
  // with u1 in (0, 1]. Two uniforms are consumed per call (no caching of the
  // second deviate, so the stream position is a pure function of the call
  // count).
  double normal() {
    double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Standard Gumbel deviate, -ln(-ln u).
  double gumbel() { return -std::log(-std::log(uniform01())); }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace dpts

#endif  // DPTS_RNG_HPP_
