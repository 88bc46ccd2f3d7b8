// Copyright 2026 The Parley Authors
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

#ifndef PARLEY_RNG_HPP
#define PARLEY_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace parley {

/// splitmix64 finalizer; the project-wide seed mixing function.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives a child seed from a parent seed and a stream tag.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed) ^ stream);
}

/// Seeded generator with distributions implemented locally so that a given
/// seed yields the same stream on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on {0, ..., n-1}; n must be positive.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % n);
  }

  /// Standard normal via Box-Muller.
  double normal() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard exponential.
  double exponential() { return -std::log(1.0 - uniform01()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace parley

#endif  // PARLEY_RNG_HPP
