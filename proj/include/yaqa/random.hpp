/*
 * Copyright 2026 The yaqa-round Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef YAQA_RANDOM_HPP
#define YAQA_RANDOM_HPP

#include "yaqa/linalg.hpp"

#include <cstdint>
#include <algorithm>
#include <random>

namespace yaqa
{

/// SplitMix64 finaliser; the building block for counter-based streams.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent seed from (seed, a, b).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0)
{
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1342543de82ef95ULL + 1));
}

/// Uniform double in [0, 1) from a 64-bit hash.
constexpr double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

class Rng
{
public:
  explicit Rng(std::uint64_t seed) : _engine(seed) {}

  double normal() { return _normal(_engine); }
  double uniform() { return unit_from_bits(_engine()); }
  std::uint64_t bits() { return _engine(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(_engine() % n); }

  Matrix gaussian(std::size_t rows, std::size_t cols, double scale = 1.0);
  std::vector<double> gaussian_vector(std::size_t n, double scale = 1.0);

  /// A A^T / n + jitter * I, with A an n x n Gaussian.
  SymMatrix spd(std::size_t n, double jitter = 1e-2);
  /// Rank-k Gaussian factor plus jitter * I.
  SymMatrix low_rank_spd(std::size_t n, std::size_t k, double jitter);
  /// spd(n) plus `strength` on `spikes` distinct random coordinate axes, so
  /// the dominant eigenvectors are (nearly) one-hot.
  SymMatrix spiked(std::size_t n, std::size_t spikes = 1, double strength = 100.0);

  std::mt19937_64 &engine() { return _engine; }

private:
  std::mt19937_64 _engine;
  std::normal_distribution<double> _normal{0.0, 1.0};
};

} // namespace yaqa

#endif // YAQA_RANDOM_HPP
