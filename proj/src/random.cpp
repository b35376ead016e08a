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

#include "yaqa/random.hpp"

namespace yaqa
{

Matrix Rng::gaussian(std::size_t rows, std::size_t cols, double scale)
{
  Matrix m(rows, cols);
  for (auto &v : m.data())
    v = scale * normal();
  return m;
}

std::vector<double> Rng::gaussian_vector(std::size_t n, double scale)
{
  std::vector<double> v(n);
  for (auto &x : v)
    x = scale * normal();
  return v;
}

SymMatrix Rng::spd(std::size_t n, double jitter) { return low_rank_spd(n, n, jitter); }

SymMatrix Rng::low_rank_spd(std::size_t n, std::size_t k, double jitter)
{
  const Matrix a = gaussian(n, k);
  Matrix h = a * a.transpose();
  h *= 1.0 / static_cast<double>(std::max<std::size_t>(k, 1));
  for (std::size_t i = 0; i < n; ++i)
    h(i, i) += jitter;
  return SymMatrix(h);
}

SymMatrix Rng::spiked(std::size_t n, std::size_t spikes, double strength)
{
  Matrix h = spd(n).matrix();
  std::vector<std::size_t> axes(n);
  for (std::size_t i = 0; i < n; ++i)
    axes[i] = i;
  std::shuffle(axes.begin(), axes.end(), _engine);
  for (std::size_t s = 0; s < std::min(spikes, n); ++s)
    h(axes[s], axes[s]) += strength;
  return SymMatrix(h);
}

} // namespace yaqa
