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

#include "yaqa/oracles.hpp"
#include "yaqa/random.hpp"

#include <vector>

namespace yaqa::oracle
{

std::size_t snd_by_powers(const SupportPattern &pattern)
{
  const std::size_t n = pattern.dim();
  using Bits = std::vector<std::uint8_t>;
  Bits base(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      base[i * n + j] = pattern(i, j) ? 1 : 0;

  auto is_zero = [](const Bits &b) {
    for (auto v : b)
      if (v)
        return false;
    return true;
  };
  auto multiply = [n](const Bits &a, const Bits &b) {
    Bits c(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (a[i * n + k])
          for (std::size_t j = 0; j < n; ++j)
            c[i * n + j] |= b[k * n + j];
    return c;
  };

  Bits power = base;
  std::size_t k = 1;
  while (!is_zero(power))
  {
    power = multiply(power, base);
    ++k;
  }
  return k;
}

SupportPattern random_mask(std::size_t n, double p, std::uint64_t seed)
{
  Rng rng(seed);
  SupportPattern out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (rng.uniform() < p)
        out.set(i, j);
  return out;
}

Matrix contract_outer_factor(const Matrix &h, const Matrix &a, std::size_t m, std::size_t n)
{
  Matrix out(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l)
    {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k)
          s += h(i * n + j, k * n + l) * a(i, k);
      out(j, l) = s;
    }
  return out;
}

Matrix contract_inner_factor(const Matrix &h, const Matrix &b, std::size_t m, std::size_t n)
{
  Matrix out(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
    {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          s += h(i * n + j, k * n + l) * b(j, l);
      out(i, k) = s;
    }
  return out;
}

} // namespace yaqa::oracle
