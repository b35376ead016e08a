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

#include "yaqa/snd.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

namespace yaqa
{

void SupportPattern::set(std::size_t i, std::size_t j, bool on)
{
  if (i >= _n || j >= _n)
    throw Error(ErrorKind::ShapeMismatch, "SupportPattern::set out of range");
  if (on && i <= j)
    throw Error(ErrorKind::InvalidArgument, "SupportPattern must be strictly lower triangular");
  _mask[i * _n + j] = on ? 1 : 0;
}

std::size_t SupportPattern::edges() const
{
  return static_cast<std::size_t>(std::count(_mask.begin(), _mask.end(), std::uint8_t{1}));
}

SupportPattern SupportPattern::of_lower(const Matrix &l, double zero_tol)
{
  if (l.rows() != l.cols())
    throw Error(ErrorKind::ShapeMismatch, "of_lower: matrix is not square");
  SupportPattern p(l.rows());
  for (std::size_t i = 0; i < l.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (std::abs(l(i, j)) > zero_tol)
        p._mask[i * p._n + j] = 1;
  return p;
}

SupportPattern SupportPattern::from_csv(std::istream &is)
{
  const Matrix m = read_csv(is);
  if (m.rows() != m.cols())
    throw Error(ErrorKind::ShapeMismatch, "support CSV is not square");
  SupportPattern p(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
    {
      const double v = m(i, j);
      if (v != 0.0 && v != 1.0)
        throw Error(ErrorKind::InvalidArgument, "support CSV entries must be 0 or 1");
      if (v == 1.0)
        p.set(i, j);
    }
  return p;
}

std::size_t snd(const SupportPattern &pattern)
{
  // Edge i -> j only for j < i, so increasing index is a topological order.
  const std::size_t n = pattern.dim();
  std::vector<std::size_t> depth(n, 1);
  std::size_t best = 1;
  for (std::size_t i = 0; i < n; ++i)
  {
    for (std::size_t j = 0; j < i; ++j)
      if (pattern(i, j))
        depth[i] = std::max(depth[i], depth[j] + 1);
    best = std::max(best, depth[i]);
  }
  return best;
}

std::size_t snd_of_ldl(const Matrix &l, double zero_tol) { return snd(SupportPattern::of_lower(l, zero_tol)); }

SupportPattern kron_support(const SupportPattern &a, const SupportPattern &b)
{
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  SupportPattern out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k <= i; ++k)
    {
      if (k != i && !a(i, k))
        continue;
      for (std::size_t j = 0; j < nb; ++j)
        for (std::size_t l = 0; l <= j; ++l)
        {
          if (l != j && !b(j, l))
            continue;
          if (i == k && j == l)
            continue;
          out.set(i * nb + j, k * nb + l);
        }
    }
  return out;
}

} // namespace yaqa
