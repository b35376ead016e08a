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

#include "yaqa/transform.hpp"
#include "yaqa/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace yaqa
{

namespace
{

void require_pow2(std::size_t n)
{
  if (!is_power_of_two(n))
  {
    std::ostringstream ss;
    ss << n << " is not a power of two";
    throw Error(ErrorKind::NotPowerOfTwo, ss.str());
  }
}

double trace_of_pivots(const SymMatrix &h, double reg)
{
  const auto f = ldl(h, reg);
  double t = 0.0;
  for (double d : f.D)
    t += d;
  return t;
}

} // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Matrix hadamard(std::size_t n)
{
  require_pow2(n);
  Matrix h(1, 1, 1.0);
  for (std::size_t k = 1; k < n; k *= 2)
  {
    Matrix next(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
      {
        const double v = h(i, j) / std::sqrt(2.0);
        next(i, j) = v;
        next(i, j + k) = v;
        next(i + k, j) = v;
        next(i + k, j + k) = -v;
      }
    h = std::move(next);
  }
  return h;
}

void fwht(std::span<double> x)
{
  const std::size_t n = x.size();
  require_pow2(n);
  for (std::size_t len = 1; len < n; len *= 2)
    for (std::size_t i = 0; i < n; i += 2 * len)
      for (std::size_t j = i; j < i + len; ++j)
      {
        const double a = x[j], b = x[j + len];
        x[j] = a + b;
        x[j + len] = a - b;
      }
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (double &v : x)
    v *= s;
}

RHT RHT::random(std::size_t n, std::uint64_t seed)
{
  require_pow2(n);
  RHT r{n, std::vector<double>(n), seed};
  Rng rng(seed);
  for (double &s : r.signs)
    s = (rng.bits() >> 63) ? -1.0 : 1.0;
  return r;
}

RHT RHT::identity_signs(std::size_t n)
{
  require_pow2(n);
  return RHT{n, std::vector<double>(n, 1.0), 0};
}

void RHT::apply(std::span<double> x) const
{
  if (x.size() != n)
    throw Error(ErrorKind::ShapeMismatch, "RHT size mismatch");
  for (std::size_t i = 0; i < n; ++i)
    x[i] *= signs[i];
  fwht(x);
}

void RHT::apply_inverse(std::span<double> x) const
{
  if (x.size() != n)
    throw Error(ErrorKind::ShapeMismatch, "RHT size mismatch");
  fwht(x); // normalized Sylvester H is symmetric and orthogonal
  for (std::size_t i = 0; i < n; ++i)
    x[i] *= signs[i];
}

Matrix RHT::left(const Matrix &a) const
{
  Matrix t = a.transpose();
  for (std::size_t c = 0; c < t.rows(); ++c)
    apply(t.row(c));
  return t.transpose();
}

Matrix RHT::left_inverse(const Matrix &a) const
{
  Matrix t = a.transpose();
  for (std::size_t c = 0; c < t.rows(); ++c)
    apply_inverse(t.row(c));
  return t.transpose();
}

Matrix RHT::right_transpose(const Matrix &a) const
{
  Matrix out = a;
  for (std::size_t r = 0; r < out.rows(); ++r)
    apply(out.row(r));
  return out;
}

Matrix RHT::right(const Matrix &a) const
{
  Matrix out = a;
  for (std::size_t r = 0; r < out.rows(); ++r)
    apply_inverse(out.row(r));
  return out;
}

Matrix RHT::conjugate(const SymMatrix &h) const { return right_transpose(left(h.matrix())); }

Matrix RHT::dense() const { return left(Matrix::identity(n)); }

Matrix IncoherentProblem::restore(const Matrix &x) const { return V.right(U.left_inverse(x)); }

IncoherentProblem incoherence_process(const Matrix &w, const KronSketch &s, std::uint64_t seed_o,
                                      std::uint64_t seed_i)
{
  if (w.rows() != s.m() || w.cols() != s.n())
    throw Error(ErrorKind::ShapeMismatch, "incoherence_process: weight and sketch shapes differ");
  IncoherentProblem p;
  p.U = RHT::random(w.rows(), seed_o);
  p.V = RHT::random(w.cols(), seed_i);
  p.W = p.V.right_transpose(p.U.left(w));
  p.sketch = {SymMatrix(p.U.conjugate(s.H_O)), SymMatrix(p.V.conjugate(s.H_I)), s.meta};
  return p;
}

SymMatrix transform_dense_hessian(const SymMatrix &h, const RHT &u, const RHT &v)
{
  const std::size_t m = u.n, n = v.n;
  if (h.dim() != m * n)
    throw Error(ErrorKind::ShapeMismatch, "transform_dense_hessian: H is not mn x mn");
  // Every row of H is a vec(X); mapping each to vec(U X V^T) right-multiplies
  // H by T^T. Doing it twice (with a transpose between) gives T H T^T.
  auto map_rows = [&](const Matrix &a) {
    Matrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
    {
      const Matrix x = unvec(a.row(r), m, n);
      const Matrix y = v.right_transpose(u.left(x));
      std::copy(y.data().begin(), y.data().end(), out.row(r).begin());
    }
    return out;
  };
  const Matrix once = map_rows(h.matrix());
  return SymMatrix(map_rows(once.transpose()));
}

double incoherence_mu(const SymMatrix &h)
{
  const auto e = sym_eigen(h);
  double mx = 0.0;
  for (double q : e.Q.data())
    mx = std::max(mx, std::abs(q));
  return std::sqrt(static_cast<double>(h.dim())) * mx;
}

double weight_mu(const Matrix &w)
{
  const double f = frob_norm(w);
  if (!(f > 0.0))
    throw Error(ErrorKind::ZeroMatrix, "weight_mu of a zero matrix");
  double mx = 0.0;
  for (double v : w.data())
    mx = std::max(mx, std::abs(v));
  return std::sqrt(static_cast<double>(w.size())) * mx / f;
}

double trace_ratio_diagnostic(const KronSketch &before, const KronSketch &after, double reg)
{
  const double num = trace_of_pivots(after.H_O, reg) * trace_of_pivots(after.H_I, reg);
  const double den = trace_of_pivots(before.H_O, reg) * trace_of_pivots(before.H_I, reg);
  return num / den;
}

} // namespace yaqa
