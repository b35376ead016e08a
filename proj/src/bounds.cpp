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

#include "yaqa/bounds.hpp"
#include "yaqa/rounding.hpp"
#include "yaqa/transform.hpp"

#include <cmath>

namespace yaqa
{

namespace
{

double sq(double x) { return x * x; }

KronSketch regularized(const KronSketch &s, double reg)
{
  return {s.H_O.regularized(reg), s.H_I.regularized(reg), s.meta};
}

} // namespace

ProxyBounds proxy_bounds(const KronSketch &s, std::size_t gx, std::size_t gy, double sigma_sq, double reg,
                         double mu_O, double mu_I)
{
  const KronSketch r = regularized(s, reg);
  const double m = static_cast<double>(s.m()), n = static_cast<double>(s.n());
  const double g = static_cast<double>(gx * gy);
  ProxyBounds b;
  b.mu_O = mu_O < 0.0 ? incoherence_mu(r.H_O) : mu_O;
  b.mu_I = mu_I < 0.0 ? incoherence_mu(r.H_I) : mu_I;
  b.trD = block_ldl(r.H_I, gy).trace_d() * block_ldl(r.H_O, gx).trace_d() * g * sigma_sq;
  b.mu = g * sq(b.mu_I) * sq(b.mu_O) / (m * n) * sq(trace_sqrt(r.H_I)) * sq(trace_sqrt(r.H_O)) * sigma_sq;
  return b;
}

CosineGap cosine_gap(const Matrix &a, const Matrix &b, std::span<const double> x)
{
  const double na = frob_norm(a), nb = frob_norm(b);
  if (!(na > 0.0) || !(nb > 0.0))
    throw Error(ErrorKind::ZeroMatrix, "cosine gap of a zero matrix");
  CosineGap g;
  g.c = frob_cosine(a, b);
  double xx = 0.0;
  for (double v : x)
    xx += v * v;
  g.measured = std::abs(quad_form(x, a) / na - quad_form(x, b) / nb);
  g.bound = xx * std::sqrt(std::max(0.0, 2.0 - 2.0 * g.c));
  // Rounding in the two quadratic forms is relative to ||x||^2.
  g.holds = g.measured <= g.bound + 1e-12 * xx;
  return g;
}

CosineGap cosine_gap_bound(const SymMatrix &h, const KronSketch &s, const Matrix &delta, double reg)
{
  const KronSketch r = regularized(s, reg);
  return cosine_gap(h.matrix(), r.dense(), vec(delta));
}

BoundReport hessian_error_bound(const SymMatrix &h, const KronSketch &s, const Matrix &delta, std::size_t gx,
                                std::size_t gy, double sigma_sq, double reg)
{
  if (s.m() * s.n() > 4096)
    throw Error(ErrorKind::TooLarge, "error_bound needs a dense H, mn <= 4096");
  if (h.dim() != s.m() * s.n() || delta.rows() != s.m() || delta.cols() != s.n())
    throw Error(ErrorKind::ShapeMismatch, "error_bound: inconsistent shapes");
  const KronSketch r = regularized(s, reg);
  const auto pb = proxy_bounds(s, gx, gy, sigma_sq, reg);
  const auto cg = cosine_gap(h.matrix(), r.dense(), vec(delta));
  const double nh = frob_norm(h.matrix());
  const double no = frob_norm(r.H_O.matrix()), ni = frob_norm(r.H_I.matrix());

  BoundReport b;
  b.proxy_error = proxy_error(delta, Matrix(delta.rows(), delta.cols()), r);
  b.proxy_bound_trD = pb.trD;
  b.proxy_bound_mu = pb.mu;
  b.true_error = std::max(0.0, quad_form(vec(delta), h.matrix()));
  b.cosine = cg.c;
  b.error_bound_mu_term = nh * pb.mu / (ni * no);
  b.error_bound = nh * (frob_norm(delta) * frob_norm(delta) * std::sqrt(std::max(0.0, 2.0 - 2.0 * cg.c))) +
                     b.error_bound_mu_term;
  return b;
}

LdlqRatio ldlq_ratio(const KronSketch &s, const SymMatrix &h1, double mu_O, double mu_I, double mu_1)
{
  const double m = static_cast<double>(s.m());
  const double tO = sq(trace_sqrt(s.H_O)), tI = sq(trace_sqrt(s.H_I)), t1 = sq(trace_sqrt(h1));
  const double nO = frob_norm(s.H_O.matrix()), nI = frob_norm(s.H_I.matrix()), n1 = frob_norm(h1.matrix());
  if (!(nO > 0.0) || !(nI > 0.0) || !(n1 > 0.0))
    throw Error(ErrorKind::ZeroMatrix, "ldlq_ratio of a zero matrix");
  LdlqRatio e;
  e.ratio = sq(mu_O) * sq(mu_I) * tI * n1 * tO / (m * std::sqrt(m) * sq(mu_1) * t1 * nI * nO);
  e.k_O = m * sq(mu_1) * t1 * nI / (sq(mu_O) * sq(mu_I) * tI * n1);
  e.rank_O = numerical_rank(s.H_O);
  e.favorable = e.ratio <= 1.0;
  return e;
}

LdlqRatio ldlq_ratio(const KronSketch &s, const SymMatrix &h1)
{
  return ldlq_ratio(s, h1, incoherence_mu(s.H_O), incoherence_mu(s.H_I), incoherence_mu(h1));
}

} // namespace yaqa
