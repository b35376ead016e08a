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

// Numeric forms of the error bounds. All matrix norms are Frobenius.
// Bounds involving LDL pivots or incoherence are evaluated on the
// regularized factors, since those are the ones rounding actually factors.

#ifndef YAQA_BOUNDS_HPP
#define YAQA_BOUNDS_HPP

#include "yaqa/kron_sketch.hpp"

#include <string>

namespace yaqa
{

struct ProxyBounds
{
  double trD = 0.0; // tr(D_I) tr(D_O) g_x g_y sigma^2
  double mu = 0.0;  // g_x g_y mu_I^2 mu_O^2 / (mn) tr(H_I^1/2)^2 tr(H_O^1/2)^2 sigma^2
  double mu_O = 0.0;
  double mu_I = 0.0;
};

/// mu_O / mu_I < 0 means "measure them with incoherence_mu".
ProxyBounds proxy_bounds(const KronSketch &s, std::size_t gx, std::size_t gy, double sigma_sq, double reg,
                         double mu_O = -1.0, double mu_I = -1.0);

struct CosineGap
{
  double c = 0.0;        // cosine between A and B
  double measured = 0.0; // |x A x / ||A|| - x B x / ||B|||
  double bound = 0.0;    // ||x||^2 sqrt(2 - 2c)
  bool holds = false;
};

/// The cosine gap bound for two nonzero symmetric matrices and a vector x.
CosineGap cosine_gap(const Matrix &a, const Matrix &b, std::span<const double> x);

/// Same with A = H and B = H_O kron H_I (regularized), x = vec(D).
CosineGap cosine_gap_bound(const SymMatrix &h, const KronSketch &s, const Matrix &delta, double reg);

struct BoundReport
{
  double proxy_error = 0.0; // tr(D^T H_O D H_I) on the regularized factors
  double proxy_bound_trD = 0.0;
  double proxy_bound_mu = 0.0;
  double true_error = 0.0; // vec(D) H vec(D)^T
  double error_bound = 0.0; // ||H|| (||D||^2 sqrt(2 - 2c) + mu-form / (||H_I|| ||H_O||))
  double error_bound_mu_term = 0.0; // ||H|| * mu-form / (||H_I|| ||H_O||)
  double cosine = 0.0;
  double ldlq_ratio = 0.0;
  double rank_condition_k = 0.0;
  std::string norms = "frobenius";
};

/// End-to-end error bound for one realization of D. The proxy term is an
/// expectation bound, so compare means over trials, not single draws.
BoundReport hessian_error_bound(const SymMatrix &h, const KronSketch &s, const Matrix &delta, std::size_t gx,
                                std::size_t gy, double sigma_sq, double reg);

struct LdlqRatio
{
  double ratio = 0.0; // trace part of the YAQA bound over the LDLQ one
  double k_O = 0.0;   // rank threshold under which ratio <= 1
  std::size_t rank_O = 0;
  bool favorable = false; // ratio <= 1
};

LdlqRatio ldlq_ratio(const KronSketch &s, const SymMatrix &h1, double mu_O, double mu_I, double mu_1);
/// Measures the three incoherences with incoherence_mu.
LdlqRatio ldlq_ratio(const KronSketch &s, const SymMatrix &h1);

} // namespace yaqa

#endif // YAQA_BOUNDS_HPP
