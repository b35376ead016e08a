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

// Adaptive rounding with LDL error feedback.
//
// Every algorithm here starts from W_0 = Q(W*) and repeats
//   W <- Q(W* + F(W* - W))
// until nothing changes, where F is the strictly-lower feedback implied by the
// LDL factors of the Hessian (or its Kronecker factors). One "sweep" is one
// evaluation of the right-hand side over the whole matrix.

#ifndef YAQA_ROUNDING_HPP
#define YAQA_ROUNDING_HPP

#include "yaqa/kron_sketch.hpp"
#include "yaqa/quantize.hpp"

#include <cstdint>
#include <vector>

namespace yaqa
{

struct RoundingProblem
{
  Matrix W_star; // m x n
  KronSketch sketch;
  QuantizerSpec spec;
  double reg = 1e-4;
  std::uint64_t seed = 0; // stochastic rounding stream
};

struct RoundingResult
{
  QuantizedWeights W_hat;
  std::size_t sweeps = 0;
  double proxy_error = 0.0; // tr(D^T H_O D H_I) on the unregularized sketch
  bool converged = false;
};

/// Fixed point of W = Q(W* + (W* - W)(L_1 - I)) with L_1 from ldl(H_I).
/// Requires H_O == I.
RoundingResult ldlq(const RoundingProblem &p);

/// Same iteration with a dense mn x mn Hessian over vec(W). Brute force and
/// capped at mn <= 4096. `column_major` flattens W column-first instead; it
/// exists only to show that the wrong convention is detected.
RoundingResult vec_ldlq_oracle(const Matrix &w_star, const SymMatrix &h, const QuantizerSpec &spec,
                               double reg = 0.0, std::uint64_t seed = 0, bool column_major = false);

/// Kronecker fixed point, synchronous sweeps over the whole matrix.
RoundingResult yaqa_round(const RoundingProblem &p);

/// Same fixed point in a single scheduled pass: g_x x g_y blocks are
/// finalized along anti-diagonals starting from the bottom-right corner.
RoundingResult yaqa_round_wavefront(const RoundingProblem &p);

/// LDLQ per output-channel group, each with its own n x n input Hessian.
/// `blocks.size()` must divide m; rows are split into contiguous groups.
RoundingResult guidedquant_round(const RoundingProblem &p, const std::vector<SymMatrix> &blocks);

/// Per-group input Hessians from a dense mn x mn H: the mean of the diagonal
/// n x n blocks belonging to the rows of each group.
std::vector<SymMatrix> guided_blocks_from_full(const SymMatrix &h, std::size_t m, std::size_t n,
                                               std::size_t groups);

/// Dense block-diagonal mn x mn assembly of per-group blocks (test scale).
SymMatrix guided_dense(const std::vector<SymMatrix> &blocks, std::size_t m);

/// tr(D^T H_O D H_I) with D = W* - W_hat.
double proxy_error(const Matrix &w_star, const Matrix &w_hat, const KronSketch &s);

/// Strict feedback part L - I of the (block) LDL factor: diagonal blocks are
/// exactly zero.
Matrix strict_factor(const SymMatrix &h, std::size_t block, double reg);

} // namespace yaqa

#endif // YAQA_ROUNDING_HPP
