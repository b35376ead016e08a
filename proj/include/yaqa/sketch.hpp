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

#ifndef YAQA_SKETCH_HPP
#define YAQA_SKETCH_HPP

#include "yaqa/kron_sketch.hpp"
#include "yaqa/model.hpp"

#include <vector>

namespace yaqa
{

enum class PowerSchedule
{
  // H_I from the current H_O, then H_O from the new H_I. Each half step is
  // the exact maximizer given the other factor, so the normalized cosine
  // never decreases.
  Alternating,
  // Both factors from the previous pair, starting at (I, I). One round of
  // this is what a single pass over per-sequence gradients computes.
  Simultaneous,
};

/// sum_{i,k} H[(i,j),(k,l)] A(i,k): contracts out the output side (n x n).
Matrix contract_output_side(const SymMatrix &h, const Matrix &a, std::size_t m, std::size_t n);
/// sum_{j,l} H[(i,j),(k,l)] B(j,l): contracts out the input side (m x m).
Matrix contract_input_side(const SymMatrix &h, const Matrix &b, std::size_t m, std::size_t n);
/// ||H - A kron B||_F without forming the product.
double kron_residual(const SymMatrix &h, const Matrix &a, const Matrix &b);
/// <H, A kron B>.
double kron_inner(const SymMatrix &h, const Matrix &a, const Matrix &b);

/// Symmetrize, clamp negative eigenvalues, scale so ||H_O||_F = 1.
KronSketch finalize_sketch(const Matrix &h_o, const Matrix &h_i, SketchMeta meta);

/// Power iteration on the dense H. `history`, when given, receives the
/// normalized cosine after every round.
KronSketch power_iterate_full(const FisherEstimate &h, std::size_t m, std::size_t n, std::size_t iters,
                              PowerSchedule schedule = PowerSchedule::Alternating,
                              std::vector<double> *history = nullptr, bool finalize = true);

/// Best Kronecker approximation in Frobenius norm, from the leading singular
/// pair of the m^2 x n^2 rearrangement of H.
KronSketch van_loan_optimal(const FisherEstimate &h, std::size_t m, std::size_t n);

/// Token-independent power iteration from (H_O, H_I) = (I, H_1), updating
/// H_O first in each round. iters = 0 returns exactly that pair, unnormalized.
KronSketch sketch_a(const ToyModel &model, std::size_t layer, const Dataset &data, std::size_t iters,
                    const GradientSource &src = {});

/// One simultaneous round on per-sequence gradients from identity:
/// H_I = E[G^T G] / m, H_O = E[G G^T] / n.
KronSketch sketch_b(const ToyModel &model, std::size_t layer, const Dataset &data, const GradientSource &src = {},
                    bool finalize = true);

struct SketchQuality
{
  double cosine = 0.0;            // <H, H_O kron H_I> / (||H|| ||H_O|| ||H_I||)
  double normalized_cosine = 0.0; // same without ||H||
  double residual = 0.0;          // ||H - H_O kron H_I||_F
  double mu_O = 0.0;
  double mu_I = 0.0;
  std::size_t rank_O = 0;
  std::size_t rank_I = 0;
};

SketchQuality sketch_quality(const FisherEstimate &h, const KronSketch &s);

} // namespace yaqa

#endif // YAQA_SKETCH_HPP
