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

#ifndef YAQA_TRANSFORM_HPP
#define YAQA_TRANSFORM_HPP

#include "yaqa/kron_sketch.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace yaqa
{

bool is_power_of_two(std::size_t n);

/// Normalized Sylvester Hadamard matrix, entries +-1/sqrt(n).
Matrix hadamard(std::size_t n);

/// In-place normalized fast Walsh-Hadamard transform, O(n log n).
void fwht(std::span<double> x);

/// U = H_n diag(signs). Orthogonal.
struct RHT
{
  std::size_t n = 0;
  std::vector<double> signs; // +-1
  std::uint64_t seed = 0;

  static RHT random(std::size_t n, std::uint64_t seed);
  static RHT identity_signs(std::size_t n);

  void apply(std::span<double> x) const;         // x <- U x
  void apply_inverse(std::span<double> x) const; // x <- U^T x
  Matrix left(const Matrix &a) const;             // U A
  Matrix left_inverse(const Matrix &a) const;     // U^T A
  Matrix right_transpose(const Matrix &a) const;  // A U^T
  Matrix right(const Matrix &a) const;            // A U
  Matrix conjugate(const SymMatrix &h) const;     // U H U^T
  Matrix dense() const;
};

struct IncoherentProblem
{
  Matrix W;          // U W V^T
  KronSketch sketch; // (U H_O U^T, V H_I V^T)
  RHT U;             // m-dimensional, output side
  RHT V;             // n-dimensional, input side

  /// U^T X V: maps a matrix from the processed space back.
  Matrix restore(const Matrix &x) const;
};

IncoherentProblem incoherence_process(const Matrix &w, const KronSketch &s, std::uint64_t seed_o,
                                      std::uint64_t seed_i);

/// (U kron V) H (U kron V)^T for a dense mn x mn H over row-major vec(W):
/// the Hessian of the processed weights U W V^T. Uses the fast transforms.
SymMatrix transform_dense_hessian(const SymMatrix &h, const RHT &u, const RHT &v);

/// sqrt(n) * max |Q_ij| over the computed eigenvectors. For degenerate
/// spectra the eigenbasis is not unique and neither is this number.
double incoherence_mu(const SymMatrix &h);

/// sqrt(mn) * max |W_ij| / ||W||_F.
double weight_mu(const Matrix &w);

/// tr(D_O') tr(D_I') / (tr(D_O) tr(D_I)) for LDL pivots before and after.
double trace_ratio_diagnostic(const KronSketch &before, const KronSketch &after, double reg = 0.0);

} // namespace yaqa

#endif // YAQA_TRANSFORM_HPP
