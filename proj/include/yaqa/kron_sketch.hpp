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

#ifndef YAQA_KRON_SKETCH_HPP
#define YAQA_KRON_SKETCH_HPP

#include "yaqa/linalg.hpp"

#include <string>

namespace yaqa
{

struct SketchMeta
{
  std::string method = "given";
  std::size_t iterations = 0;
  bool normalized = false;   // ||H_O||_F == 1 with the scale moved into H_I
  std::string normalization; // free-form note on how expectations were taken
};

/// H ~= H_O kron H_I, with H_O acting on output channels (rows of W) and H_I
/// on input channels (columns of W).
struct KronSketch
{
  SymMatrix H_O; // m x m
  SymMatrix H_I; // n x n
  SketchMeta meta;

  std::size_t m() const noexcept { return H_O.dim(); }
  std::size_t n() const noexcept { return H_I.dim(); }

  /// The LDLQ sketch (I, H_1).
  static KronSketch ldlq(const SymMatrix &h1, std::size_t m)
  {
    return {SymMatrix::identity(m), h1, {"ldlq", 0, false, ""}};
  }

  /// Dense H_O kron H_I; only sensible at toy scale.
  Matrix dense() const { return kron(H_O.matrix(), H_I.matrix()); }
};

/// Dense mn x mn layer Hessian over vec(W) (row-major flattening).
struct FisherEstimate
{
  SymMatrix H;
  std::string provenance = "exact-enumeration"; // or monte-carlo, token-independent
  std::size_t samples = 0;                      // Monte-Carlo draws per sequence
};

} // namespace yaqa

#endif // YAQA_KRON_SKETCH_HPP
