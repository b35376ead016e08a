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

// Brute-force reference computations used by the unit tests and by the
// verification suites. Nothing here calls into the code paths it checks.

#ifndef YAQA_ORACLES_HPP
#define YAQA_ORACLES_HPP

#include "yaqa/linalg.hpp"
#include "yaqa/snd.hpp"

#include <cstdint>

namespace yaqa::oracle
{

/// Smallest k with N^k = 0 over the boolean semiring, by repeated products.
std::size_t snd_by_powers(const SupportPattern &pattern);

/// Random strictly-lower mask with edge probability p.
SupportPattern random_mask(std::size_t n, double p, std::uint64_t seed);

/// Partial trace contractions of a dense mn x mn matrix H indexed as
/// H[(i*n + j), (k*n + l)]:
///   inner(H, A)[j, l] = sum_{i,k} H[(i,j),(k,l)] A[i,k]
///   outer(H, B)[i, k] = sum_{j,l} H[(i,j),(k,l)] B[j,l]
Matrix contract_outer_factor(const Matrix &h, const Matrix &a, std::size_t m, std::size_t n);
Matrix contract_inner_factor(const Matrix &h, const Matrix &b, std::size_t m, std::size_t n);

/// Central finite difference of a scalar function along a direction.
template <typename F> double central_difference(F &&f, double step)
{
  return (f(step) - f(-step)) / (2.0 * step);
}

} // namespace yaqa::oracle

#endif // YAQA_ORACLES_HPP
