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

#ifndef YAQA_SND_HPP
#define YAQA_SND_HPP

#include "yaqa/linalg.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace yaqa
{

/// Strictly lower triangular boolean support of L - I.
class SupportPattern
{
public:
  SupportPattern() = default;
  explicit SupportPattern(std::size_t n) : _n(n), _mask(n * n, 0) {}

  std::size_t dim() const noexcept { return _n; }
  bool operator()(std::size_t i, std::size_t j) const { return _mask[i * _n + j] != 0; }

  /// Throws InvalidArgument unless i > j.
  void set(std::size_t i, std::size_t j, bool on = true);

  std::size_t edges() const;

  /// Strictly lower triangular support of a unit lower triangular matrix;
  /// |entries| at or below `zero_tol` are structural zeros.
  static SupportPattern of_lower(const Matrix &l, double zero_tol = 1e-14);

  /// Reads a 0/1 CSV; upper-triangular or diagonal ones are rejected.
  static SupportPattern from_csv(std::istream &is);

  friend bool operator==(const SupportPattern &, const SupportPattern &) = default;

private:
  std::size_t _n = 0;
  std::vector<std::uint8_t> _mask;
};

/// Nilpotence index of the support: 1 + longest path length in the DAG whose
/// adjacency is the mask. The empty pattern has snd 1.
std::size_t snd(const SupportPattern &pattern);

std::size_t snd_of_ldl(const Matrix &l, double zero_tol = 1e-14);

/// Support of (L_a kron L_b) - I for generic values on both masks, indexed
/// consistently with kron().
SupportPattern kron_support(const SupportPattern &a, const SupportPattern &b);

} // namespace yaqa

#endif // YAQA_SND_HPP
