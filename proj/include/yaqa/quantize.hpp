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

#ifndef YAQA_QUANTIZE_HPP
#define YAQA_QUANTIZE_HPP

#include "yaqa/linalg.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace yaqa
{

enum class RoundingMode
{
  Nearest,
  Stochastic,
};

struct FixedScale
{
  double step = 1.0;
};

/// One absmax scale per contiguous run of `group_len` entries within a row.
struct GroupwiseScale
{
  std::size_t group_len = 32;
};

/// Signed-integer grid quantizer. Codes live in [-2^(bits-1), 2^(bits-1) - 1]
/// and out-of-range inputs saturate.
struct QuantizerSpec
{
  int bits = 4;
  RoundingMode mode = RoundingMode::Nearest;
  std::variant<FixedScale, GroupwiseScale> scale = FixedScale{};
  std::size_t block_rows = 1; // g_x
  std::size_t block_cols = 1; // g_y

  void validate() const;
  std::int64_t code_min() const { return -(std::int64_t{1} << (bits - 1)); }
  std::int64_t code_max() const { return (std::int64_t{1} << (bits - 1)) - 1; }
  bool groupwise() const { return std::holds_alternative<GroupwiseScale>(scale); }

  /// Unit step and a 32-bit range: effectively unbounded at test scale.
  static QuantizerSpec unit_grid(RoundingMode mode = RoundingMode::Nearest);
};

struct QuantizedWeights
{
  Matrix values;                    // codes * scale, exactly
  std::vector<std::int64_t> codes;  // row-major, same shape as values
  Matrix scales;                    // rows x groups; 1 x 1 for a fixed step
  std::size_t group_len = 0;        // 0 for a fixed step

  std::int64_t code(std::size_t i, std::size_t j) const { return codes[i * values.cols() + j]; }
};

/// absmax / (2^(bits-1) - 1) per row group; all-zero groups get scale 1.
Matrix groupwise_scales(const Matrix &w, int bits, std::size_t group_len);

/// A quantizer with frozen scales. Stochastic draws use a counter-based stream
/// keyed on (seed, row, col) only, so `code()` is a deterministic function of
/// its arguments and repeated calls agree.
class Quantizer
{
public:
  /// Scales are computed from `reference` (the unquantized weights) when the
  /// spec is groupwise, and never change afterwards.
  Quantizer(const QuantizerSpec &spec, const Matrix &reference, std::uint64_t seed = 0);

  const QuantizerSpec &spec() const noexcept { return _spec; }
  const Matrix &scales() const noexcept { return _scales; }

  double scale(std::size_t i, std::size_t j) const
  {
    return _group_len ? _scales(i, j / _group_len) : _scales(0, 0);
  }

  std::int64_t code(std::size_t i, std::size_t j, double x) const;
  double value(std::size_t i, std::size_t j, std::int64_t code) const
  {
    return static_cast<double>(code) * scale(i, j);
  }

  QuantizedWeights quantize(const Matrix &x) const;

  /// step^2 / 4, maximised over groups.
  double sigma_sq() const;

private:
  QuantizerSpec _spec;
  Matrix _scales;
  std::size_t _group_len = 0;
  std::size_t _rows = 0;
  std::size_t _cols = 0;
  std::uint64_t _seed = 0;
};

QuantizedWeights quantize_nearest(const Matrix &x, const QuantizerSpec &spec);
QuantizedWeights quantize_stochastic(const Matrix &x, const QuantizerSpec &spec, std::uint64_t seed);

double sigma_sq_bound(const QuantizerSpec &spec, const Matrix &scales = Matrix());

} // namespace yaqa

#endif // YAQA_QUANTIZE_HPP
