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

#include "yaqa/quantize.hpp"
#include "yaqa/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace yaqa
{

void QuantizerSpec::validate() const
{
  if (bits < 1 || bits > 32)
    throw Error(ErrorKind::InvalidArgument, "bits must be in [1, 32]");
  if (block_rows == 0 || block_cols == 0)
    throw Error(ErrorKind::InvalidArgument, "block shape must be positive");
  if (const auto *f = std::get_if<FixedScale>(&scale))
  {
    if (!(f->step > 0.0) || !std::isfinite(f->step))
      throw Error(ErrorKind::InvalidArgument, "fixed step must be positive");
  }
  else
  {
    if (std::get<GroupwiseScale>(scale).group_len == 0)
      throw Error(ErrorKind::InvalidArgument, "group_len must be >= 1");
    if (bits < 2)
      throw Error(ErrorKind::InvalidArgument, "groupwise absmax scaling needs bits >= 2");
  }
}

QuantizerSpec QuantizerSpec::unit_grid(RoundingMode mode)
{
  QuantizerSpec s;
  s.bits = 32;
  s.mode = mode;
  s.scale = FixedScale{1.0};
  return s;
}

Matrix groupwise_scales(const Matrix &w, int bits, std::size_t group_len)
{
  if (group_len == 0 || w.cols() % group_len != 0)
  {
    std::ostringstream ss;
    ss << "group_len " << group_len << " does not divide " << w.cols();
    throw Error(ErrorKind::ShapeMismatch, ss.str());
  }
  const double qmax = static_cast<double>((std::int64_t{1} << (bits - 1)) - 1);
  const std::size_t groups = w.cols() / group_len;
  Matrix scales(w.rows(), groups);
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t g = 0; g < groups; ++g)
    {
      double amax = 0.0;
      for (std::size_t j = g * group_len; j < (g + 1) * group_len; ++j)
        amax = std::max(amax, std::abs(w(i, j)));
      scales(i, g) = amax > 0.0 ? amax / qmax : 1.0;
    }
  return scales;
}

Quantizer::Quantizer(const QuantizerSpec &spec, const Matrix &reference, std::uint64_t seed)
  : _spec(spec), _rows(reference.rows()), _cols(reference.cols()), _seed(seed)
{
  _spec.validate();
  if (const auto *g = std::get_if<GroupwiseScale>(&_spec.scale))
  {
    _group_len = g->group_len;
    _scales = groupwise_scales(reference, _spec.bits, _group_len);
  }
  else
  {
    _scales = Matrix(1, 1, std::get<FixedScale>(_spec.scale).step);
  }
}

std::int64_t Quantizer::code(std::size_t i, std::size_t j, double x) const
{
  const double y = x / scale(i, j);
  const double lo_b = static_cast<double>(_spec.code_min());
  const double hi_b = static_cast<double>(_spec.code_max());
  double q;
  if (_spec.mode == RoundingMode::Nearest)
  {
    // Default FE_TONEAREST: ties go to the even grid index.
    q = std::nearbyint(y);
  }
  else
  {
    const double lo = std::floor(y);
    const double frac = y - lo;
    const double u = unit_from_bits(derive_seed(_seed, i, j));
    q = u < frac ? lo + 1.0 : lo;
  }
  if (!(q >= lo_b)) // also catches NaN
    q = lo_b;
  if (q > hi_b)
    q = hi_b;
  return static_cast<std::int64_t>(q);
}

QuantizedWeights Quantizer::quantize(const Matrix &x) const
{
  if (x.rows() != _rows || x.cols() != _cols)
    throw Error(ErrorKind::ShapeMismatch, "Quantizer::quantize: shape differs from reference");
  QuantizedWeights out{Matrix(_rows, _cols), std::vector<std::int64_t>(_rows * _cols), _scales, _group_len};
  for (std::size_t i = 0; i < _rows; ++i)
    for (std::size_t j = 0; j < _cols; ++j)
    {
      const auto c = code(i, j, x(i, j));
      out.codes[i * _cols + j] = c;
      out.values(i, j) = value(i, j, c);
    }
  return out;
}

double Quantizer::sigma_sq() const { return sigma_sq_bound(_spec, _scales); }

QuantizedWeights quantize_nearest(const Matrix &x, const QuantizerSpec &spec)
{
  QuantizerSpec s = spec;
  s.mode = RoundingMode::Nearest;
  return Quantizer(s, x).quantize(x);
}

QuantizedWeights quantize_stochastic(const Matrix &x, const QuantizerSpec &spec, std::uint64_t seed)
{
  QuantizerSpec s = spec;
  s.mode = RoundingMode::Stochastic;
  return Quantizer(s, x, seed).quantize(x);
}

double sigma_sq_bound(const QuantizerSpec &spec, const Matrix &scales)
{
  if (const auto *f = std::get_if<FixedScale>(&spec.scale))
    return f->step * f->step / 4.0;
  if (scales.empty())
    throw Error(ErrorKind::InvalidArgument, "groupwise sigma^2 needs the frozen scales");
  double smax = 0.0;
  for (double s : scales.data())
    smax = std::max(smax, s);
  return smax * smax / 4.0;
}

} // namespace yaqa
