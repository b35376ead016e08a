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

#include "doctest.h"

#include "yaqa/quantize.hpp"
#include "yaqa/random.hpp"

#include <cmath>

using namespace yaqa;

namespace
{

Matrix scalar(double x) { return Matrix(1, 1, x); }

} // namespace

TEST_SUITE("quantize")
{
  TEST_CASE("nearest rounding on the unit grid")
  {
    const auto spec = QuantizerSpec::unit_grid();
    CHECK(quantize_nearest(scalar(0.4), spec).values(0, 0) == 0.0);
    CHECK(quantize_nearest(scalar(3.0), spec).values(0, 0) == 3.0);
    CHECK(quantize_nearest(scalar(-2.0), spec).code(0, 0) == -2);
    // ties go to the even index
    CHECK(quantize_nearest(scalar(0.5), spec).code(0, 0) == 0);
    CHECK(quantize_nearest(scalar(1.5), spec).code(0, 0) == 2);
    CHECK(quantize_nearest(scalar(-0.5), spec).code(0, 0) == 0);
    CHECK(quantize_nearest(scalar(-1.5), spec).code(0, 0) == -2);
  }

  TEST_CASE("saturation at the grid bounds")
  {
    QuantizerSpec spec;
    spec.bits = 3;
    spec.scale = FixedScale{0.5};
    CHECK(quantize_nearest(scalar(100.0), spec).code(0, 0) == 3);
    CHECK(quantize_nearest(scalar(-100.0), spec).code(0, 0) == -4);
    CHECK(quantize_nearest(scalar(-100.0), spec).values(0, 0) == -2.0);
  }

  TEST_CASE("nearest rounding is idempotent")
  {
    Rng rng(3);
    QuantizerSpec spec;
    spec.bits = 4;
    spec.scale = FixedScale{0.37};
    const Matrix x = rng.gaussian(8, 8, 2.0);
    const auto q1 = quantize_nearest(x, spec);
    const auto q2 = quantize_nearest(q1.values, spec);
    CHECK(q1.values == q2.values);
    CHECK(q1.codes == q2.codes);
  }

  TEST_CASE("stochastic rounding on a grid point is exact")
  {
    const auto spec = QuantizerSpec::unit_grid(RoundingMode::Stochastic);
    for (std::uint64_t s = 0; s < 1000; ++s)
      CHECK(quantize_stochastic(scalar(2.0), spec, s).values(0, 0) == 2.0);
  }

  TEST_CASE("stochastic rounding is unbiased with bounded variance")
  {
    const auto spec = QuantizerSpec::unit_grid(RoundingMode::Stochastic);
    const int trials = 100000;
    for (double x : {0.5, 0.25, -1.7})
    {
      double sum = 0.0, sq = 0.0;
      for (int t = 0; t < trials; ++t)
      {
        const double q = quantize_stochastic(scalar(x), spec, static_cast<std::uint64_t>(t)).values(0, 0);
        sum += q;
        sq += (q - x) * (q - x);
      }
      const double mean = sum / trials;
      const double var = sq / trials;
      CHECK(std::abs(mean - x) <= 4.0 * 1.0 / std::sqrt(static_cast<double>(trials)));
      CHECK(var <= 0.25 + 3.0 * 0.25 / std::sqrt(static_cast<double>(trials)));
    }
  }

  TEST_CASE("stochastic draws are keyed by position, not call order")
  {
    Rng rng(9);
    const Matrix x = rng.gaussian(6, 6);
    const auto spec = QuantizerSpec::unit_grid(RoundingMode::Stochastic);
    const Quantizer q(spec, x, 42);
    const auto full = q.quantize(x);
    for (std::size_t i = 6; i-- > 0;)
      for (std::size_t j = 6; j-- > 0;)
        CHECK(q.code(i, j, x(i, j)) == full.code(i, j));
  }

  TEST_CASE("sigma squared bound")
  {
    CHECK(sigma_sq_bound(QuantizerSpec::unit_grid()) == 0.25);
    QuantizerSpec half;
    half.scale = FixedScale{0.5};
    CHECK(sigma_sq_bound(half) == 0.0625);

    Rng rng(5);
    QuantizerSpec g;
    g.bits = 4;
    g.scale = GroupwiseScale{8};
    const Matrix w = rng.gaussian(4, 32);
    const Quantizer q(g, w);
    const auto out = q.quantize(w);
    double max_sq = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i)
    {
      const double e = out.values.data()[i] - w.data()[i];
      max_sq = std::max(max_sq, e * e);
    }
    CHECK(max_sq <= q.sigma_sq());
  }

  TEST_CASE("groupwise scales")
  {
    const Matrix zeros(1, 4);
    const auto sz = groupwise_scales(zeros, 4, 4);
    CHECK(sz(0, 0) == 1.0);
    QuantizerSpec g;
    g.bits = 4;
    g.scale = GroupwiseScale{4};
    CHECK(quantize_nearest(zeros, g).codes == std::vector<std::int64_t>(4, 0));

    const Matrix seven{{7, -3, 1, 0}};
    CHECK(groupwise_scales(seven, 4, 4)(0, 0) == 1.0);

    Rng rng(13);
    const Matrix w = rng.gaussian(3, 64);
    g.scale = GroupwiseScale{32};
    const auto q = quantize_nearest(w, g);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 64; ++j)
      {
        const double s = q.scales(i, j / 32);
        CHECK(std::abs(q.values(i, j) - w(i, j)) <= s / 2 + 1e-15);
        CHECK(q.values(i, j) == static_cast<double>(q.code(i, j)) * s);
        CHECK(q.code(i, j) >= -8);
        CHECK(q.code(i, j) <= 7);
      }
    CHECK_THROWS_AS(groupwise_scales(w, 4, 7), Error);
  }

  TEST_CASE("quantizing a block depends only on that block")
  {
    Rng rng(21);
    QuantizerSpec g;
    g.bits = 3;
    g.scale = GroupwiseScale{4};
    Matrix w = rng.gaussian(4, 8);
    const auto before = quantize_nearest(w, g);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 4; j < 8; ++j)
        w(i, j) += rng.normal();
    const auto after = quantize_nearest(w, g);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(before.code(i, j) == after.code(i, j));
  }

  TEST_CASE("spec validation")
  {
    QuantizerSpec s;
    s.bits = 0;
    CHECK_THROWS_AS(s.validate(), Error);
    s.bits = 4;
    s.scale = FixedScale{0.0};
    CHECK_THROWS_AS(s.validate(), Error);
    s.scale = GroupwiseScale{0};
    CHECK_THROWS_AS(s.validate(), Error);
  }
}
