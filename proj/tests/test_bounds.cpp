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

#include "yaqa/bounds.hpp"
#include "yaqa/random.hpp"
#include "yaqa/rounding.hpp"
#include "yaqa/transform.hpp"

#include <cmath>

using namespace yaqa;

namespace
{

double mean_stochastic_proxy(RoundingProblem p, std::size_t trials, std::uint64_t base)
{
  double total = 0.0;
  const KronSketch reg{p.sketch.H_O.regularized(p.reg), p.sketch.H_I.regularized(p.reg), {}};
  for (std::size_t t = 0; t < trials; ++t)
  {
    p.seed = derive_seed(base, t);
    const auto r = yaqa_round(p);
    total += proxy_error(p.W_star, r.W_hat.values, reg);
  }
  return total / static_cast<double>(trials);
}

} // namespace

TEST_SUITE("bounds")
{
  TEST_CASE("identity factors by hand")
  {
    const KronSketch id{SymMatrix::identity(2), SymMatrix::identity(2), {}};
    CHECK(proxy_bounds(id, 1, 1, 0.25, 0.0).trD == doctest::Approx(1.0));
    CHECK(proxy_bounds(id, 2, 2, 0.25, 0.0).trD == doctest::Approx(4.0));
    // canonical eigenvectors of I are the axes: mu = sqrt(2) on both sides
    CHECK(proxy_bounds(id, 1, 1, 0.25, 0.0).mu == doctest::Approx(4.0 / 4.0 * 4.0 * 4.0 * 0.25));
  }

  TEST_CASE("the pivot trace bound sits below the incoherence form")
  {
    for (std::uint64_t s = 0; s < 50; ++s)
    {
      Rng rng(s);
      const KronSketch k{rng.spd(2 + s % 7), rng.spd(2 + (s / 7) % 7), {}};
      const auto b = proxy_bounds(k, 1, 1, 0.25, 1e-4);
      CHECK(b.trD <= b.mu * (1.0 + 1e-9));
    }
  }

  TEST_CASE("a single block covering the factor can break the incoherence form")
  {
    // With g equal to the factor size, D is the whole factor and g tr(H)
    // may exceed mu^2 tr(H^1/2)^2; the ordering is only guaranteed at g = 1.
    Rng rng(256);
    const auto h_o = rng.spiked(2, 1, 50.0);
    const KronSketch k{h_o, rng.spd(2), {}};
    CHECK(proxy_bounds(k, 1, 1, 0.25, 1e-4).trD <= proxy_bounds(k, 1, 1, 0.25, 1e-4).mu);
    CHECK(proxy_bounds(k, 2, 2, 0.25, 1e-4).trD > proxy_bounds(k, 2, 2, 0.25, 1e-4).mu);
  }

  TEST_CASE("cosine gap bound")
  {
    Rng rng(2);
    const Matrix a = rng.spd(6).matrix();
    const auto x = rng.gaussian_vector(6);
    const auto same = cosine_gap(a, a * 3.0, x);
    CHECK(same.bound <= 1e-7);
    CHECK(same.measured <= 1e-12);

    const Matrix e1 = Matrix::diagonal(std::vector<double>{1, 0}), e2 = Matrix::diagonal(std::vector<double>{0, 1});
    const std::vector<double> u{1.0, 0.0};
    const auto orth = cosine_gap(e1, e2, u);
    CHECK(orth.bound == doctest::Approx(std::sqrt(2.0)));
    CHECK(orth.holds);

    for (std::uint64_t s = 0; s < 100; ++s)
    {
      Rng r(100 + s);
      const std::size_t n = 2 + s % 10;
      const Matrix sa = r.gaussian(n, n), sb = r.gaussian(n, n);
      const auto g = cosine_gap(sa + sa.transpose(), sb + sb.transpose(), r.gaussian_vector(n));
      CHECK(g.holds);
    }
    CHECK_THROWS_AS(cosine_gap(Matrix(2, 2), e1, u), Error);
  }

  TEST_CASE("error bound degenerate cases and chain consistency")
  {
    Rng rng(4);
    const KronSketch k{rng.spd(3), rng.spd(4), {}};
    const SymMatrix h(k.dense());
    const auto zero = hessian_error_bound(h, k, Matrix(3, 4), 1, 1, 0.25, 0.0);
    CHECK(zero.true_error == 0.0);
    CHECK(zero.error_bound >= 0.0);

    const Matrix delta = rng.gaussian(3, 4, 0.3);
    const auto b = hessian_error_bound(h, k, delta, 1, 1, 0.25, 0.0);
    CHECK(b.cosine == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(b.error_bound - b.error_bound_mu_term) <= 1e-6 * b.error_bound);

    const auto pb = proxy_bounds(k, 1, 1, 0.25, 0.0);
    const double chain = pb.mu / (frob_norm(k.H_I.matrix()) * frob_norm(k.H_O.matrix())) * frob_norm(h.matrix());
    CHECK(std::abs(chain - b.error_bound_mu_term) <= 1e-9 * chain);
    CHECK(b.proxy_error == doctest::Approx(b.true_error).epsilon(1e-10));
  }

  TEST_CASE("stochastic proxy error stays under the pivot trace bound")
  {
    for (std::uint64_t s = 0; s < 12; ++s)
    {
      Rng rng(300 + s);
      const std::size_t m = 2 * (1 + s % 4), n = 2 * (1 + (s / 4) % 4);
      RoundingProblem p;
      p.W_star = rng.gaussian(m, n, 5.0);
      p.sketch = {rng.spd(m), rng.spd(n), {}};
      p.spec = QuantizerSpec::unit_grid(RoundingMode::Stochastic);
      p.reg = 1e-4;
      const double g1 = proxy_bounds(p.sketch, 1, 1, 0.25, p.reg).trD;
      CHECK(mean_stochastic_proxy(p, 200, s) <= 1.05 * g1);

      p.spec.block_rows = 2;
      p.spec.block_cols = 2;
      const double g2 = proxy_bounds(p.sketch, 2, 2, 0.25, p.reg).trD;
      CHECK(mean_stochastic_proxy(p, 200, 1000 + s) <= 1.05 * g2);
    }
  }

  TEST_CASE("LDLQ ratio at the LDLQ point and with identities")
  {
    Rng rng(5);
    const auto h1 = rng.spd(6);
    const KronSketch ldlq_point{SymMatrix::identity(4), h1, {}};
    const double mu1 = 1.7;
    const auto e = ldlq_ratio(ldlq_point, h1, 1.0, mu1, mu1);
    CHECK(e.ratio == doctest::Approx(1.0).epsilon(1e-12));

    const KronSketch ids{SymMatrix::identity(4), SymMatrix::identity(6), {}};
    const auto f = ldlq_ratio(ids, SymMatrix::identity(6));
    // mu_O = sqrt(m) for the axis eigenbasis, the rest cancels: ratio = m
    CHECK(f.ratio == doctest::Approx(4.0).epsilon(1e-12));
  }

  TEST_CASE("a spiked H_O gives a favorable ratio and meets the rank condition")
  {
    Rng rng(6);
    const std::size_t m = 16;
    const auto u = rng.gaussian_vector(m);
    Matrix ho(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k)
        ho(i, k) = u[i] * u[k];
    const auto h1 = rng.spd(8);
    const KronSketch s{SymMatrix(ho), h1, {}};
    const double mu = incoherence_mu(h1);
    const auto e = ldlq_ratio(s, h1, 2.0, mu, mu);
    CHECK(e.ratio < 1.0);
    CHECK(e.rank_O == 1);
    CHECK(static_cast<double>(e.rank_O) <= e.k_O);
  }

  TEST_CASE("rank condition implies a favorable ratio")
  {
    for (std::uint64_t s = 0; s < 50; ++s)
    {
      Rng rng(700 + s);
      const std::size_t m = 4 + s % 12;
      const KronSketch k{rng.low_rank_spd(m, 1 + s % 3, 0.0), rng.spd(6), {}};
      const auto h1 = rng.spd(6);
      const auto e = ldlq_ratio(k, h1, 1.5, 1.5, 2.0 + static_cast<double>(s % 5));
      if (static_cast<double>(e.rank_O) <= e.k_O)
        CHECK(e.favorable);
    }
  }
}
