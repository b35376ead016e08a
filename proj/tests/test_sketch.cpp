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

#include "yaqa/oracles.hpp"
#include "yaqa/random.hpp"
#include "yaqa/sketch.hpp"

#include <cmath>

using namespace yaqa;

namespace
{

FisherEstimate fisher(const Matrix &h) { return {SymMatrix(h), "given", 0}; }

double rel(const Matrix &a, const Matrix &b) { return frob_norm(a - b) / frob_norm(b); }

// Token-independent Fisher assembled densely from per-token outer products.
Matrix token_fisher(const ToyModel &model, std::size_t layer, const Dataset &data)
{
  const std::size_t mn = model.weights[layer].size();
  Matrix h(mn, mn);
  for_each_gradient(model, layer, data, {}, [&](double w, const Matrix &dy, const Matrix &x) {
    for (std::size_t t = 0; t < x.rows(); ++t)
    {
      Matrix g(dy.cols(), x.cols());
      for (std::size_t i = 0; i < dy.cols(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
          g(i, j) = dy(t, i) * x(t, j);
      const auto v = vec(g);
      for (std::size_t a = 0; a < mn; ++a)
        for (std::size_t b = 0; b < mn; ++b)
          h(a, b) += w * v[a] * v[b];
    }
  });
  return h;
}

} // namespace

TEST_SUITE("sketch")
{
  TEST_CASE("contractions match the brute-force oracle")
  {
    Rng rng(1);
    const auto h = rng.spd(12);
    const Matrix a = rng.gaussian(3, 3), b = rng.gaussian(4, 4);
    CHECK(rel(contract_output_side(h, a, 3, 4), oracle::contract_outer_factor(h.matrix(), a, 3, 4)) <= 1e-13);
    CHECK(rel(contract_input_side(h, b, 3, 4), oracle::contract_inner_factor(h.matrix(), b, 3, 4)) <= 1e-13);
    CHECK(kron_inner(h, a, b) == doctest::Approx(frob_inner(h.matrix(), kron(a, b))).epsilon(1e-12));
    CHECK(kron_residual(h, a, b) == doctest::Approx(frob_norm(h.matrix() - kron(a, b))).epsilon(1e-12));
  }

  TEST_CASE("exact Kronecker input is recovered in one round")
  {
    Rng rng(2);
    const auto a = rng.spd(3), b = rng.spd(5);
    const auto h = fisher(kron(a.matrix(), b.matrix()));
    for (auto sched : {PowerSchedule::Alternating, PowerSchedule::Simultaneous})
    {
      const auto s = power_iterate_full(h, 3, 5, 1, sched);
      CHECK(sketch_quality(h, s).cosine >= 1.0 - 1e-9);
      CHECK(frob_norm(s.H_O.matrix()) == doctest::Approx(1.0));
    }
    const auto v = van_loan_optimal(h, 3, 5);
    CHECK(sketch_quality(h, v).cosine >= 1.0 - 1e-9);
    CHECK(rel(v.dense(), h.H.matrix()) <= 1e-9);
  }

  TEST_CASE("identity Hessian gives identity factors")
  {
    const auto s = power_iterate_full(fisher(Matrix::identity(12)), 3, 4, 3);
    CHECK(rel(s.H_O.matrix(), Matrix::identity(3) * (1.0 / std::sqrt(3.0))) <= 1e-12);
    CHECK(rel(s.H_I.matrix(), Matrix::identity(4) * std::sqrt(3.0)) <= 1e-12);
  }

  TEST_CASE("power iteration converges to the Van Loan optimum monotonically")
  {
    for (std::uint64_t seed = 0; seed < 10; ++seed)
    {
      Rng rng(seed);
      const auto h = fisher(rng.spd(16).matrix());
      std::vector<double> hist;
      const auto p = power_iterate_full(h, 4, 4, 50, PowerSchedule::Alternating, &hist);
      const auto v = van_loan_optimal(h, 4, 4);
      const double rp = sketch_quality(h, p).residual, rv = sketch_quality(h, v).residual;
      CHECK(std::abs(rp - rv) <= 1e-6 * rv);
      for (std::size_t i = 1; i < hist.size(); ++i)
        CHECK(hist[i] >= hist[i - 1] - 1e-10 * std::abs(hist[i - 1]));
      CHECK(v.H_O.matrix() == v.H_O.matrix().transpose());
      CHECK(v.H_I.matrix() == v.H_I.matrix().transpose());
      // optimal among the sketches we can build
      CHECK(sketch_quality(h, v).cosine >= sketch_quality(h, power_iterate_full(h, 4, 4, 1)).cosine - 1e-12);
      CHECK(sketch_quality(h, v).cosine >=
            sketch_quality(h, KronSketch{SymMatrix::identity(4), SymMatrix::identity(4), {}}).cosine);
    }
  }

  TEST_CASE("Van Loan is stable under a small perturbation")
  {
    Rng rng(5);
    const Matrix ab = kron(rng.spd(3).matrix(), rng.spd(4).matrix());
    const Matrix c = rng.spd(12).matrix();
    const auto h = fisher(ab + c * (1e-3 * frob_norm(ab) / frob_norm(c)));
    const auto v = van_loan_optimal(h, 3, 4);
    CHECK(frob_cosine(v.dense(), ab) >= 0.999);
  }

  TEST_CASE("size and zero guards")
  {
    CHECK_THROWS_AS(power_iterate_full(fisher(Matrix::identity(6)), 2, 4, 1), Error);
    CHECK_THROWS_AS(power_iterate_full(fisher(Matrix(4, 4)), 2, 2, 1), Error);
    CHECK_THROWS_AS(van_loan_optimal(FisherEstimate{SymMatrix(4160)}, 65, 64), Error);
  }

  TEST_CASE("sketch A starts from the LDLQ sketch")
  {
    const auto m = ToyModel::random({4, 5, 3}, 1, 1.5, 0.5);
    const auto d = make_dataset({4, 4, 3, 0.5, 2});
    const auto s = sketch_a(m, 0, d, 0);
    CHECK(s.H_O == SymMatrix::identity(5));
    CHECK(s.H_I == layer_input_hessian(m, 0, d));
  }

  TEST_CASE("sketch A equals the dense token-independent update")
  {
    const auto m = ToyModel::random({4, 3, 3}, 3, 1.5, 0.5);
    const auto d = make_dataset({4, 3, 4, 0.5, 3});
    const Matrix ht = token_fisher(m, 0, d);
    Matrix hi = layer_input_hessian(m, 0, d).matrix();
    Matrix ho;
    for (std::size_t it = 1; it <= 3; ++it)
    {
      const double fi = frob_norm(hi);
      ho = oracle::contract_inner_factor(ht, hi, 3, 4) * (1.0 / (fi * fi));
      const double fo = frob_norm(ho);
      hi = oracle::contract_outer_factor(ht, ho, 3, 4) * (1.0 / (fo * fo));
      const auto s = sketch_a(m, 0, d, it);
      const double scale = frob_norm(ho);
      CHECK(rel(s.H_O.matrix(), ho * (1.0 / scale)) <= 1e-9);
      CHECK(rel(s.H_I.matrix(), hi * scale) <= 1e-9);
    }
  }

  TEST_CASE("sketch A and B reject zero gradients")
  {
    ToyModel m;
    m.weights = {Matrix{{1000.0, 0.0}, {0.0, 0.0}}};
    Dataset d;
    d.sequences = {Matrix{{1.0, 0.5}}};
    CHECK_THROWS_AS(sketch_a(m, 0, d, 1), Error);
    CHECK_THROWS_AS(sketch_b(m, 0, d), Error);
  }

  TEST_CASE("sketch B of one token is the closed-form outer product")
  {
    // Two classes: every label gives G proportional to u x^T with u = (1, -1).
    const auto m = ToyModel::random({3, 2}, 4);
    Dataset d;
    d.sequences = {Matrix{{0.3, -1.2, 0.7}}};
    const auto f = forward(m, d.sequences[0]);
    const double p0 = f.probs(0, 0), p1 = f.probs(0, 1);
    const Matrix x = d.sequences[0];
    const auto s = sketch_b(m, 0, d, {}, false);
    // E[G^T G] = p0 p1 |u|^2 x^T x, E[G G^T] = p0 p1 |x|^2 u u^T
    const double w = p0 * p1 * (p0 + p1);
    CHECK(rel(s.H_I.matrix(), x.transpose() * x * (w * 2.0 / 2.0)) <= 1e-12);
    const Matrix uu{{1, -1}, {-1, 1}};
    CHECK(rel(s.H_O.matrix(), uu * (w * frob_norm(x) * frob_norm(x) / 3.0)) <= 1e-12);
    const auto h = true_layer_hessian(m, 0, d);
    CHECK(sketch_quality(h, sketch_b(m, 0, d)).cosine >= 1.0 - 1e-12);
  }

  TEST_CASE("sketch B equals one simultaneous round of dense power iteration")
  {
    const auto m = ToyModel::random({6, 5, 4}, 7, 1.5, 0.5);
    const auto d = make_dataset({6, 64, 4, 0.5, 7});
    const auto h = true_layer_hessian(m, 0, d);
    const auto b = sketch_b(m, 0, d);
    const auto p = power_iterate_full(h, 5, 6, 1, PowerSchedule::Simultaneous);
    CHECK(rel(b.H_O.matrix(), p.H_O.matrix()) <= 1e-9);
    CHECK(rel(b.H_I.matrix(), p.H_I.matrix()) <= 1e-9);
  }

  TEST_CASE("sketch scale does not change the quality report")
  {
    Rng rng(9);
    const auto h = fisher(rng.spd(12).matrix());
    const KronSketch s{rng.spd(3), rng.spd(4), {}};
    const KronSketch t{SymMatrix(s.H_O.matrix() * 5.0), SymMatrix(s.H_I.matrix() * 0.2), {}};
    CHECK(sketch_quality(h, s).cosine == doctest::Approx(sketch_quality(h, t).cosine).epsilon(1e-12));
  }
}
