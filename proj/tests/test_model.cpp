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

#include "yaqa/model.hpp"
#include "yaqa/oracles.hpp"
#include "yaqa/quantize.hpp"
#include "yaqa/random.hpp"

#include <cmath>

using namespace yaqa;

namespace
{

Dataset tiny_data(std::size_t dim, std::size_t seqs, std::size_t len, std::uint64_t seed, double rho = 0.5)
{
  return make_dataset({dim, seqs, len, rho, seed});
}

// Token-by-token re-implementation of the forward pass.
std::vector<double> naive_probs(const ToyModel &m, const Matrix &x, std::size_t t)
{
  std::vector<std::vector<double>> act(x.rows());
  for (std::size_t s = 0; s < x.rows(); ++s)
    act[s] = std::vector<double>(x.row(s).begin(), x.row(s).end());
  for (std::size_t l = 0; l < m.layers(); ++l)
  {
    const Matrix &w = m.weights[l];
    for (auto &a : act)
    {
      std::vector<double> y(w.rows(), 0.0);
      for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j)
          y[i] += w(i, j) * a[j];
      if (l + 1 < m.layers())
        for (double &v : y)
          v = std::tanh(v);
      a = y;
    }
    if (l == 0 && l + 1 < m.layers())
    {
      std::vector<double> mean(act[0].size(), 0.0);
      for (const auto &a : act)
        for (std::size_t j = 0; j < a.size(); ++j)
          mean[j] += a[j] / static_cast<double>(act.size());
      for (auto &a : act)
        for (std::size_t j = 0; j < a.size(); ++j)
          a[j] = (1.0 - m.mix) * a[j] + m.mix * mean[j];
    }
  }
  std::vector<double> p = act[t];
  double mx = p[0];
  for (double v : p)
    mx = std::max(mx, v);
  double s = 0.0;
  for (double &v : p)
    s += (v = std::exp(v - mx));
  for (double &v : p)
    v /= s;
  return p;
}

double max_rel_fd_error(const ToyModel &model, std::size_t layer, const Matrix &x,
                        const std::vector<std::size_t> &labels)
{
  const Matrix g = layer_grad(model, layer, x, labels);
  double worst = 0.0;
  const double scale = std::max(frob_norm(g), 1e-12);
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
    {
      const double fd = oracle::central_difference(
          [&](double h) {
            Matrix w = model.weights[layer];
            w(i, j) += h;
            return cross_entropy(model.with_layer(layer, w), x, labels);
          },
          1e-5);
      worst = std::max(worst, std::abs(fd - g(i, j)) / scale);
    }
  return worst;
}

} // namespace

TEST_SUITE("model")
{
  TEST_CASE("zero weights give uniform predictions")
  {
    ToyModel m;
    m.weights = {Matrix(4, 3), Matrix(5, 4)};
    const auto f = forward(m, Matrix(2, 3, 1.0));
    for (double v : f.logits.data())
      CHECK(v == 0.0);
    for (double p : f.probs.data())
      CHECK(p == doctest::Approx(0.2));
  }

  TEST_CASE("single identity layer passes inputs through")
  {
    ToyModel m;
    m.weights = {Matrix::identity(3)};
    const Matrix x{{1, 2, 3}, {-1, 0, 4}};
    CHECK(forward(m, x).logits == x);
  }

  TEST_CASE("forward matches a token-by-token re-implementation")
  {
    for (double mix : {0.0, 0.6})
    {
      const auto m = ToyModel::random({5, 6, 4}, 3, 1.5, mix);
      const auto d = tiny_data(5, 2, 4, 9);
      for (const auto &x : d.sequences)
      {
        const auto f = forward(m, x);
        for (std::size_t t = 0; t < x.rows(); ++t)
        {
          const auto p = naive_probs(m, x, t);
          for (std::size_t c = 0; c < p.size(); ++c)
            CHECK(std::abs(p[c] - f.probs(t, c)) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("softmax-linear gradient has the closed form (p - e) x^T")
  {
    const auto m = ToyModel::random({4, 3}, 1);
    const Matrix x{{0.5, -1.0, 2.0, 0.1}};
    const auto g = layer_grad(m, 0, x, {2});
    const auto p = forward(m, x).probs;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        CHECK(g(i, j) == doctest::Approx((p(0, i) - (i == 2 ? 1.0 : 0.0)) * x(0, j)).epsilon(1e-14));
  }

  TEST_CASE("confident correct prediction has zero gradient")
  {
    ToyModel m;
    m.weights = {Matrix{{1000.0}, {0.0}}};
    const auto g = layer_grad(m, 0, Matrix{{1.0}}, {0});
    CHECK(frob_norm(g) == 0.0);
  }

  TEST_CASE("gradients agree with finite differences")
  {
    for (std::uint64_t s = 0; s < 20; ++s)
    {
      const auto m = ToyModel::random({4, 5, 3}, 40 + s, 1.5, s % 2 ? 0.5 : 0.0);
      const auto d = tiny_data(4, 1, 3, 60 + s);
      const std::vector<std::size_t> labels{s % 3, (s + 1) % 3, (s + 2) % 3};
      for (std::size_t layer = 0; layer < 2; ++layer)
        CHECK(max_rel_fd_error(m, layer, d.sequences[0], labels) <= 1e-5);
    }
  }

  TEST_CASE("Fisher of a softmax-linear layer has the closed form")
  {
    const auto m = ToyModel::random({3, 4}, 2, 2.0);
    const auto d = tiny_data(3, 3, 2, 5, 0.0);
    const auto h = true_layer_hessian(m, 0, d);
    Matrix expect(12, 12);
    for (const auto &x : d.sequences)
    {
      const auto p = forward(m, x).probs;
      for (std::size_t t = 0; t < x.rows(); ++t)
      {
        Matrix a(4, 4), xx(3, 3);
        for (std::size_t i = 0; i < 4; ++i)
          for (std::size_t k = 0; k < 4; ++k)
            a(i, k) = (i == k ? p(t, i) : 0.0) - p(t, i) * p(t, k);
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t k = 0; k < 3; ++k)
            xx(i, k) = x(t, i) * x(t, k);
        expect += kron(a, xx);
      }
    }
    expect *= 1.0 / static_cast<double>(d.tokens());
    CHECK(frob_norm(h.H.matrix() - expect) <= 1e-12 * frob_norm(expect));
    const auto e = sym_eigen(h.H);
    CHECK(e.values.back() >= -1e-10 * e.values.front());
  }

  TEST_CASE("a deterministic head has zero Fisher")
  {
    ToyModel m;
    m.weights = {Matrix{{1000.0, 0.0}, {0.0, 0.0}}};
    Dataset d;
    d.sequences = {Matrix{{1.0, 0.5}}};
    CHECK(frob_norm(true_layer_hessian(m, 0, d).H.matrix()) == 0.0);
  }

  TEST_CASE("Monte-Carlo Fisher converges to the enumerated one")
  {
    const auto m = ToyModel::random({3, 4, 3}, 8, 1.5, 0.5);
    const auto d = tiny_data(3, 4, 2, 3);
    const auto exact = true_layer_hessian(m, 0, d);
    const auto mc = true_layer_hessian(m, 0, d, {LabelMode::MonteCarlo, 25000, 17});
    CHECK(frob_norm(mc.H.matrix() - exact.H.matrix()) <= 0.05 * frob_norm(exact.H.matrix()));
    CHECK(mc.provenance == "monte-carlo");
  }

  TEST_CASE("hand-computed KL")
  {
    ToyModel ref, q;
    ref.weights = {Matrix(2, 1)};
    q.weights = {Matrix{{std::log(9.0)}, {0.0}}};
    Dataset d;
    d.sequences = {Matrix{{1.0}}};
    const double expect = 0.5 * std::log(0.5 / 0.9) + 0.5 * std::log(0.5 / 0.1);
    CHECK(kl_to_reference(ref, q, d) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(expect == doctest::Approx(0.5108).epsilon(1e-4));
    CHECK(kl_to_reference(ref, ref, d) == 0.0);
  }

  TEST_CASE("KL shrinks monotonically as the grid gets finer")
  {
    const auto m = ToyModel::random({6, 8, 4}, 4, 2.0, 0.3);
    const auto d = tiny_data(6, 8, 4, 4);
    double prev = 1e300;
    for (double step : {0.5, 0.25, 0.1, 0.03, 0.01, 1e-3, 1e-4})
    {
      QuantizerSpec s;
      s.bits = 32;
      s.scale = FixedScale{step};
      const double kl = kl_to_reference(m, m.with_layer(0, quantize_nearest(m.weights[0], s).values), d);
      CHECK(kl <= prev);
      prev = kl;
    }
    CHECK(prev <= 1e-8);
  }

  TEST_CASE("second-order error and Taylor agreement")
  {
    const auto m = ToyModel::random({4, 5, 3}, 12, 1.5, 0.5);
    const auto d = tiny_data(4, 6, 3, 12);
    const auto h = true_layer_hessian(m, 0, d);
    CHECK(second_order_error(m, 0, m.weights[0], h) == 0.0);
    FisherEstimate id{SymMatrix::identity(20)};
    Rng rng(1);
    const Matrix dw = rng.gaussian(5, 4);
    const double f = frob_norm(dw);
    CHECK(second_order_error(m, 0, m.weights[0] + dw, id) == doctest::Approx(f * f).epsilon(1e-12));

    Matrix unit = dw * (1.0 / f);
    const double quad = 0.5 * quad_form(vec(unit), h.H.matrix());
    const double t = 1e-3;
    const double kl = kl_to_reference(m, m.with_layer(0, m.weights[0] + unit * t), d);
    CHECK(std::abs(kl / (t * t) - quad) <= 0.05 * quad);

    const double slope = oracle::central_difference(
        [&](double s) { return kl_to_reference(m, m.with_layer(0, m.weights[0] + unit * s), d); }, 1e-5);
    CHECK(std::abs(slope) <= 1e-8);
  }

  TEST_CASE("input Hessian and dataset shapes")
  {
    const auto d = tiny_data(5, 3, 7, 1);
    CHECK(d.tokens() == 21);
    const auto m = ToyModel::random({5, 4, 3}, 1);
    const auto h1 = layer_input_hessian(m, 0, d);
    Matrix expect(5, 5);
    for (const auto &x : d.sequences)
      expect += x.transpose() * x;
    expect *= 1.0 / 21.0;
    CHECK(frob_norm(h1.matrix() - expect) <= 1e-12 * frob_norm(expect));
    CHECK_THROWS_AS(make_dataset({5, 0, 7, 0.5, 1}), Error);
    CHECK_THROWS_AS(layer_grad(m, 3, d.sequences[0], std::vector<std::size_t>(7, 0)), Error);
  }
}
