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

#include "yaqa/sketch.hpp"
#include "yaqa/transform.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace yaqa
{

namespace
{

void check_dims(const SymMatrix &h, std::size_t m, std::size_t n)
{
  if (m * n > 4096)
    throw Error(ErrorKind::TooLarge, "dense sketch routines are limited to mn <= 4096");
  if (h.dim() != m * n)
  {
    std::ostringstream ss;
    ss << "Hessian is " << h.dim() << " wide, expected " << m << "*" << n;
    throw Error(ErrorKind::ShapeMismatch, ss.str());
  }
}

double frob_sq(const Matrix &a)
{
  const double f = frob_norm(a);
  if (!(f > 0.0))
    throw Error(ErrorKind::ZeroMatrix, "factor norm underflowed to zero");
  return f * f;
}

} // namespace

Matrix contract_output_side(const SymMatrix &h, const Matrix &a, std::size_t m, std::size_t n)
{
  Matrix out(n, n);
  const Matrix &hm = h.matrix();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
    {
      const double c = a(i, k);
      if (c == 0.0)
        continue;
      for (std::size_t j = 0; j < n; ++j)
      {
        const double *src = hm.row(i * n + j).data() + k * n;
        double *dst = &out(j, 0);
        for (std::size_t l = 0; l < n; ++l)
          dst[l] += c * src[l];
      }
    }
  return out;
}

Matrix contract_input_side(const SymMatrix &h, const Matrix &b, std::size_t m, std::size_t n)
{
  Matrix out(m, m);
  const Matrix &hm = h.matrix();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
    {
      double s = 0.0;
      for (std::size_t j = 0; j < n; ++j)
      {
        const double *src = hm.row(i * n + j).data() + k * n;
        for (std::size_t l = 0; l < n; ++l)
          s += src[l] * b(j, l);
      }
      out(i, k) = s;
    }
  return out;
}

double kron_residual(const SymMatrix &h, const Matrix &a, const Matrix &b)
{
  const std::size_t m = a.rows(), n = b.rows();
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < m; ++k)
        for (std::size_t l = 0; l < n; ++l)
        {
          const double d = h(i * n + j, k * n + l) - a(i, k) * b(j, l);
          s += d * d;
        }
  return std::sqrt(s);
}

double kron_inner(const SymMatrix &h, const Matrix &a, const Matrix &b)
{
  return frob_inner(contract_output_side(h, a, a.rows(), b.rows()), b);
}

KronSketch finalize_sketch(const Matrix &h_o, const Matrix &h_i, SketchMeta meta)
{
  SymMatrix o = clamp_psd(SymMatrix(h_o));
  SymMatrix in = clamp_psd(SymMatrix(h_i));
  const double fo = frob_norm(o.matrix());
  if (!(fo > 0.0) || !(frob_norm(in.matrix()) > 0.0))
    throw Error(ErrorKind::ZeroMatrix, "sketch factor is zero");
  meta.normalized = true;
  return {SymMatrix(o.matrix() * (1.0 / fo)), SymMatrix(in.matrix() * fo), std::move(meta)};
}

KronSketch power_iterate_full(const FisherEstimate &h, std::size_t m, std::size_t n, std::size_t iters,
                              PowerSchedule schedule, std::vector<double> *history, bool finalize)
{
  check_dims(h.H, m, n);
  Matrix ho = Matrix::identity(m), hi = Matrix::identity(n);
  for (std::size_t it = 0; it < iters; ++it)
  {
    if (schedule == PowerSchedule::Alternating)
    {
      hi = contract_output_side(h.H, ho, m, n) * (1.0 / frob_sq(ho));
      ho = contract_input_side(h.H, hi, m, n) * (1.0 / frob_sq(hi));
    }
    else
    {
      Matrix next_i = contract_output_side(h.H, ho, m, n) * (1.0 / frob_sq(ho));
      ho = contract_input_side(h.H, hi, m, n) * (1.0 / frob_sq(hi));
      hi = std::move(next_i);
    }
    if (history)
      history->push_back(kron_inner(h.H, ho, hi) / (frob_norm(ho) * frob_norm(hi)));
  }
  SketchMeta meta{"powerfull", iters, false,
                  schedule == PowerSchedule::Alternating ? "alternating" : "simultaneous"};
  if (!finalize)
    return {SymMatrix(ho), SymMatrix(hi), meta};
  return finalize_sketch(ho, hi, meta);
}

KronSketch van_loan_optimal(const FisherEstimate &h, std::size_t m, std::size_t n)
{
  check_dims(h.H, m, n);
  // R[(i*m + k), (j*n + l)] = H[(i*n + j), (k*n + l)], so that
  // H = A kron B  <=>  R = vec(A) vec(B)^T.
  Eigen::MatrixXd r(m * m, n * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          r(static_cast<Eigen::Index>(i * m + k), static_cast<Eigen::Index>(j * n + l)) =
              h.H(i * n + j, k * n + l);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma = svd.singularValues()(0);
  if (!(sigma > 0.0))
    throw Error(ErrorKind::ZeroMatrix, "Hessian is zero");
  Matrix a(m, m), b(n, n);
  for (std::size_t i = 0; i < m * m; ++i)
    a.data()[i] = svd.matrixU()(static_cast<Eigen::Index>(i), 0) * sigma;
  for (std::size_t j = 0; j < n * n; ++j)
    b.data()[j] = svd.matrixV()(static_cast<Eigen::Index>(j), 0);
  // The singular pair is defined up to a joint sign; pick the p.s.d. one.
  if (a.trace() < 0.0)
  {
    a *= -1.0;
    b *= -1.0;
  }
  return finalize_sketch(a, b, {"vanloan", 0, false, "leading singular pair"});
}

KronSketch sketch_a(const ToyModel &model, std::size_t layer, const Dataset &data, std::size_t iters,
                    const GradientSource &src)
{
  const std::size_t m = model.weights.at(layer).rows(), n = model.weights[layer].cols();
  Matrix ho = Matrix::identity(m);
  Matrix hi = layer_input_hessian(model, layer, data).matrix();
  if (iters == 0)
    return {SymMatrix(ho), SymMatrix(hi), {"a", 0, false, "per token"}};

  // Alternating, output side first so that both initial factors are used:
  // H_O <- E[dy dy^T <H_I, x x^T>] / ||H_I||^2, then
  // H_I <- E[x x^T <H_O, dy dy^T>] / ||H_O||^2.
  for (std::size_t it = 0; it < iters; ++it)
  {
    Matrix next_o(m, m);
    const double si = 1.0 / frob_sq(hi);
    for_each_gradient(model, layer, data, src, [&](double w, const Matrix &dy, const Matrix &x) {
      Matrix scaled = dy;
      for (std::size_t t = 0; t < dy.rows(); ++t)
      {
        const double s = w * si * quad_form(x.row(t), hi);
        for (double &v : scaled.row(t))
          v *= s;
      }
      next_o += matmul_tn(scaled, dy);
    });
    ho = std::move(next_o);

    Matrix next_i(n, n);
    const double so = 1.0 / frob_sq(ho);
    for_each_gradient(model, layer, data, src, [&](double w, const Matrix &dy, const Matrix &x) {
      Matrix scaled = x;
      for (std::size_t t = 0; t < x.rows(); ++t)
      {
        const double s = w * so * quad_form(dy.row(t), ho);
        for (double &v : scaled.row(t))
          v *= s;
      }
      next_i += matmul_tn(scaled, x);
    });
    hi = std::move(next_i);
  }
  return finalize_sketch(ho, hi, {"a", iters, false, "per token, alternating"});
}

KronSketch sketch_b(const ToyModel &model, std::size_t layer, const Dataset &data, const GradientSource &src,
                    bool finalize)
{
  const std::size_t m = model.weights.at(layer).rows(), n = model.weights[layer].cols();
  Matrix ho(m, m), hi(n, n);
  for_each_gradient(model, layer, data, src, [&](double w, const Matrix &dy, const Matrix &x) {
    const Matrix g = matmul_tn(dy, x);
    Matrix gi = matmul_tn(g, g);
    gi *= w / static_cast<double>(m);
    hi += gi;
    Matrix go = g * g.transpose();
    go *= w / static_cast<double>(n);
    ho += go;
  });
  SketchMeta meta{"b", 1, false, "per sequence gradient, weights sum to sequences*positions/tokens"};
  if (!finalize)
    return {SymMatrix(ho), SymMatrix(hi), meta};
  return finalize_sketch(ho, hi, meta);
}

SketchQuality sketch_quality(const FisherEstimate &h, const KronSketch &s)
{
  check_dims(h.H, s.m(), s.n());
  SketchQuality q;
  const double inner = kron_inner(h.H, s.H_O.matrix(), s.H_I.matrix());
  const double no = frob_norm(s.H_O.matrix()), ni = frob_norm(s.H_I.matrix()), nh = frob_norm(h.H.matrix());
  if (!(no > 0.0) || !(ni > 0.0) || !(nh > 0.0))
    throw Error(ErrorKind::ZeroMatrix, "sketch_quality of a zero matrix");
  q.normalized_cosine = inner / (no * ni);
  q.cosine = q.normalized_cosine / nh;
  q.residual = kron_residual(h.H, s.H_O.matrix(), s.H_I.matrix());
  q.mu_O = incoherence_mu(s.H_O);
  q.mu_I = incoherence_mu(s.H_I);
  q.rank_O = numerical_rank(s.H_O);
  q.rank_I = numerical_rank(s.H_I);
  return q;
}

} // namespace yaqa
