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

#include "yaqa/rounding.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace yaqa
{

namespace
{

// Column-wise sparse view of a strictly lower feedback factor:
// col[j] = {(l, L'(l, j)) : l > j, L'(l, j) != 0}, ascending in l.
struct Feedback
{
  std::vector<std::vector<std::pair<std::size_t, double>>> col;

  explicit Feedback(std::size_t n) : col(n) {}
  explicit Feedback(const Matrix &strict) : col(strict.cols())
  {
    for (std::size_t j = 0; j < strict.cols(); ++j)
      for (std::size_t l = j + 1; l < strict.rows(); ++l)
        if (strict(l, j) != 0.0)
          col[j].emplace_back(l, strict(l, j));
  }
};

// The two kernels below are shared by every sweep-based and scheduled
// variant, so equal inputs give bit-equal targets regardless of schedule.

// (D L_I')(i, j)
double right_entry(const Matrix &delta, const Feedback &fi, std::size_t i, std::size_t j)
{
  double s = 0.0;
  for (const auto &[l, c] : fi.col[j])
    s += delta(i, l) * c;
  return s;
}

// W*(i, j) + (L_O'^T (D + D L_I'))(i, j) + (D L_I')(i, j)
double target_entry(const Matrix &w_star, const Matrix &delta, const Matrix &right, const Feedback &fo,
                    std::size_t i, std::size_t j)
{
  double s = 0.0;
  for (const auto &[k, c] : fo.col[i])
    s += c * (delta(k, j) + right(k, j));
  return w_star(i, j) + s + right(i, j);
}

void check_shapes(const RoundingProblem &p)
{
  const std::size_t m = p.W_star.rows(), n = p.W_star.cols();
  if (m == 0 || n == 0)
    throw Error(ErrorKind::ShapeMismatch, "empty weight matrix");
  if (p.sketch.m() != m || p.sketch.n() != n)
  {
    std::ostringstream ss;
    ss << "weights are " << m << "x" << n << " but sketch is " << p.sketch.m() << "/" << p.sketch.n();
    throw Error(ErrorKind::ShapeMismatch, ss.str());
  }
}

[[noreturn]] void no_convergence(std::size_t sweeps)
{
  std::ostringstream ss;
  ss << "no fixed point after " << sweeps << " sweeps; is the quantizer idempotent?";
  throw Error(ErrorKind::NoConvergence, ss.str());
}

// Row-selectable feedback: rows of W may use different input factors.
struct Plan
{
  std::vector<Feedback> inner; // one per row group
  std::size_t rows_per_group;
  Feedback outer;

  const Feedback &fi(std::size_t i) const { return inner[i / rows_per_group]; }
};

void fill_targets(const Plan &plan, const Matrix &w_star, const Matrix &delta, Matrix &right, Matrix &target)
{
  const std::size_t m = w_star.rows(), n = w_star.cols();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      right(i, j) = right_entry(delta, plan.fi(i), i, j);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      target(i, j) = target_entry(w_star, delta, right, plan.outer, i, j);
}

// One sweep from `current`; returns true when any code changed.
bool sweep(const Plan &plan, const Quantizer &q, const Matrix &w_star, QuantizedWeights &current)
{
  const std::size_t m = w_star.rows(), n = w_star.cols();
  const Matrix delta = w_star - current.values;
  Matrix right(m, n), target(m, n);
  fill_targets(plan, w_star, delta, right, target);
  const auto next = q.quantize(target);
  const bool changed = next.codes != current.codes;
  current = next;
  return changed;
}

RoundingResult iterate(const Plan &plan, const RoundingProblem &p)
{
  const std::size_t m = p.W_star.rows(), n = p.W_star.cols();
  const Quantizer q(p.spec, p.W_star, p.seed);
  RoundingResult r;
  r.W_hat = q.quantize(p.W_star);
  const std::size_t limit = m + n;
  while (true)
  {
    const bool changed = sweep(plan, q, p.W_star, r.W_hat);
    ++r.sweeps;
    if (!changed)
      break;
    if (r.sweeps >= limit)
      no_convergence(r.sweeps);
  }
  r.converged = true;
  r.proxy_error = proxy_error(p.W_star, r.W_hat.values, p.sketch);
  return r;
}

bool is_identity(const SymMatrix &h)
{
  return h.matrix() == Matrix::identity(h.dim());
}

} // namespace

Matrix strict_factor(const SymMatrix &h, std::size_t block, double reg)
{
  Matrix l = block_ldl(h, block, reg).L;
  for (std::size_t i = 0; i < l.rows(); ++i)
    l(i, i) -= 1.0;
  return l;
}

RoundingResult ldlq(const RoundingProblem &p)
{
  check_shapes(p);
  if (!is_identity(p.sketch.H_O))
    throw Error(ErrorKind::InvalidArgument, "ldlq expects H_O = I; use yaqa_round for a general sketch");
  Plan plan{{Feedback(strict_factor(p.sketch.H_I, p.spec.block_cols, p.reg))}, p.W_star.rows(),
            Feedback(p.W_star.rows())};
  return iterate(plan, p);
}

RoundingResult yaqa_round(const RoundingProblem &p)
{
  check_shapes(p);
  Plan plan{{Feedback(strict_factor(p.sketch.H_I, p.spec.block_cols, p.reg))}, p.W_star.rows(),
            Feedback(strict_factor(p.sketch.H_O, p.spec.block_rows, p.reg))};
  return iterate(plan, p);
}

RoundingResult yaqa_round_wavefront(const RoundingProblem &p)
{
  check_shapes(p);
  const std::size_t m = p.W_star.rows(), n = p.W_star.cols();
  const std::size_t gx = p.spec.block_rows, gy = p.spec.block_cols;
  Plan plan{{Feedback(strict_factor(p.sketch.H_I, gy, p.reg))}, m,
            Feedback(strict_factor(p.sketch.H_O, gx, p.reg))};
  const std::size_t bm = m / gx, bn = n / gy;

  const Quantizer q(p.spec, p.W_star, p.seed);
  QuantizedWeights out{Matrix(m, n), std::vector<std::int64_t>(m * n), q.scales(),
                       p.spec.groupwise() ? std::get<GroupwiseScale>(p.spec.scale).group_len : 0};
  // Entries of delta/right are only read once their block is final: the
  // feedback factors have zero diagonal blocks, so a block depends solely on
  // blocks with a strictly larger anti-diagonal index.
  Matrix delta(m, n), right(m, n);
  for (std::size_t d = bm + bn - 1; d-- > 0;)
  {
    const std::size_t lo = d >= bn ? d - (bn - 1) : 0;
    const std::size_t hi = std::min(bm - 1, d);
    for (std::size_t bi = lo; bi <= hi; ++bi)
    {
      const std::size_t bj = d - bi;
      for (std::size_t i = bi * gx; i < (bi + 1) * gx; ++i)
        for (std::size_t j = bj * gy; j < (bj + 1) * gy; ++j)
          right(i, j) = right_entry(delta, plan.fi(i), i, j);
      for (std::size_t i = bi * gx; i < (bi + 1) * gx; ++i)
        for (std::size_t j = bj * gy; j < (bj + 1) * gy; ++j)
        {
          const double t = target_entry(p.W_star, delta, right, plan.outer, i, j);
          const auto c = q.code(i, j, t);
          out.codes[i * n + j] = c;
          out.values(i, j) = q.value(i, j, c);
          delta(i, j) = p.W_star(i, j) - out.values(i, j);
        }
    }
  }

  RoundingResult r;
  r.W_hat = out;
  r.sweeps = 1;
  QuantizedWeights check = out;
  r.converged = !sweep(plan, q, p.W_star, check);
  r.proxy_error = proxy_error(p.W_star, r.W_hat.values, p.sketch);
  return r;
}

RoundingResult guidedquant_round(const RoundingProblem &p, const std::vector<SymMatrix> &blocks)
{
  const std::size_t m = p.W_star.rows(), n = p.W_star.cols();
  if (blocks.empty() || m % blocks.size() != 0)
    throw Error(ErrorKind::BadBlockSize, "group count must divide the number of output channels");
  for (const auto &b : blocks)
    if (b.dim() != n)
      throw Error(ErrorKind::ShapeMismatch, "guided block dimension differs from input width");
  Plan plan{{}, m / blocks.size(), Feedback(m)};
  for (const auto &b : blocks)
    plan.inner.emplace_back(strict_factor(b, p.spec.block_cols, p.reg));

  const Quantizer q(p.spec, p.W_star, p.seed);
  RoundingResult r;
  r.W_hat = q.quantize(p.W_star);
  while (true)
  {
    const bool changed = sweep(plan, q, p.W_star, r.W_hat);
    ++r.sweeps;
    if (!changed)
      break;
    if (r.sweeps >= m + n)
      no_convergence(r.sweeps);
  }
  r.converged = true;
  // Proxy error against the implied block-diagonal Hessian.
  const Matrix delta = p.W_star - r.W_hat.values;
  double e = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    e += quad_form(delta.row(i), blocks[i / plan.rows_per_group].matrix());
  r.proxy_error = std::max(0.0, e);
  return r;
}

std::vector<SymMatrix> guided_blocks_from_full(const SymMatrix &h, std::size_t m, std::size_t n,
                                               std::size_t groups)
{
  if (h.dim() != m * n)
    throw Error(ErrorKind::ShapeMismatch, "Hessian is not mn x mn");
  if (groups == 0 || m % groups != 0)
    throw Error(ErrorKind::BadBlockSize, "group count must divide m");
  const std::size_t per = m / groups;
  std::vector<SymMatrix> out;
  for (std::size_t g = 0; g < groups; ++g)
  {
    Matrix acc(n, n);
    for (std::size_t i = g * per; i < (g + 1) * per; ++i)
      acc += h.matrix().block(i * n, i * n, n, n);
    acc *= 1.0 / static_cast<double>(per);
    out.emplace_back(acc);
  }
  return out;
}

SymMatrix guided_dense(const std::vector<SymMatrix> &blocks, std::size_t m)
{
  if (blocks.empty() || m % blocks.size() != 0)
    throw Error(ErrorKind::BadBlockSize, "group count must divide m");
  const std::size_t n = blocks.front().dim(), per = m / blocks.size();
  Matrix h(m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    h.set_block(i * n, i * n, blocks[i / per].matrix());
  return SymMatrix(h);
}

RoundingResult vec_ldlq_oracle(const Matrix &w_star, const SymMatrix &h, const QuantizerSpec &spec, double reg,
                               std::uint64_t seed, bool column_major)
{
  const std::size_t m = w_star.rows(), n = w_star.cols(), mn = m * n;
  if (mn > 4096)
    throw Error(ErrorKind::TooLarge, "vec oracle is limited to mn <= 4096");
  if (h.dim() != mn)
    throw Error(ErrorKind::ShapeMismatch, "oracle Hessian is not mn x mn");

  const auto f = ldl(h, reg);
  // Flattened index -> (row, col) of W.
  auto pos = [&](std::size_t c) {
    return column_major ? std::pair{c % m, c / m} : std::pair{c / n, c % n};
  };

  const Quantizer q(spec, w_star, seed);
  RoundingResult r;
  r.W_hat = q.quantize(w_star);
  std::vector<double> delta(mn);
  while (true)
  {
    for (std::size_t c = 0; c < mn; ++c)
    {
      const auto [i, j] = pos(c);
      delta[c] = w_star(i, j) - r.W_hat.values(i, j);
    }
    bool changed = false;
    auto next = r.W_hat;
    for (std::size_t c = 0; c < mn; ++c)
    {
      double s = 0.0;
      for (std::size_t k = c + 1; k < mn; ++k)
        s += delta[k] * f.L(k, c);
      const auto [i, j] = pos(c);
      const auto code = q.code(i, j, w_star(i, j) + s);
      changed = changed || code != r.W_hat.code(i, j);
      next.codes[i * n + j] = code;
      next.values(i, j) = q.value(i, j, code);
    }
    r.W_hat = next;
    ++r.sweeps;
    if (!changed)
      break;
    if (r.sweeps >= mn + 1)
      no_convergence(r.sweeps);
  }
  r.converged = true;
  // Proxy error under the dense Hessian itself.
  std::vector<double> d(mn);
  for (std::size_t c = 0; c < mn; ++c)
  {
    const auto [i, j] = pos(c);
    d[c] = w_star(i, j) - r.W_hat.values(i, j);
  }
  r.proxy_error = std::max(0.0, quad_form(d, h.matrix()));
  return r;
}

double proxy_error(const Matrix &w_star, const Matrix &w_hat, const KronSketch &s)
{
  if (w_star.rows() != w_hat.rows() || w_star.cols() != w_hat.cols() || s.m() != w_star.rows() ||
      s.n() != w_star.cols())
    throw Error(ErrorKind::ShapeMismatch, "proxy_error: inconsistent shapes");
  const Matrix delta = w_star - w_hat;
  const Matrix left = s.H_O.matrix() * delta;
  const Matrix right = delta * s.H_I.matrix();
  return std::max(0.0, frob_inner(left, right));
}

} // namespace yaqa
