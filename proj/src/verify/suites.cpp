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

#include "yaqa/verify.hpp"

#include "yaqa/bounds.hpp"
#include "yaqa/error.hpp"
#include "yaqa/experiment.hpp"
#include "yaqa/oracles.hpp"
#include "yaqa/random.hpp"
#include "yaqa/rounding.hpp"
#include "yaqa/sketch.hpp"
#include "yaqa/snd.hpp"
#include "yaqa/transform.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

namespace yaqa::verify
{

namespace
{

std::string fmt(const char *f, double a, double b = 0.0, double c = 0.0)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// Accumulates one named check over many seeded instances and keeps the first
// failure so it can be reproduced.
class Tally
{
public:
  explicit Tally(std::string name) { _check.name = std::move(name); _check.pass = true; }

  void expect(bool ok, std::uint64_t seed, const std::string &what)
  {
    ++_runs;
    if (ok || !_check.pass)
    {
      _failures += !ok;
      return;
    }
    ++_failures;
    _check.pass = false;
    _check.seed = seed;
    _first = what;
  }

  Check done(const std::string &summary = "")
  {
    if (_check.pass)
      _check.detail = std::to_string(_runs) + " instances" + (summary.empty() ? "" : ", " + summary);
    else
      _check.detail = std::to_string(_failures) + "/" + std::to_string(_runs) + " failed; first: " + _first;
    return _check;
  }

private:
  Check _check;
  std::size_t _runs = 0, _failures = 0;
  std::string _first;
};

Check single(std::string name, bool pass, std::string detail)
{
  return {std::move(name), pass, std::move(detail), std::nullopt};
}

double median(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

SymMatrix kron_sym(const KronSketch &s) { return SymMatrix(s.dense()); }

// H = L D L^T with L supported on a random mask, so the feedback pattern and
// its nilpotence degree vary between instances.
SymMatrix structured_spd(std::size_t n, double p, std::uint64_t seed)
{
  const auto mask = oracle::random_mask(n, p, seed);
  Rng rng(derive_seed(seed, 1));
  Matrix l = Matrix::identity(n), d(n, n);
  for (std::size_t i = 0; i < n; ++i)
  {
    d(i, i) = 0.5 + rng.uniform();
    for (std::size_t j = 0; j < i; ++j)
      if (mask(i, j))
        l(i, j) = rng.normal();
  }
  return SymMatrix(l * d * l.transpose());
}

// ---------------------------------------------------------------- criterion 1

std::vector<Check> oracle_equivalence(const Options &opt)
{
  Tally yw("yaqa_round == wavefront == vec oracle of H_O kron H_I");
  Tally lq("ldlq == vec oracle of I kron H_I");
  for (std::uint64_t k = 0; k < 100; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 1, k);
    Rng rng(seed);
    const std::size_t m = 2 + rng.index(3), n = 2 + rng.index(3);
    RoundingProblem p;
    p.W_star = rng.gaussian(m, n, 3.0);
    p.sketch = {rng.spd(m), rng.spd(n), {}};
    p.spec = QuantizerSpec::unit_grid();
    p.reg = 0.0;
    const auto y = yaqa_round(p);
    const auto w = yaqa_round_wavefront(p);
    const auto o = vec_ldlq_oracle(p.W_star, kron_sym(p.sketch), p.spec, 0.0, 0, opt.corrupt_vec);
    yw.expect(y.W_hat.codes == o.W_hat.codes && w.W_hat.codes == y.W_hat.codes, seed,
              std::to_string(m) + "x" + std::to_string(n) + " codes differ");

    p.sketch.H_O = SymMatrix::identity(m);
    const auto l = ldlq(p);
    const auto lo = vec_ldlq_oracle(p.W_star, kron_sym(p.sketch), p.spec, 0.0, 0, opt.corrupt_vec);
    lq.expect(l.W_hat.codes == lo.W_hat.codes, seed, std::to_string(m) + "x" + std::to_string(n) + " codes differ");
  }
  return {yw.done(), lq.done()};
}

// ---------------------------------------------------------------- criterion 2

std::vector<Check> snd_properties(const Options &opt)
{
  Tally depth("DAG depth == boolean-power nilpotence degree");
  for (std::uint64_t k = 0; k < 500; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 2, k);
    Rng rng(seed);
    const std::size_t n = 1 + rng.index(64);
    const double p = std::pow(rng.uniform(), 2.0);
    const auto mask = oracle::random_mask(n, p, seed);
    const auto a = snd(mask), b = oracle::snd_by_powers(mask);
    depth.expect(a == b, seed, "n=" + std::to_string(n) + " depth " + std::to_string(a) + " vs " + std::to_string(b));
  }

  Tally sweeps("sweeps <= snd of the feedback pattern");
  std::size_t max_sweeps = 0;
  for (std::uint64_t k = 0; k < 200; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 3, k);
    Rng rng(seed);
    const std::size_t m = 1 + rng.index(8), n = 1 + rng.index(8);
    RoundingProblem p;
    p.W_star = rng.gaussian(m, n, 6.0);
    p.sketch = {structured_spd(m, rng.uniform(), seed), structured_spd(n, rng.uniform(), seed + 1), {}};
    p.spec = QuantizerSpec::unit_grid(k % 2 ? RoundingMode::Stochastic : RoundingMode::Nearest);
    p.reg = 0.0;
    p.seed = seed;
    const auto r = yaqa_round(p);
    const auto lo = SupportPattern::of_lower(strict_factor(p.sketch.H_O, 1, 0.0) + Matrix::identity(m));
    const auto li = SupportPattern::of_lower(strict_factor(p.sketch.H_I, 1, 0.0) + Matrix::identity(n));
    const std::size_t bound = snd(kron_support(lo, li));
    max_sweeps = std::max(max_sweeps, r.sweeps);
    sweeps.expect(r.sweeps <= bound, seed, std::to_string(r.sweeps) + " sweeps > snd " + std::to_string(bound));
  }

  Tally prod("snd(L1 kron L2) <= snd(L1) + snd(L2) - 1");
  for (std::uint64_t k = 0; k < 200; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 4, k);
    Rng rng(seed);
    const auto a = oracle::random_mask(1 + rng.index(12), rng.uniform(), seed);
    const auto b = oracle::random_mask(1 + rng.index(12), rng.uniform(), seed + 1);
    const std::size_t lhs = oracle::snd_by_powers(kron_support(a, b)), rhs = snd(a) + snd(b) - 1;
    prod.expect(lhs <= rhs, seed, std::to_string(lhs) + " > " + std::to_string(rhs));
  }
  return {depth.done(), sweeps.done("max sweeps " + std::to_string(max_sweeps)), prod.done()};
}

// ---------------------------------------------------------------- criterion 3

std::vector<Check> proxy_bound(const Options &opt)
{
  Tally scalar("mean stochastic proxy error <= 1.05 trD bound (g = 1)");
  Tally block("mean stochastic proxy error <= 1.05 trD bound (g = 2)");
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 5, k);
    Rng rng(seed);
    const std::size_t m = 2 * (1 + rng.index(4)), n = 2 * (1 + rng.index(4));
    RoundingProblem p;
    p.W_star = rng.gaussian(m, n, 5.0);
    p.sketch = {rng.spd(m), rng.spd(n), {}};
    p.spec = QuantizerSpec::unit_grid(RoundingMode::Stochastic);
    p.reg = 1e-4;
    const KronSketch reg{p.sketch.H_O.regularized(p.reg), p.sketch.H_I.regularized(p.reg), {}};
    for (std::size_t g : {1, 2})
    {
      p.spec.block_rows = p.spec.block_cols = g;
      double total = 0.0;
      for (std::size_t t = 0; t < 200; ++t)
      {
        p.seed = derive_seed(seed, g, t);
        total += proxy_error(p.W_star, yaqa_round(p).W_hat.values, reg);
      }
      const double mean = total / 200.0, bound = proxy_bounds(p.sketch, g, g, 0.25, p.reg).trD;
      worst = std::max(worst, mean / bound);
      (g == 1 ? scalar : block).expect(mean <= 1.05 * bound, seed, fmt("mean %.6g > 1.05 * %.6g", mean, bound));
    }
  }
  return {scalar.done(fmt("worst mean/bound %.3f", worst)), block.done()};
}

// ---------------------------------------------------------------- criterion 4

std::vector<Check> cosine_and_error_bound(const Options &opt)
{
  Tally gap("cosine gap bound on random symmetric pairs");
  for (std::uint64_t k = 0; k < 100; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 6, k);
    Rng rng(seed);
    const std::size_t m = 1 + rng.index(5), n = 1 + rng.index(5);
    const auto h = k % 2 ? rng.spd(m * n) : SymMatrix([&] {
      const Matrix a = rng.gaussian(m * n, m * n);
      return Matrix(a + a.transpose());
    }());
    const KronSketch s{rng.spd(m), rng.spd(n), {}};
    const auto g = cosine_gap_bound(h, s, rng.gaussian(m, n), 0.0);
    gap.expect(g.holds, seed, fmt("gap %.6g > bound %.6g", g.measured, g.bound));
  }

  Tally thm("error bound >= mean vec(D) H vec(D)^T on toy layers");
  double worst = 0.0;
  for (std::uint64_t k = 0; k < 10; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 7, k);
    const auto model = ToyModel::random({8, 8, 8, 4}, seed, 1.5, 0.5);
    const auto data = make_dataset({8, 32, 6, 0.5, seed});
    for (std::size_t layer = 0; layer < 2; ++layer)
    {
      const auto h = true_layer_hessian(model, layer, data);
      const std::size_t m = model.weights[layer].rows(), n = model.weights[layer].cols();
      RoundingProblem p;
      p.W_star = model.weights[layer];
      p.sketch = van_loan_optimal(h, m, n);
      p.spec.bits = 8;
      p.spec.mode = RoundingMode::Stochastic;
      p.spec.scale = FixedScale{0.125};
      p.reg = 1e-4;
      const double sigma_sq = sigma_sq_bound(p.spec);
      double lhs = 0.0, rhs = 0.0;
      for (std::size_t t = 0; t < 50; ++t)
      {
        p.seed = derive_seed(seed, layer, t);
        const Matrix delta = yaqa_round(p).W_hat.values - p.W_star;
        const auto b = hessian_error_bound(h.H, p.sketch, delta, 1, 1, sigma_sq, p.reg);
        lhs += b.true_error / 50.0;
        rhs += b.error_bound / 50.0;
      }
      worst = std::max(worst, lhs / rhs);
      thm.expect(lhs <= rhs, seed + layer, fmt("layer %.0f: mean LHS %.6g > RHS %.6g", double(layer), lhs, rhs));
    }
  }
  return {gap.done(), thm.done(fmt("worst LHS/RHS %.3f", worst))};
}

// ---------------------------------------------------------------- criterion 5

std::vector<Check> sketch_optimality(const Options &opt)
{
  Tally reach("power iteration reaches the Van Loan residual within 1e-6");
  Tally mono("normalized cosine non-decreasing per iteration");
  Tally exact("exact Kronecker input recovered to cosine 1 - 1e-9");
  static constexpr std::size_t sizes[][2] = {{2, 2}, {3, 4}, {4, 4}, {5, 3}, {8, 8}, {6, 10}, {16, 16}, {32, 32}, {16, 64}, {2, 8}};
  for (std::uint64_t k = 0; k < 50; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 8, k);
    Rng rng(seed);
    const std::size_t m = sizes[k % 10][0], n = sizes[k % 10][1];
    const FisherEstimate h{k % 3 ? rng.spd(m * n) : rng.low_rank_spd(m * n, 1 + rng.index(m * n), 1e-3), "given", 0};
    std::vector<double> hist;
    const auto p = power_iterate_full(h, m, n, 200, PowerSchedule::Alternating, &hist);
    const auto v = van_loan_optimal(h, m, n);
    const double rp = sketch_quality(h, p).residual, rv = sketch_quality(h, v).residual;
    reach.expect(std::abs(rp - rv) <= 1e-6 * rv, seed, fmt("residual %.10g vs optimum %.10g", rp, rv));
    bool up = true;
    for (std::size_t i = 1; i < hist.size(); ++i)
      up = up && hist[i] >= hist[i - 1] - 1e-12 * std::abs(hist[i - 1]);
    mono.expect(up, seed, "cosine decreased");

    const auto a = rng.spd(m), b = rng.spd(n);
    const FisherEstimate kr{SymMatrix(kron(a.matrix(), b.matrix())), "given", 0};
    const double c = std::min(sketch_quality(kr, power_iterate_full(kr, m, n, 1)).cosine,
                              sketch_quality(kr, van_loan_optimal(kr, m, n)).cosine);
    exact.expect(c >= 1.0 - 1e-9, seed, fmt("cosine %.12f", c));
  }
  return {reach.done(), mono.done(), exact.done()};
}

// ---------------------------------------------------------------- criterion 6

std::vector<Check> sketch_ordering(const Options &opt)
{
  std::size_t a_wins = 0, b_wins = 0, first_a = 0, first_b = 0;
  std::vector<double> cl, ca, cb;
  for (std::uint64_t k = 0; k < 20; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 9, k);
    const auto model = ToyModel::random({8, 8, 8, 8}, seed, 1.5, 0.5);
    const auto data = make_dataset({8, 64, 8, 0.5, seed});
    const auto h = true_layer_hessian(model, 0, data);
    const double l = sketch_quality(h, KronSketch::ldlq(layer_input_hessian(model, 0, data), 8)).cosine;
    const double a = sketch_quality(h, sketch_a(model, 0, data, 3)).cosine;
    const double b = sketch_quality(h, sketch_b(model, 0, data)).cosine;
    if (!(l < a) && !first_a)
      first_a = seed;
    if (!(l < b) && !first_b)
      first_b = seed;
    a_wins += l < a;
    b_wins += l < b;
    cl.push_back(l);
    ca.push_back(a);
    cb.push_back(b);
  }
  auto seeded = [](Check c, std::uint64_t s) {
    if (!c.pass)
      c.seed = s;
    return c;
  };
  const std::string med = fmt("median c: ldlq %.4f", median(cl)) + fmt(", A %.4f, B %.4f", median(ca), median(cb));
  std::vector<Check> out;
  out.push_back(seeded(single("c(I kron H1) < c(A) in >= 90% of 20 seeds", a_wins >= 18,
                              std::to_string(a_wins) + "/20; " + med),
                       first_a));
  out.push_back(seeded(single("c(I kron H1) < c(B) in >= 90% of 20 seeds", b_wins >= 18,
                              std::to_string(b_wins) + "/20"),
                       first_b));

  std::size_t ba = 0;
  for (std::uint64_t k = 0; k < 20; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 10, k);
    const auto model = ToyModel::random({8, 8, 8, 8}, seed, 2.0, 0.8);
    const auto data = make_dataset({8, 256, 8, 0.5, seed});
    const auto h = true_layer_hessian(model, 0, data);
    ba += sketch_quality(h, sketch_b(model, 0, data)).cosine >= sketch_quality(h, sketch_a(model, 0, data, 3)).cosine;
  }
  out.push_back(single("with ample data c(B) >= c(A) in a majority of 20 seeds", ba > 10, std::to_string(ba) + "/20"));
  return out;
}

// ---------------------------------------------------------------- criterion 7

std::vector<Check> kl_direction(const Options &opt)
{
  ExperimentConfig cfg;
  cfg.algorithms = {"ldlq", "yaqa"};
  cfg.sketch.method = SketchMethod::VanLoan;
  cfg.trials = 20;
  cfg.seed = opt.seed;
  cfg.model.seed = derive_seed(opt.seed, 11);
  cfg.data.seed = derive_seed(opt.seed, 12);
  const auto summary = summarize(run_experiment(cfg, opt.threads));
  std::vector<Check> out;
  for (int bits : cfg.bits)
  {
    double l = 0.0, y = 0.0;
    for (const auto &s : summary)
      if (s.bits == bits)
        (s.algorithm == "ldlq" ? l : y) = s.median_kl;
    const bool strict = bits == 2;
    const bool pass = strict ? y < l : y <= l;
    Check c = single("median KL yaqa " + std::string(strict ? "<" : "<=") + " ldlq at " + std::to_string(bits) +
                         " bits over 20 seeds",
                     pass, fmt("yaqa %.6g, ldlq %.6g, ratio %.3f", y, l, y / l));
    if (!pass)
      c.seed = opt.seed;
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------- criterion 8

std::vector<Check> incoherence(const Options &opt)
{
  std::vector<double> ratios;
  for (std::uint64_t k = 0; k < 100; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 13, k);
    Rng rng(seed);
    const KronSketch s{rng.spiked(16), rng.spiked(32), {}};
    const auto p = incoherence_process(Matrix(16, 32, 1.0), s, derive_seed(seed, 1), derive_seed(seed, 2));
    ratios.push_back(trace_ratio_diagnostic(s, p.sketch, 1e-4));
  }
  const double med = median(ratios);
  std::vector<Check> out{single("median trace ratio after RHT < 1 on spiked factors", med < 1.0,
                                fmt("median %.4f over 100 seeds", med))};

  Tally orth("RHT orthogonal, invertible and spectrum-preserving at 1e-9");
  for (std::uint64_t k = 0; k < 30; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 14, k);
    const std::size_t n = std::size_t{1} << (k % 9);
    const auto u = RHT::random(n, seed);
    const Matrix d = u.dense();
    const double e_orth = frob_norm(d * d.transpose() - Matrix::identity(n));
    Rng rng(seed);
    const Matrix x = rng.gaussian(n, 3);
    const double e_inv = frob_norm(u.left_inverse(u.left(x)) - x) / frob_norm(x);
    const auto h = rng.spiked(n, 1, 50.0);
    const auto ev0 = sym_eigen(h).values, ev1 = sym_eigen(SymMatrix(u.conjugate(h))).values;
    double e_spec = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      e_spec = std::max(e_spec, std::abs(ev0[i] - ev1[i]) / std::abs(ev0[0]));
    const double e = std::max({e_orth, e_inv, e_spec});
    orth.expect(e <= 1e-9, seed, fmt("n=%.0f worst error %.3g", double(n), e));
  }
  out.push_back(orth.done());
  return out;
}

// ---------------------------------------------------------------- criterion 9

std::vector<Check> model_calculus(const Options &opt)
{
  Tally fd("gradients match finite differences to 1e-5 relative");
  for (std::uint64_t k = 0; k < 20; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 15, k);
    const auto model = ToyModel::random({4, 5, 5, 3}, seed, 1.5, k % 2 ? 0.5 : 0.0);
    const auto data = make_dataset({4, 1, 3, 0.5, seed});
    const Matrix &x = data.sequences[0];
    const std::vector<std::size_t> labels{k % 3, (k + 1) % 3, (k + 2) % 3};
    double worst = 0.0;
    for (std::size_t layer = 0; layer < model.layers(); ++layer)
    {
      const Matrix g = layer_grad(model, layer, x, labels);
      const double scale = std::max(frob_norm(g), 1e-12);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
        {
          const double num = oracle::central_difference(
              [&](double s) {
                Matrix w = model.weights[layer];
                w(i, j) += s;
                return cross_entropy(model.with_layer(layer, w), x, labels);
              },
              1e-5);
          worst = std::max(worst, std::abs(num - g(i, j)) / scale);
        }
    }
    fd.expect(worst <= 1e-5, seed, fmt("relative error %.3g", worst));
  }

  Tally taylor("KL(W + t D) / t^2 within 5% of half the quadratic form at t = 1e-3");
  Tally first("first-order KL term <= 1e-8");
  for (std::uint64_t k = 0; k < 10; ++k)
  {
    const std::uint64_t seed = derive_seed(opt.seed, 16, k);
    const auto model = ToyModel::random({6, 6, 6, 4}, seed, 1.5, 0.5);
    const auto data = make_dataset({6, 8, 4, 0.5, seed});
    const std::size_t layer = k % 2;
    const auto h = true_layer_hessian(model, layer, data);
    Rng rng(seed);
    Matrix u = rng.gaussian(model.weights[layer].rows(), model.weights[layer].cols());
    u = u * (1.0 / frob_norm(u));
    auto kl = [&](double t) {
      return kl_to_reference(model, model.with_layer(layer, model.weights[layer] + u * t), data);
    };
    const double quad = 0.5 * quad_form(vec(u), h.H.matrix());
    const double t = 1e-3, ratio = kl(t) / (t * t) / quad;
    taylor.expect(std::abs(ratio - 1.0) <= 0.05, seed, fmt("ratio %.4f", ratio));
    const double slope = oracle::central_difference(kl, 1e-5);
    first.expect(std::abs(slope) <= 1e-8, seed, fmt("slope %.3g", slope));
  }
  return {fd.done(), taylor.done(), first.done()};
}

struct Spec
{
  const char *title;
  double budget;
  std::vector<Check> (*run)(const Options &);
};

const Spec kSpecs[kCriteria] = {
  {"oracle equivalence", 60, oracle_equivalence},
  {"nilpotence degree properties", 60, snd_properties},
  {"proxy-error bound, scalar and blockwise", 120, proxy_bound},
  {"cosine gap and end-to-end error bound", 300, cosine_and_error_bound},
  {"sketch optimality", 120, sketch_optimality},
  {"sketch quality ordering", 300, sketch_ordering},
  {"end-to-end KL direction", 600, kl_direction},
  {"incoherence processing", 120, incoherence},
  {"model calculus", 120, model_calculus},
};

} // namespace

bool CriterionReport::passed() const
{
  return std::all_of(checks.begin(), checks.end(), [](const Check &c) { return c.pass; }) &&
         seconds <= budget_seconds;
}

CriterionReport run_criterion(int id, const Options &opt)
{
  if (id < 1 || id > kCriteria)
    throw Error(ErrorKind::InvalidArgument, "criterion must be in 1.." + std::to_string(kCriteria));
  const Spec &s = kSpecs[id - 1];
  CriterionReport r{id, s.title, {}, 0.0, s.budget};
  const auto start = std::chrono::steady_clock::now();
  try
  {
    r.checks = s.run(opt);
  }
  catch (const std::exception &e)
  {
    r.checks.push_back(single("completed without error", false, e.what()));
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.checks.push_back(single("within runtime budget", r.seconds <= r.budget_seconds,
                            fmt("%.2f s of %.0f s", r.seconds, r.budget_seconds)));
  return r;
}

const std::vector<std::string> &suite_names()
{
  static const std::vector<std::string> names{"oracle", "snd", "bounds", "sketch", "kl", "ip", "model", "all"};
  return names;
}

std::vector<int> suite_criteria(const std::string &suite)
{
  if (suite == "oracle")
    return {1};
  if (suite == "snd")
    return {2};
  if (suite == "bounds")
    return {3, 4};
  if (suite == "sketch")
    return {5, 6};
  if (suite == "kl")
    return {7};
  if (suite == "ip")
    return {8};
  if (suite == "model")
    return {9};
  if (suite == "all")
    return {1, 2, 3, 4, 5, 6, 7, 8, 9};
  throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' (oracle, snd, bounds, sketch, kl, ip, model, all)");
}

} // namespace yaqa::verify
