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

#include "yaqa/experiment.hpp"

#include "yaqa/bounds.hpp"
#include "yaqa/error.hpp"
#include "yaqa/random.hpp"
#include "yaqa/rounding.hpp"
#include "yaqa/transform.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <thread>

namespace yaqa
{

namespace
{

[[noreturn]] void invalid(const std::string &path, const std::string &why)
{
  throw Error(ErrorKind::InvalidArgument, path + ": " + why);
}

// Parsed algorithm name. groups > 0 only for guidedquant.
struct Algorithm
{
  std::string name;
  std::size_t groups = 0;
};

Algorithm parse_algorithm(const std::string &s)
{
  if (s == "nearest" || s == "ldlq" || s == "yaqa")
    return {s, 0};
  const std::string prefix = "guidedquant:";
  if (s.rfind(prefix, 0) == 0)
  {
    const std::string g = s.substr(prefix.size());
    if (!g.empty() && std::all_of(g.begin(), g.end(), [](char c) { return c >= '0' && c <= '9'; }))
    {
      const auto groups = static_cast<std::size_t>(std::stoull(g));
      if (groups > 0)
        return {s, groups};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown algorithm '" + s + "'");
}

std::string fmt(double x)
{
  if (std::isnan(x))
    return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double median(std::vector<double> v)
{
  if (v.empty())
    return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t k = v.size() / 2;
  return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

std::vector<ResultRow> run_trial(const ExperimentConfig &cfg, std::size_t trial)
{
  const TrialSetup t = setup_trial(cfg, trial);
  const std::size_t l = cfg.layer;
  const Matrix &w = t.model.weights[l];
  const std::size_t m = w.rows(), n = w.cols();

  // Rounding happens in the processed basis when incoherence is on; the
  // Hessian, sketches and weights are all mapped there consistently.
  std::optional<RHT> U, V;
  Matrix w_r = w;
  SymMatrix h_r = t.H.H;
  if (cfg.incoherence)
  {
    U = RHT::random(m, derive_seed(cfg.seed, trial, 1));
    V = RHT::random(n, derive_seed(cfg.seed, trial, 2));
    w_r = V->right_transpose(U->left(w));
    h_r = transform_dense_hessian(t.H.H, *U, *V);
  }
  auto to_round_space = [&](const KronSketch &s) -> KronSketch {
    if (!cfg.incoherence)
      return s;
    // U I U^T is I exactly in real arithmetic; keep it bit-exact so LDLQ applies.
    const bool eye_o = s.meta.method == "ldlq" || s.meta.method == "identity";
    const bool eye_i = s.meta.method == "identity";
    return {eye_o ? s.H_O : SymMatrix(U->conjugate(s.H_O)), eye_i ? s.H_I : SymMatrix(V->conjugate(s.H_I)), s.meta};
  };
  auto restore = [&](const Matrix &x) { return cfg.incoherence ? V->right(U->left_inverse(x)) : x; };

  const KronSketch identity{SymMatrix::identity(m), SymMatrix::identity(n), {"identity", 0, false, ""}};
  const KronSketch ldlq_sketch = KronSketch::ldlq(t.H1, m);

  std::vector<ResultRow> rows;
  for (int bits : cfg.bits)
  {
    QuantizerSpec spec = cfg.quantizer;
    spec.bits = bits;
    for (const auto &name : cfg.algorithms)
    {
      const Algorithm alg = parse_algorithm(name);
      RoundingProblem p{w_r, {}, spec, cfg.reg, derive_seed(cfg.seed, trial, 100 + static_cast<std::uint64_t>(bits))};
      ResultRow row;
      row.trial = trial;
      row.algorithm = alg.name;
      row.bits = bits;
      row.error_bound = std::numeric_limits<double>::quiet_NaN();

      RoundingResult r;
      const auto start = std::chrono::steady_clock::now();
      if (alg.groups > 0)
      {
        auto blocks = guided_blocks_from_full(t.H.H, m, n, alg.groups);
        if (cfg.incoherence)
          for (auto &b : blocks)
            b = SymMatrix(V->conjugate(b));
        // Only the input side is processed for the block-diagonal form, since
        // mixing output channels would break the per-group structure.
        p.W_star = cfg.incoherence ? V->right_transpose(w) : w;
        r = guidedquant_round(p, blocks);
        row.cosine = frob_cosine(t.H.H.matrix(), guided_dense(guided_blocks_from_full(t.H.H, m, n, alg.groups), m).matrix());
        row.sketch = "guided:" + std::to_string(alg.groups);
        const auto stop = std::chrono::steady_clock::now();
        row.wall_time = std::chrono::duration<double>(stop - start).count();
        const Matrix w_hat = cfg.incoherence ? V->right(r.W_hat.values) : r.W_hat.values;
        row.proxy_error = r.proxy_error;
        row.sweeps = r.sweeps;
        row.true_second_order_error = second_order_error(t.model, l, w_hat, t.H);
        row.kl = kl_to_reference(t.model, t.model.with_layer(l, w_hat), t.eval);
        rows.push_back(std::move(row));
        continue;
      }

      const KronSketch &own = alg.name == "nearest" ? identity : alg.name == "ldlq" ? ldlq_sketch : t.sketch;
      p.sketch = to_round_space(own);
      if (alg.name == "nearest")
      {
        const Quantizer q(spec, p.W_star, p.seed);
        r.W_hat = q.quantize(p.W_star);
        r.proxy_error = proxy_error(p.W_star, r.W_hat.values, p.sketch);
        r.converged = true;
      }
      else if (alg.name == "ldlq")
        r = ldlq(p);
      else
        r = yaqa_round(p);
      const auto stop = std::chrono::steady_clock::now();
      row.wall_time = std::chrono::duration<double>(stop - start).count();
      row.sketch = alg.name == "yaqa" ? to_string(cfg.sketch.method) : own.meta.method;
      row.proxy_error = r.proxy_error;
      row.sweeps = r.sweeps;
      row.cosine = frob_cosine(t.H.H.matrix(), own.dense());

      const Matrix delta = r.W_hat.values - p.W_star;
      const Quantizer q(spec, p.W_star, p.seed);
      row.error_bound =
        hessian_error_bound(h_r, p.sketch, delta, spec.block_rows, spec.block_cols, q.sigma_sq(), cfg.reg).error_bound;

      const Matrix w_hat = restore(r.W_hat.values);
      row.true_second_order_error = second_order_error(t.model, l, w_hat, t.H);
      row.kl = kl_to_reference(t.model, t.model.with_layer(l, w_hat), t.eval);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

} // namespace

KronSketch build_sketch(const ExperimentConfig &cfg, const TrialSetup &t, std::size_t trial)
{
  const std::size_t l = cfg.layer;
  const std::size_t m = t.model.weights[l].rows(), n = t.model.weights[l].cols();
  const GradientSource src{cfg.sketch.labels, cfg.sketch.samples, derive_seed(cfg.seed, trial, 7)};
  auto fisher = [&]() { return cfg.sketch.labels == LabelMode::Exact ? t.H : true_layer_hessian(t.model, l, t.data, src); };
  switch (cfg.sketch.method)
  {
  case SketchMethod::Ldlq:
    return KronSketch::ldlq(t.H1, m);
  case SketchMethod::A:
    return sketch_a(t.model, l, t.data, cfg.sketch.iters, src);
  case SketchMethod::B:
    return sketch_b(t.model, l, t.data, src);
  case SketchMethod::PowerFull:
    return power_iterate_full(fisher(), m, n, cfg.sketch.iters);
  case SketchMethod::VanLoan:
    return van_loan_optimal(fisher(), m, n);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown sketch method");
}

TrialSetup setup_trial(const ExperimentConfig &cfg, std::size_t trial, const Dataset *data)
{
  TrialSetup t;
  t.model = ToyModel::random(cfg.model.dims, derive_seed(cfg.model.seed, trial), cfg.model.weight_scale, cfg.model.mix);
  DataSpec d = cfg.data;
  d.seed = derive_seed(cfg.data.seed, trial);
  d.split = 0;
  t.data = data ? *data : make_dataset(d);
  d.split = 1;
  d.sequences = cfg.eval_sequences;
  t.eval = make_dataset(d);
  t.H = true_layer_hessian(t.model, cfg.layer, t.data);
  t.H1 = layer_input_hessian(t.model, cfg.layer, t.data);
  t.sketch = build_sketch(cfg, t, trial);
  return t;
}

const char *to_string(SketchMethod m)
{
  switch (m)
  {
  case SketchMethod::Ldlq:
    return "ldlq";
  case SketchMethod::A:
    return "a";
  case SketchMethod::B:
    return "b";
  case SketchMethod::PowerFull:
    return "powerfull";
  case SketchMethod::VanLoan:
    return "vanloan";
  }
  return "?";
}

SketchMethod sketch_method_from_string(const std::string &s)
{
  for (auto m : {SketchMethod::Ldlq, SketchMethod::A, SketchMethod::B, SketchMethod::PowerFull, SketchMethod::VanLoan})
    if (s == to_string(m))
      return m;
  throw Error(ErrorKind::InvalidArgument, "unknown sketch method '" + s + "' (ldlq, a, b, powerfull, vanloan)");
}

void ExperimentConfig::validate() const
{
  const auto &dims = model.dims;
  if (dims.size() < 2)
    invalid("model.dims", "need at least two entries");
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (dims[i] == 0)
      invalid("model.dims[" + std::to_string(i) + "]", "must be positive");
  if (!(model.weight_scale > 0.0) || !std::isfinite(model.weight_scale))
    invalid("model.weight_scale", "must be positive and finite");
  if (!(model.mix >= 0.0 && model.mix <= 1.0))
    invalid("model.mix", "must lie in [0, 1]");
  if (data.dim != dims.front())
    invalid("data.dim", "must equal model.dims[0]");
  if (data.sequences == 0)
    invalid("data.sequences", "must be positive");
  if (data.seq_len == 0)
    invalid("data.seq_len", "must be positive");
  if (!(data.correlation >= 0.0 && data.correlation <= 1.0))
    invalid("data.correlation", "must lie in [0, 1]");
  if (eval_sequences == 0)
    invalid("eval_sequences", "must be positive");
  if (layer + 1 >= dims.size())
    invalid("layer", "must index a weight matrix (0.." + std::to_string(dims.size() - 2) + ")");
  const std::size_t m = dims[layer + 1], n = dims[layer];
  if (m * n > 4096)
    invalid("layer", "dense Hessian of " + std::to_string(m * n) + " entries per side is over the 4096 cap");
  if (sketch.iters == 0 && (sketch.method == SketchMethod::PowerFull))
    invalid("sketch.iters", "power iteration needs at least one step");
  if (sketch.labels == LabelMode::MonteCarlo && sketch.samples == 0)
    invalid("sketch.samples", "must be positive for Monte-Carlo labels");
  try
  {
    quantizer.validate();
  }
  catch (const Error &e)
  {
    invalid("quantizer", e.what());
  }
  if (quantizer.block_rows == 0 || m % quantizer.block_rows != 0)
    invalid("quantizer.block_rows", "must divide " + std::to_string(m));
  if (quantizer.block_cols == 0 || n % quantizer.block_cols != 0)
    invalid("quantizer.block_cols", "must divide " + std::to_string(n));
  if (const auto *g = std::get_if<GroupwiseScale>(&quantizer.scale))
    if (g->group_len == 0 || n % g->group_len != 0)
      invalid("quantizer.group_len", "must divide the input width " + std::to_string(n));
  if (bits.empty())
    invalid("bits", "need at least one bit width");
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits[i] < 1 || bits[i] > 16)
      invalid("bits[" + std::to_string(i) + "]", "must lie in [1, 16]");
  if (incoherence && (!is_power_of_two(m) || !is_power_of_two(n)))
    invalid("incoherence", "needs power-of-two layer dimensions, got " + std::to_string(m) + " x " + std::to_string(n));
  if (algorithms.empty())
    invalid("algorithms", "need at least one algorithm");
  for (std::size_t i = 0; i < algorithms.size(); ++i)
  {
    const std::string path = "algorithms[" + std::to_string(i) + "]";
    Algorithm a;
    try
    {
      a = parse_algorithm(algorithms[i]);
    }
    catch (const Error &e)
    {
      invalid(path, "unknown algorithm '" + algorithms[i] + "' (nearest, ldlq, yaqa, guidedquant:<groups>)");
    }
    if (a.groups > 0 && m % a.groups != 0)
      invalid(path, "group count must divide the output width " + std::to_string(m));
  }
  if (trials == 0)
    invalid("trials", "must be positive");
  if (!(reg >= 0.0) || !std::isfinite(reg))
    invalid("reg", "must be non-negative and finite");
}

std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg, unsigned threads)
{
  cfg.validate();
  std::vector<std::vector<ResultRow>> per_trial(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t t; (t = next.fetch_add(1)) < cfg.trials;)
    {
      try
      {
        per_trial[t] = run_trial(cfg, t);
      }
      catch (...)
      {
        errors[t] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cfg.trials)));
  if (count == 1)
    worker();
  else
  {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < count; ++i)
      pool.emplace_back(worker);
    for (auto &th : pool)
      th.join();
  }
  for (const auto &e : errors)
    if (e)
      std::rethrow_exception(e);

  std::vector<ResultRow> rows;
  for (auto &v : per_trial)
    for (auto &r : v)
      rows.push_back(std::move(r));
  return rows;
}

void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows)
{
  os << kResultsSchema << '\n';
  os << "trial,algorithm,sketch,bits,proxy_error,true_second_order_error,kl,error_bound,cosine,sweeps\n";
  for (const auto &r : rows)
    os << r.trial << ',' << r.algorithm << ',' << r.sketch << ',' << r.bits << ',' << fmt(r.proxy_error) << ','
       << fmt(r.true_second_order_error) << ',' << fmt(r.kl) << ',' << fmt(r.error_bound) << ',' << fmt(r.cosine)
       << ',' << r.sweeps << '\n';
}

void write_timings_csv(std::ostream &os, const std::vector<ResultRow> &rows)
{
  os << "trial,algorithm,bits,wall_time\n";
  for (const auto &r : rows)
    os << r.trial << ',' << r.algorithm << ',' << r.bits << ',' << fmt(r.wall_time) << '\n';
}

std::vector<SummaryEntry> summarize(const std::vector<ResultRow> &rows)
{
  std::vector<SummaryEntry> out;
  std::map<std::pair<std::string, int>, std::size_t> index;
  std::vector<std::vector<const ResultRow *>> groups;
  for (const auto &r : rows)
  {
    const auto key = std::make_pair(r.algorithm, r.bits);
    auto it = index.find(key);
    if (it == index.end())
    {
      it = index.emplace(key, out.size()).first;
      out.push_back({r.algorithm, r.bits});
      groups.emplace_back();
    }
    groups[it->second].push_back(&r);
  }
  for (std::size_t g = 0; g < out.size(); ++g)
  {
    std::vector<double> kl, proxy, err;
    for (const auto *r : groups[g])
    {
      kl.push_back(r->kl);
      proxy.push_back(r->proxy_error);
      err.push_back(r->true_second_order_error);
    }
    double sum = 0.0;
    for (double x : kl)
      sum += x;
    out[g].median_kl = median(kl);
    out[g].mean_kl = sum / static_cast<double>(kl.size());
    out[g].median_proxy = median(proxy);
    out[g].median_true_error = median(err);
    out[g].rows = kl.size();
  }
  return out;
}

} // namespace yaqa
