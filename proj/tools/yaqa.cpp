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

// yaqa: command-line driver. Exit codes: 0 ok, 1 validation or input error,
// 2 property-suite failure.

#include "config.hpp"

#include "yaqa/bounds.hpp"
#include "yaqa/error.hpp"
#include "yaqa/random.hpp"
#include "yaqa/rounding.hpp"
#include "yaqa/transform.hpp"
#include "yaqa/verify.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace yaqa;
using cli::json;

namespace
{

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kSuiteFailure = 2;

struct Common
{
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

void add_common(CLI::App *app, Common &c, bool needs_config)
{
  auto *opt = app->add_option("--config", c.config, "JSON configuration file");
  if (needs_config)
    opt->required();
  app->add_option("--out", c.out, "output directory");
  app->add_option("--seed", c.seed, "master seed (overrides the config)");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
}

fs::path out_dir(const Common &c, const std::string &fallback)
{
  const fs::path p = c.out.empty() ? fs::path(fallback) : fs::path(c.out);
  fs::create_directories(p);
  return p;
}

std::ofstream open_out(const fs::path &p)
{
  std::ofstream os(p, std::ios::binary);
  if (!os)
    throw Error(ErrorKind::Io, "cannot write " + p.string());
  return os;
}

void write_json(const fs::path &p, const json &j)
{
  auto os = open_out(p);
  os << j.dump(2) << '\n';
}

ExperimentConfig load_config(const Common &c)
{
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : cli::parse_experiment_config(cli::load_json(c.config));
  if (c.seed)
    cfg.seed = *c.seed;
  return cfg;
}

json meta_json(const SketchMeta &m)
{
  return {{"method", m.method}, {"iterations", m.iterations}, {"normalized", m.normalized}, {"normalization", m.normalization}};
}

// ------------------------------------------------------------------ round

struct RoundArgs
{
  std::string algorithm = "yaqa";
  std::string ip = "off";
};

int cmd_round(const Common &c, const RoundArgs &a)
{
  const json j = cli::load_json(c.config);
  for (const auto &[key, _] : j.items())
    if (key != "weights" && key != "H_O" && key != "H_I" && key != "quantizer" && key != "reg" && key != "seed")
      throw Error(ErrorKind::InvalidArgument, key + ": unknown field");
  const fs::path base = fs::path(c.config).parent_path();
  auto path_of = [&](const char *key, const char *fallback) {
    if (!j.contains(key))
      return base / fallback;
    if (!j[key].is_string())
      throw Error(ErrorKind::InvalidArgument, std::string(key) + ": expected a path");
    const fs::path p = j[key].get<std::string>();
    return p.is_absolute() ? p : base / p;
  };

  RoundingProblem p;
  p.W_star = load_matrix(path_of("weights", "W.krnd").string());
  p.sketch = {SymMatrix(load_matrix(path_of("H_O", "H_O.krnd").string())),
              SymMatrix(load_matrix(path_of("H_I", "H_I.krnd").string())),
              {}};
  if (p.W_star.rows() != p.sketch.m() || p.W_star.cols() != p.sketch.n())
    throw Error(ErrorKind::ShapeMismatch, "weights are " + std::to_string(p.W_star.rows()) + "x" +
                                              std::to_string(p.W_star.cols()) + " but the sketch is " +
                                              std::to_string(p.sketch.m()) + "x" + std::to_string(p.sketch.n()));
  if (j.contains("quantizer"))
    p.spec = cli::parse_quantizer(j["quantizer"]);
  if (j.contains("reg"))
  {
    if (!j["reg"].is_number() || j["reg"].get<double>() < 0.0)
      throw Error(ErrorKind::InvalidArgument, "reg: expected a non-negative number");
    p.reg = j["reg"].get<double>();
  }
  const std::uint64_t seed = c.seed ? *c.seed : (j.contains("seed") ? j["seed"].get<std::uint64_t>() : 0);
  p.seed = derive_seed(seed, 0);

  json result;
  const bool ip = a.ip == "on";
  std::optional<IncoherentProblem> proc;
  if (ip)
  {
    const std::uint64_t so = derive_seed(seed, 1), si = derive_seed(seed, 2);
    proc = incoherence_process(p.W_star, p.sketch, so, si);
    p.W_star = proc->W;
    p.sketch = proc->sketch;
    result["ip"] = {{"seed_O", so}, {"seed_I", si}};
  }

  RoundingResult r;
  if (a.algorithm == "yaqa")
    r = yaqa_round(p);
  else if (a.algorithm == "wavefront")
    r = yaqa_round_wavefront(p);
  else if (a.algorithm == "ldlq")
  {
    // the bundle's H_O is ignored: LDLQ is YAQA with H_O = I
    p.sketch.H_O = SymMatrix::identity(p.sketch.m());
    r = ldlq(p);
  }
  else
  {
    const Quantizer q(p.spec, p.W_star, p.seed);
    r.W_hat = q.quantize(p.W_star);
    r.proxy_error = proxy_error(p.W_star, r.W_hat.values, p.sketch);
    r.converged = true;
  }

  const fs::path dir = out_dir(c, "out");
  Matrix codes(r.W_hat.values.rows(), r.W_hat.values.cols());
  for (std::size_t i = 0; i < codes.rows(); ++i)
    for (std::size_t k = 0; k < codes.cols(); ++k)
      codes(i, k) = static_cast<double>(r.W_hat.code(i, k));
  save_matrix((dir / "codes.krnd").string(), codes);
  save_matrix((dir / "scales.krnd").string(), r.W_hat.scales);
  save_matrix((dir / "w_hat.krnd").string(), proc ? proc->restore(r.W_hat.values) : r.W_hat.values);

  result["algorithm"] = a.algorithm;
  result["rows"] = codes.rows();
  result["cols"] = codes.cols();
  result["sweeps"] = r.sweeps;
  result["converged"] = r.converged;
  result["proxy_error"] = r.proxy_error;
  result["quantizer"] = cli::to_json(p.spec);
  result["reg"] = p.reg;
  result["seed"] = seed;
  result["files"] = {{"codes", "codes.krnd"}, {"scales", "scales.krnd"}, {"w_hat", "w_hat.krnd"}};
  write_json(dir / "result.json", result);
  std::cout << result.dump(2) << '\n';
  return kOk;
}

// ----------------------------------------------------------------- sketch

struct SketchArgs
{
  std::optional<std::string> method;
  std::optional<std::size_t> iters;
  std::string data;
  std::string ip = "off";
  std::size_t trial = 0;
};

int cmd_sketch(const Common &c, const SketchArgs &a)
{
  ExperimentConfig cfg = load_config(c);
  if (a.method)
    cfg.sketch.method = sketch_method_from_string(*a.method);
  if (a.iters)
    cfg.sketch.iters = *a.iters;
  cfg.validate();

  std::optional<Dataset> data;
  if (!a.data.empty())
  {
    const Matrix tokens = load_matrix(a.data);
    if (tokens.cols() != cfg.data.dim || tokens.rows() == 0 || tokens.rows() % cfg.data.seq_len != 0)
      throw Error(ErrorKind::ShapeMismatch, "--data must hold whole sequences of " + std::to_string(cfg.data.seq_len) +
                                                " tokens with " + std::to_string(cfg.data.dim) + " features");
    Dataset d;
    d.seed = 0;
    for (std::size_t s = 0; s < tokens.rows() / cfg.data.seq_len; ++s)
    {
      Matrix seq(cfg.data.seq_len, tokens.cols());
      for (std::size_t t = 0; t < cfg.data.seq_len; ++t)
        for (std::size_t k = 0; k < tokens.cols(); ++k)
          seq(t, k) = tokens(s * cfg.data.seq_len + t, k);
      d.sequences.push_back(std::move(seq));
    }
    data = std::move(d);
  }

  const TrialSetup t = setup_trial(cfg, a.trial, data ? &*data : nullptr);
  const auto q = sketch_quality(t.H, t.sketch);
  KronSketch out = t.sketch;
  Matrix w = t.model.weights[cfg.layer];
  json j;
  j["meta"] = meta_json(t.sketch.meta);
  j["layer"] = cfg.layer;
  j["trial"] = a.trial;
  j["m"] = t.sketch.m();
  j["n"] = t.sketch.n();
  j["quality"] = {{"cosine", q.cosine},   {"normalized_cosine", q.normalized_cosine},
                  {"residual", q.residual}, {"mu_O", q.mu_O},
                  {"mu_I", q.mu_I},       {"rank_O", q.rank_O},
                  {"rank_I", q.rank_I}};
  j["fisher"] = {{"provenance", t.H.provenance}, {"samples", t.H.samples}};
  if (a.ip == "on")
  {
    const std::uint64_t so = derive_seed(cfg.seed, a.trial, 1), si = derive_seed(cfg.seed, a.trial, 2);
    const auto p = incoherence_process(w, t.sketch, so, si);
    out = p.sketch;
    w = p.W;
    j["ip"] = {{"seed_O", so},
               {"seed_I", si},
               {"mu_O", incoherence_mu(out.H_O)},
               {"mu_I", incoherence_mu(out.H_I)},
               {"trace_ratio", trace_ratio_diagnostic(t.sketch, out, cfg.reg)}};
  }

  const fs::path dir = out_dir(c, cfg.output);
  save_matrix((dir / "H_O.krnd").string(), out.H_O.matrix());
  save_matrix((dir / "H_I.krnd").string(), out.H_I.matrix());
  save_matrix((dir / "W.krnd").string(), w);
  write_json(dir / "sketch.json", j);
  // a problem bundle that `yaqa round` consumes directly
  write_json(dir / "problem.json", {{"weights", "W.krnd"},
                                    {"H_O", "H_O.krnd"},
                                    {"H_I", "H_I.krnd"},
                                    {"quantizer", cli::to_json(cfg.quantizer)},
                                    {"reg", cfg.reg},
                                    {"seed", cfg.seed}});
  std::cout << j.dump(2) << '\n';
  return kOk;
}

// ------------------------------------------------------------ bound-check

std::string num(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int cmd_bound_check(const Common &c)
{
  const ExperimentConfig cfg = load_config(c);
  const fs::path dir = out_dir(c, cfg.output);
  auto os = open_out(dir / "bounds.csv");
  os << kResultsSchema << '\n'
     << "trial,sketch,bits,proxy_error,proxy_bound_trD,proxy_bound_mu,true_error,error_bound,error_bound_mu_term,"
        "cosine,ldlq_ratio,rank_condition_k,norms\n";
  for (std::size_t trial = 0; trial < cfg.trials; ++trial)
  {
    const TrialSetup t = setup_trial(cfg, trial);
    const auto ratio = ldlq_ratio(t.sketch, t.H1);
    for (int bits : cfg.bits)
    {
      RoundingProblem p{t.model.weights[cfg.layer], t.sketch, cfg.quantizer, cfg.reg,
                        derive_seed(cfg.seed, trial, 100 + static_cast<std::uint64_t>(bits))};
      p.spec.bits = bits;
      const auto r = yaqa_round(p);
      const Quantizer q(p.spec, p.W_star, p.seed);
      const auto b = hessian_error_bound(t.H.H, t.sketch, r.W_hat.values - p.W_star, p.spec.block_rows,
                                    p.spec.block_cols, q.sigma_sq(), cfg.reg);
      os << trial << ',' << to_string(cfg.sketch.method) << ',' << bits << ',' << num(b.proxy_error) << ','
         << num(b.proxy_bound_trD) << ',' << num(b.proxy_bound_mu) << ',' << num(b.true_error) << ','
         << num(b.error_bound) << ',' << num(b.error_bound_mu_term) << ',' << num(b.cosine) << ','
         << num(ratio.ratio) << ',' << num(ratio.k_O) << ',' << b.norms << '\n';
    }
  }
  std::cout << "wrote " << (dir / "bounds.csv").string() << '\n';
  return kOk;
}

// -------------------------------------------------------------------- run

int cmd_run(const Common &c)
{
  const ExperimentConfig cfg = load_config(c);
  const auto rows = run_experiment(cfg, c.threads);
  const fs::path dir = out_dir(c, cfg.output);
  {
    auto os = open_out(dir / "results.csv");
    write_results_csv(os, rows);
  }
  {
    auto os = open_out(dir / "timings.csv");
    write_timings_csv(os, rows);
  }
  json summary;
  summary["schema"] = kResultsSchema;
  summary["config"] = cli::to_json(cfg);
  summary["entries"] = json::array();
  for (const auto &s : summarize(rows))
    summary["entries"].push_back({{"algorithm", s.algorithm},
                                  {"bits", s.bits},
                                  {"median_kl", s.median_kl},
                                  {"mean_kl", s.mean_kl},
                                  {"median_proxy_error", s.median_proxy},
                                  {"median_true_second_order_error", s.median_true_error},
                                  {"rows", s.rows}});
  write_json(dir / "summary.json", summary);
  for (const auto &e : summary["entries"])
    std::cout << e["algorithm"].get<std::string>() << " bits=" << e["bits"].get<int>()
              << " median_kl=" << e["median_kl"].get<double>() << '\n';
  return kOk;
}

// ----------------------------------------------------------------- verify

struct VerifyArgs
{
  std::string suite = "all";
  bool negative_control = false;
};

int cmd_verify(const Common &c, const VerifyArgs &a)
{
  verify::Options opt;
  opt.seed = c.seed.value_or(0);
  opt.corrupt_vec = a.negative_control;
  opt.threads = c.threads;
  const auto ids = verify::suite_criteria(a.suite);
  bool ok = true;
  json report = json::array();
  for (int id : ids)
  {
    const auto r = verify::run_criterion(id, opt);
    ok = ok && r.passed();
    std::cout << "criterion " << r.id << " " << r.title << ": " << (r.passed() ? "PASS" : "FAIL") << '\n';
    json checks = json::array();
    for (const auto &ch : r.checks)
    {
      std::cout << "    [" << (ch.pass ? "ok" : "FAIL") << "] " << ch.name << ": " << ch.detail;
      if (ch.seed)
        std::cout << " (seed " << *ch.seed << ")";
      std::cout << '\n';
      json cj = {{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}};
      if (ch.seed)
        cj["seed"] = *ch.seed;
      checks.push_back(cj);
    }
    report.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.passed()}, {"seconds", r.seconds},
                      {"checks", checks}});
  }
  if (!c.out.empty())
    write_json(out_dir(c, c.out) / "verify.json", {{"suite", a.suite}, {"criteria", report}});
  return ok ? kOk : kSuiteFailure;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"YAQA adaptive rounding and toy-model harness"};
  app.require_subcommand(1);

  Common common;
  RoundArgs round_args;
  auto *round = app.add_subcommand("round", "round one problem bundle");
  add_common(round, common, true);
  round->add_option("--algorithm", round_args.algorithm, "rounding algorithm")
    ->check(CLI::IsMember({"yaqa", "wavefront", "ldlq", "nearest"}));
  round->add_option("--ip", round_args.ip, "incoherence processing")->check(CLI::IsMember({"on", "off"}));

  SketchArgs sketch_args;
  auto *sketch = app.add_subcommand("sketch", "build a Kronecker sketch of one toy-model layer");
  add_common(sketch, common, false);
  sketch->add_option("--method", sketch_args.method, "ldlq, a, b, powerfull or vanloan");
  sketch->add_option("--iters", sketch_args.iters, "power iterations");
  sketch->add_option("--data", sketch_args.data, "calibration tokens in the binary container");
  sketch->add_option("--ip", sketch_args.ip, "incoherence processing")->check(CLI::IsMember({"on", "off"}));
  sketch->add_option("--trial", sketch_args.trial, "trial index for seed derivation");

  auto *bound = app.add_subcommand("bound-check", "evaluate the error bounds on rounded layers");
  add_common(bound, common, false);

  auto *run = app.add_subcommand("run", "run a configured comparison");
  add_common(run, common, false);

  VerifyArgs verify_args;
  auto *ver = app.add_subcommand("verify", "run the property suites");
  add_common(ver, common, false);
  ver->add_option("--suite", verify_args.suite, "oracle, snd, bounds, sketch, kl, ip, model or all");
  ver->add_flag("--negative-control", verify_args.negative_control,
                "corrupt the oracle's vec convention; the oracle suite must fail");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try
  {
    if (*round)
      return cmd_round(common, round_args);
    if (*sketch)
      return cmd_sketch(common, sketch_args);
    if (*bound)
      return cmd_bound_check(common);
    if (*run)
      return cmd_run(common);
    return cmd_verify(common, verify_args);
  }
  catch (const std::exception &e)
  {
    std::cerr << "yaqa: " << e.what() << '\n';
    return kInvalid;
  }
}
