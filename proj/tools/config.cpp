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

#include "config.hpp"

#include "yaqa/error.hpp"

#include <fstream>
#include <set>

namespace yaqa::cli
{

namespace
{

[[noreturn]] void invalid(const std::string &path, const std::string &why)
{
  throw Error(ErrorKind::InvalidArgument, path + ": " + why);
}

void require_object(const json &j, const std::string &path, const std::set<std::string> &allowed)
{
  if (!j.is_object())
    invalid(path.empty() ? "<root>" : path, "expected an object");
  for (const auto &[key, _] : j.items())
    if (!allowed.count(key))
      invalid(path.empty() ? key : path + "." + key, "unknown field");
}

std::string join(const std::string &path, const std::string &key) { return path.empty() ? key : path + "." + key; }

std::uint64_t as_u64(const json &j, const std::string &path)
{
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    invalid(path, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

std::size_t as_size(const json &j, const std::string &path) { return static_cast<std::size_t>(as_u64(j, path)); }

double as_double(const json &j, const std::string &path)
{
  if (!j.is_number())
    invalid(path, "expected a number");
  return j.get<double>();
}

int as_int(const json &j, const std::string &path)
{
  if (!j.is_number_integer())
    invalid(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json &j, const std::string &path)
{
  if (!j.is_string())
    invalid(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const json &j, const std::string &path)
{
  if (!j.is_boolean())
    invalid(path, "expected true or false");
  return j.get<bool>();
}

const json &array_at(const json &j, const std::string &path)
{
  if (!j.is_array())
    invalid(path, "expected an array");
  return j;
}

} // namespace

QuantizerSpec parse_quantizer(const json &j, const std::string &path)
{
  require_object(j, path, {"bits", "mode", "scale", "block"});
  QuantizerSpec q;
  if (j.contains("bits"))
    q.bits = as_int(j["bits"], join(path, "bits"));
  if (j.contains("mode"))
  {
    const auto m = as_string(j["mode"], join(path, "mode"));
    if (m == "nearest")
      q.mode = RoundingMode::Nearest;
    else if (m == "stochastic")
      q.mode = RoundingMode::Stochastic;
    else
      invalid(join(path, "mode"), "expected \"nearest\" or \"stochastic\"");
  }
  if (j.contains("scale"))
  {
    const std::string sp = join(path, "scale");
    const json &s = j["scale"];
    if (!s.is_object() || s.size() != 1)
      invalid(sp, "expected {\"groupwise\": <len>} or {\"fixed\": <step>}");
    if (s.contains("groupwise"))
      q.scale = GroupwiseScale{as_size(s["groupwise"], sp + ".groupwise")};
    else if (s.contains("fixed"))
      q.scale = FixedScale{as_double(s["fixed"], sp + ".fixed")};
    else
      invalid(sp, "expected {\"groupwise\": <len>} or {\"fixed\": <step>}");
  }
  if (j.contains("block"))
  {
    const std::string bp = join(path, "block");
    const json &b = array_at(j["block"], bp);
    if (b.size() != 2)
      invalid(bp, "expected [g_x, g_y]");
    q.block_rows = as_size(b[0], bp + "[0]");
    q.block_cols = as_size(b[1], bp + "[1]");
  }
  try
  {
    q.validate();
  }
  catch (const Error &e)
  {
    invalid(path, e.what());
  }
  return q;
}

json to_json(const QuantizerSpec &q)
{
  json j;
  j["bits"] = q.bits;
  j["mode"] = q.mode == RoundingMode::Nearest ? "nearest" : "stochastic";
  if (const auto *g = std::get_if<GroupwiseScale>(&q.scale))
    j["scale"] = {{"groupwise", g->group_len}};
  else
    j["scale"] = {{"fixed", std::get<FixedScale>(q.scale).step}};
  j["block"] = {q.block_rows, q.block_cols};
  return j;
}

ExperimentConfig parse_experiment_config(const json &j)
{
  require_object(j, "", {"model", "data", "layer", "sketch", "quantizer", "bits", "incoherence", "algorithms",
                         "trials", "seed", "reg", "output"});
  ExperimentConfig c;
  if (j.contains("model"))
  {
    const json &m = j["model"];
    require_object(m, "model", {"dims", "seed", "weight_scale", "mix"});
    if (m.contains("dims"))
    {
      c.model.dims.clear();
      const json &d = array_at(m["dims"], "model.dims");
      for (std::size_t i = 0; i < d.size(); ++i)
        c.model.dims.push_back(as_size(d[i], "model.dims[" + std::to_string(i) + "]"));
    }
    if (m.contains("seed"))
      c.model.seed = as_u64(m["seed"], "model.seed");
    if (m.contains("weight_scale"))
      c.model.weight_scale = as_double(m["weight_scale"], "model.weight_scale");
    if (m.contains("mix"))
      c.model.mix = as_double(m["mix"], "model.mix");
  }
  if (!c.model.dims.empty())
    c.data.dim = c.model.dims.front();
  if (j.contains("data"))
  {
    const json &d = j["data"];
    require_object(d, "data", {"sequences", "seq_len", "correlation", "seed", "eval_sequences"});
    if (d.contains("sequences"))
      c.data.sequences = as_size(d["sequences"], "data.sequences");
    if (d.contains("seq_len"))
      c.data.seq_len = as_size(d["seq_len"], "data.seq_len");
    if (d.contains("correlation"))
      c.data.correlation = as_double(d["correlation"], "data.correlation");
    if (d.contains("seed"))
      c.data.seed = as_u64(d["seed"], "data.seed");
    if (d.contains("eval_sequences"))
      c.eval_sequences = as_size(d["eval_sequences"], "data.eval_sequences");
  }
  if (j.contains("layer"))
    c.layer = as_size(j["layer"], "layer");
  if (j.contains("sketch"))
  {
    const json &s = j["sketch"];
    require_object(s, "sketch", {"method", "iters", "labels", "samples"});
    if (s.contains("method"))
    {
      try
      {
        c.sketch.method = sketch_method_from_string(as_string(s["method"], "sketch.method"));
      }
      catch (const Error &e)
      {
        invalid("sketch.method", "expected one of ldlq, a, b, powerfull, vanloan");
      }
    }
    if (s.contains("iters"))
      c.sketch.iters = as_size(s["iters"], "sketch.iters");
    if (s.contains("labels"))
    {
      const auto l = as_string(s["labels"], "sketch.labels");
      if (l == "exact")
        c.sketch.labels = LabelMode::Exact;
      else if (l == "montecarlo")
        c.sketch.labels = LabelMode::MonteCarlo;
      else
        invalid("sketch.labels", "expected \"exact\" or \"montecarlo\"");
    }
    if (s.contains("samples"))
      c.sketch.samples = as_size(s["samples"], "sketch.samples");
  }
  if (j.contains("quantizer"))
    c.quantizer = parse_quantizer(j["quantizer"]);
  if (j.contains("bits"))
  {
    c.bits.clear();
    const json &b = array_at(j["bits"], "bits");
    for (std::size_t i = 0; i < b.size(); ++i)
      c.bits.push_back(as_int(b[i], "bits[" + std::to_string(i) + "]"));
  }
  if (j.contains("incoherence"))
    c.incoherence = as_bool(j["incoherence"], "incoherence");
  if (j.contains("algorithms"))
  {
    c.algorithms.clear();
    const json &a = array_at(j["algorithms"], "algorithms");
    for (std::size_t i = 0; i < a.size(); ++i)
      c.algorithms.push_back(as_string(a[i], "algorithms[" + std::to_string(i) + "]"));
  }
  if (j.contains("trials"))
    c.trials = as_size(j["trials"], "trials");
  if (j.contains("seed"))
    c.seed = as_u64(j["seed"], "seed");
  if (j.contains("reg"))
    c.reg = as_double(j["reg"], "reg");
  if (j.contains("output"))
    c.output = as_string(j["output"], "output");
  c.validate();
  return c;
}

json to_json(const ExperimentConfig &c)
{
  json j;
  j["model"] = {{"dims", c.model.dims},
                {"seed", c.model.seed},
                {"weight_scale", c.model.weight_scale},
                {"mix", c.model.mix}};
  j["data"] = {{"sequences", c.data.sequences},
               {"seq_len", c.data.seq_len},
               {"correlation", c.data.correlation},
               {"seed", c.data.seed},
               {"eval_sequences", c.eval_sequences}};
  j["layer"] = c.layer;
  j["sketch"] = {{"method", to_string(c.sketch.method)},
                 {"iters", c.sketch.iters},
                 {"labels", c.sketch.labels == LabelMode::Exact ? "exact" : "montecarlo"},
                 {"samples", c.sketch.samples}};
  j["quantizer"] = to_json(c.quantizer);
  j["bits"] = c.bits;
  j["incoherence"] = c.incoherence;
  j["algorithms"] = c.algorithms;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["reg"] = c.reg;
  j["output"] = c.output;
  return j;
}

json load_json(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open " + path);
  try
  {
    return json::parse(in);
  }
  catch (const json::parse_error &e)
  {
    throw Error(ErrorKind::InvalidArgument, path + ": " + e.what());
  }
}

} // namespace yaqa::cli
