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

// Config-driven comparison runs on the toy model: build the layer Hessian
// and a sketch, round the layer with each algorithm, score the result.

#ifndef YAQA_EXPERIMENT_HPP
#define YAQA_EXPERIMENT_HPP

#include "yaqa/model.hpp"
#include "yaqa/quantize.hpp"
#include "yaqa/sketch.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace yaqa
{

enum class SketchMethod
{
  Ldlq,
  A,
  B,
  PowerFull,
  VanLoan,
};

const char *to_string(SketchMethod m);
SketchMethod sketch_method_from_string(const std::string &s); // throws InvalidArgument

struct SketchConfig
{
  SketchMethod method = SketchMethod::VanLoan;
  std::size_t iters = 3;
  LabelMode labels = LabelMode::Exact;
  std::size_t samples = 16; // Monte-Carlo draws per sequence
};

struct ModelConfig
{
  std::vector<std::size_t> dims{16, 16, 16, 8};
  std::uint64_t seed = 1;
  double weight_scale = 1.5;
  double mix = 0.5;
};

inline QuantizerSpec default_experiment_quantizer()
{
  QuantizerSpec q;
  q.scale = GroupwiseScale{16};
  return q;
}

struct ExperimentConfig
{
  ModelConfig model;
  DataSpec data{16, 64, 8, 0.5, 2, 0};
  std::size_t eval_sequences = 64; // held-out split used for KL
  std::size_t layer = 0;
  SketchConfig sketch;
  QuantizerSpec quantizer = default_experiment_quantizer();
  std::vector<int> bits{2, 3, 4}; // overrides quantizer.bits, one row set each
  bool incoherence = false;
  std::vector<std::string> algorithms{"nearest", "ldlq", "yaqa"}; // also guidedquant:<g>
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double reg = 1e-4;
  std::string output = "out";

  void validate() const; // throws InvalidArgument with a field path
};

// Everything a trial needs that does not depend on the algorithm or bit width.
struct TrialSetup
{
  ToyModel model;
  Dataset data; // calibration split
  Dataset eval; // held-out split for KL
  FisherEstimate H;
  SymMatrix H1;
  KronSketch sketch; // the configured YAQA sketch
};

/// Model and data seeds derive from (config seed, trial). A non-null data
/// replaces the generated calibration split.
TrialSetup setup_trial(const ExperimentConfig &cfg, std::size_t trial, const Dataset *data = nullptr);
KronSketch build_sketch(const ExperimentConfig &cfg, const TrialSetup &t, std::size_t trial);

struct ResultRow
{
  std::size_t trial = 0;
  std::string algorithm;
  std::string sketch;
  int bits = 0;
  double proxy_error = 0.0;
  double true_second_order_error = 0.0;
  double kl = 0.0;
  double error_bound = 0.0; // NaN when the algorithm has no Kronecker sketch
  double cosine = 0.0;
  std::size_t sweeps = 0;
  double wall_time = 0.0; // seconds, rounding call only
};

/// Rows ordered by (trial, bits, algorithm) regardless of thread count.
std::vector<ResultRow> run_experiment(const ExperimentConfig &cfg, unsigned threads = 1);

/// Deterministic columns only; wall time goes to write_timings.
void write_results_csv(std::ostream &os, const std::vector<ResultRow> &rows);
void write_timings_csv(std::ostream &os, const std::vector<ResultRow> &rows);

struct SummaryEntry
{
  std::string algorithm;
  int bits = 0;
  double median_kl = 0.0;
  double mean_kl = 0.0;
  double median_proxy = 0.0;
  double median_true_error = 0.0;
  std::size_t rows = 0;
};

std::vector<SummaryEntry> summarize(const std::vector<ResultRow> &rows);

inline constexpr const char *kResultsSchema = "# yaqa results v1";

} // namespace yaqa

#endif // YAQA_EXPERIMENT_HPP
