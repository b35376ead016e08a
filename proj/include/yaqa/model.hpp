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

// Toy classifier: linear layers with tanh in between and a softmax head.
// Inputs come in sequences (T x d matrices, one token per row). With a
// nonzero `mix`, the first hidden layer averages information across the
// tokens of a sequence, which makes per-token gradients correlated.

#ifndef YAQA_MODEL_HPP
#define YAQA_MODEL_HPP

#include "yaqa/kron_sketch.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace yaqa
{

struct ToyModel
{
  std::vector<Matrix> weights; // layer l maps dims[l] -> dims[l + 1]; W_l is out x in
  double mix = 0.0;            // h <- (1 - mix) h + mix * mean_t h after the first tanh

  /// dims = {input, hidden..., classes}; entries N(0, scale^2 / fan_in).
  static ToyModel random(const std::vector<std::size_t> &dims, std::uint64_t seed, double scale = 1.0,
                         double mix = 0.0);

  std::size_t layers() const noexcept { return weights.size(); }
  std::size_t input_dim() const { return weights.front().cols(); }
  std::size_t classes() const { return weights.back().rows(); }
  void validate() const;

  /// Copy with layer `l` replaced.
  ToyModel with_layer(std::size_t l, const Matrix &w) const;
};

struct DataSpec
{
  std::size_t dim = 8;
  std::size_t sequences = 64;
  std::size_t seq_len = 8;
  double correlation = 0.5; // share of variance from the per-sequence latent
  std::uint64_t seed = 0;  // fixes the mixing matrix
  std::uint64_t split = 0; // independent draws under the same mixing matrix
};

struct Dataset
{
  std::vector<Matrix> sequences; // each seq_len x dim
  std::uint64_t seed = 0;

  std::size_t tokens() const;
};

/// x_t = M (sqrt(rho) z + sqrt(1 - rho) e_t) with z shared by the sequence
/// and M a fixed per-seed mixing matrix.
Dataset make_dataset(const DataSpec &spec);

struct Forward
{
  std::vector<Matrix> inputs; // input to each layer, T x n_l
  std::vector<Matrix> hidden; // tanh outputs before mixing, T x m_l (not for the head)
  Matrix logits;              // T x k
  Matrix probs;               // T x k
};

Forward forward(const ToyModel &model, const Matrix &x);

/// Backpropagates dL/dlogits (T x k) to dL/dy_l (T x m_l) for the output y_l
/// of layer `l`.
Matrix output_grad(const ToyModel &model, const Forward &f, std::size_t layer, const Matrix &dlogits);

/// Sum over positions of the cross entropy against `labels` (one per row).
double cross_entropy(const ToyModel &model, const Matrix &x, const std::vector<std::size_t> &labels);

/// Exact gradient of cross_entropy w.r.t. W_layer.
Matrix layer_grad(const ToyModel &model, std::size_t layer, const Matrix &x, const std::vector<std::size_t> &labels);

enum class LabelMode
{
  Exact,      // enumerate classes weighted by the model's probabilities
  MonteCarlo, // sample labels from the model's output distribution
};

struct GradientSource
{
  LabelMode mode = LabelMode::Exact;
  std::size_t samples = 1; // Monte-Carlo draws per sequence
  std::uint64_t seed = 0;
};

/// Calls `visit(weight, dy, x)` for every gradient contribution of `layer`:
/// dy is T x m (dL/dy per token), x is T x n (layer input), and the sequence
/// gradient is dy^T x. Weights sum to (#positions or 1 per draw) / tokens, so
/// weighted sums are expectations per token.
void for_each_gradient(const ToyModel &model, std::size_t layer, const Dataset &data, const GradientSource &src,
                       const std::function<void(double, const Matrix &, const Matrix &)> &visit);

/// E[vec(G) vec(G)^T] at the model's own weights. mn <= 4096.
FisherEstimate true_layer_hessian(const ToyModel &model, std::size_t layer, const Dataset &data,
                                  const GradientSource &src = {});

/// Per-token second moment of the layer input, E[x x^T] (the LDLQ Hessian).
SymMatrix layer_input_hessian(const ToyModel &model, std::size_t layer, const Dataset &data);

/// Mean over tokens of KL(p_ref || p_q).
double kl_to_reference(const ToyModel &ref, const ToyModel &q, const Dataset &data);

/// vec(D) H vec(D)^T with D = W_layer - W_hat. The second-order KL term is half of it.
double second_order_error(const ToyModel &ref, std::size_t layer, const Matrix &w_hat, const FisherEstimate &h);

} // namespace yaqa

#endif // YAQA_MODEL_HPP
