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

#include "yaqa/model.hpp"
#include "yaqa/random.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace yaqa
{

namespace
{

// Row-wise log-softmax.
Matrix log_softmax(const Matrix &logits)
{
  Matrix out(logits.rows(), logits.cols());
  for (std::size_t t = 0; t < logits.rows(); ++t)
  {
    const auto r = logits.row(t);
    const double mx = *std::max_element(r.begin(), r.end());
    double s = 0.0;
    for (double v : r)
      s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    for (std::size_t c = 0; c < r.size(); ++c)
      out(t, c) = r[c] - lse;
  }
  return out;
}

Matrix softmax(const Matrix &logits)
{
  Matrix p = log_softmax(logits);
  for (double &v : p.data())
    v = std::exp(v);
  return p;
}

void check_layer(const ToyModel &model, std::size_t layer)
{
  if (layer >= model.layers())
  {
    std::ostringstream ss;
    ss << "layer " << layer << " out of range (model has " << model.layers() << ")";
    throw Error(ErrorKind::ShapeMismatch, ss.str());
  }
}

std::size_t sample_class(std::span<const double> p, double u)
{
  double acc = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c)
  {
    acc += p[c];
    if (u < acc)
      return c;
  }
  return p.size() - 1;
}

} // namespace

ToyModel ToyModel::random(const std::vector<std::size_t> &dims, std::uint64_t seed, double scale, double mix)
{
  if (dims.size() < 2)
    throw Error(ErrorKind::InvalidArgument, "a model needs at least input and class dims");
  Rng rng(seed);
  ToyModel m;
  m.mix = mix;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l)
    m.weights.push_back(rng.gaussian(dims[l + 1], dims[l], scale / std::sqrt(static_cast<double>(dims[l]))));
  m.validate();
  return m;
}

void ToyModel::validate() const
{
  if (weights.empty())
    throw Error(ErrorKind::InvalidArgument, "model has no layers");
  for (std::size_t l = 0; l + 1 < weights.size(); ++l)
    if (weights[l].rows() != weights[l + 1].cols())
      throw Error(ErrorKind::ShapeMismatch, "layer shapes do not compose");
  if (classes() < 2)
    throw Error(ErrorKind::InvalidArgument, "need at least two classes");
  if (!(mix >= 0.0 && mix <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "mix must lie in [0, 1]");
}

ToyModel ToyModel::with_layer(std::size_t l, const Matrix &w) const
{
  check_layer(*this, l);
  if (w.rows() != weights[l].rows() || w.cols() != weights[l].cols())
    throw Error(ErrorKind::ShapeMismatch, "replacement layer has the wrong shape");
  ToyModel out = *this;
  out.weights[l] = w;
  return out;
}

std::size_t Dataset::tokens() const
{
  std::size_t t = 0;
  for (const auto &s : sequences)
    t += s.rows();
  return t;
}

Dataset make_dataset(const DataSpec &spec)
{
  if (spec.sequences == 0 || spec.seq_len == 0 || spec.dim == 0)
    throw Error(ErrorKind::EmptyData, "dataset would be empty");
  if (!(spec.correlation >= 0.0 && spec.correlation <= 1.0))
    throw Error(ErrorKind::InvalidArgument, "correlation must lie in [0, 1]");
  Rng rng(spec.seed);
  const std::size_t d = spec.dim;
  Matrix mixing = rng.gaussian(d, d, 1.0 / std::sqrt(static_cast<double>(d)));
  for (std::size_t i = 0; i < d; ++i)
    mixing(i, i) += 0.3;
  const Matrix mt = mixing.transpose();
  const double a = std::sqrt(spec.correlation), b = std::sqrt(1.0 - spec.correlation);
  if (spec.split != 0)
    rng = Rng(derive_seed(spec.seed, spec.split));

  Dataset out;
  out.seed = spec.seed;
  for (std::size_t s = 0; s < spec.sequences; ++s)
  {
    const auto z = rng.gaussian_vector(d);
    Matrix latent(spec.seq_len, d);
    for (std::size_t t = 0; t < spec.seq_len; ++t)
      for (std::size_t j = 0; j < d; ++j)
        latent(t, j) = a * z[j] + b * rng.normal();
    out.sequences.push_back(latent * mt);
  }
  return out;
}

Forward forward(const ToyModel &model, const Matrix &x)
{
  if (x.cols() != model.input_dim())
    throw Error(ErrorKind::ShapeMismatch, "input width does not match the first layer");
  Forward f;
  Matrix a = x;
  const std::size_t T = x.rows();
  for (std::size_t l = 0; l < model.layers(); ++l)
  {
    f.inputs.push_back(a);
    Matrix y = a * model.weights[l].transpose();
    if (l + 1 == model.layers())
    {
      f.logits = std::move(y);
      break;
    }
    for (double &v : y.data())
      v = std::tanh(v);
    f.hidden.push_back(y);
    if (l == 0 && model.mix != 0.0)
    {
      std::vector<double> mean(y.cols(), 0.0);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < y.cols(); ++j)
          mean[j] += y(t, j) / static_cast<double>(T);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < y.cols(); ++j)
          y(t, j) = (1.0 - model.mix) * y(t, j) + model.mix * mean[j];
    }
    a = std::move(y);
  }
  f.probs = softmax(f.logits);
  return f;
}

Matrix output_grad(const ToyModel &model, const Forward &f, std::size_t layer, const Matrix &dlogits)
{
  check_layer(model, layer);
  Matrix d = dlogits;
  const std::size_t T = d.rows();
  for (std::size_t l = model.layers() - 1; l > layer; --l)
  {
    Matrix da = d * model.weights[l]; // dL/d(input of layer l)
    if (l - 1 == 0 && model.mix != 0.0)
    {
      std::vector<double> mean(da.cols(), 0.0);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < da.cols(); ++j)
          mean[j] += da(t, j) / static_cast<double>(T);
      for (std::size_t t = 0; t < T; ++t)
        for (std::size_t j = 0; j < da.cols(); ++j)
          da(t, j) = (1.0 - model.mix) * da(t, j) + model.mix * mean[j];
    }
    const Matrix &h = f.hidden[l - 1];
    for (std::size_t i = 0; i < da.size(); ++i)
      da.data()[i] *= 1.0 - h.data()[i] * h.data()[i];
    d = std::move(da);
  }
  return d;
}

double cross_entropy(const ToyModel &model, const Matrix &x, const std::vector<std::size_t> &labels)
{
  const auto f = forward(model, x);
  if (labels.size() != x.rows())
    throw Error(ErrorKind::ShapeMismatch, "one label per position expected");
  const Matrix lp = log_softmax(f.logits);
  double s = 0.0;
  for (std::size_t t = 0; t < labels.size(); ++t)
  {
    if (labels[t] >= model.classes())
      throw Error(ErrorKind::ShapeMismatch, "label out of range");
    s -= lp(t, labels[t]);
  }
  return s;
}

Matrix layer_grad(const ToyModel &model, std::size_t layer, const Matrix &x, const std::vector<std::size_t> &labels)
{
  check_layer(model, layer);
  if (labels.size() != x.rows())
    throw Error(ErrorKind::ShapeMismatch, "one label per position expected");
  const auto f = forward(model, x);
  Matrix dl = f.probs;
  for (std::size_t t = 0; t < labels.size(); ++t)
  {
    if (labels[t] >= model.classes())
      throw Error(ErrorKind::ShapeMismatch, "label out of range");
    dl(t, labels[t]) -= 1.0;
  }
  return matmul_tn(output_grad(model, f, layer, dl), f.inputs[layer]);
}

void for_each_gradient(const ToyModel &model, std::size_t layer, const Dataset &data, const GradientSource &src,
                       const std::function<void(double, const Matrix &, const Matrix &)> &visit)
{
  check_layer(model, layer);
  const std::size_t tokens = data.tokens();
  if (tokens == 0)
    throw Error(ErrorKind::EmptyData, "no tokens");
  const std::size_t k = model.classes();
  const double inv_tokens = 1.0 / static_cast<double>(tokens);

  for (std::size_t s = 0; s < data.sequences.size(); ++s)
  {
    const auto f = forward(model, data.sequences[s]);
    const Matrix &x = f.inputs[layer];
    const std::size_t T = x.rows();
    if (src.mode == LabelMode::Exact)
    {
      for (std::size_t pos = 0; pos < T; ++pos)
        for (std::size_t c = 0; c < k; ++c)
        {
          const double w = f.probs(pos, c);
          if (w == 0.0)
            continue;
          Matrix dl(T, k);
          for (std::size_t j = 0; j < k; ++j)
            dl(pos, j) = f.probs(pos, j);
          dl(pos, c) -= 1.0;
          visit(w * inv_tokens, output_grad(model, f, layer, dl), x);
        }
    }
    else
    {
      if (src.samples == 0)
        throw Error(ErrorKind::InvalidArgument, "Monte-Carlo mode needs samples >= 1");
      const double w = inv_tokens / static_cast<double>(src.samples);
      for (std::size_t draw = 0; draw < src.samples; ++draw)
      {
        Rng rng(derive_seed(src.seed, s, draw));
        Matrix dl = f.probs;
        for (std::size_t pos = 0; pos < T; ++pos)
          dl(pos, sample_class(f.probs.row(pos), rng.uniform())) -= 1.0;
        visit(w, output_grad(model, f, layer, dl), x);
      }
    }
  }
}

FisherEstimate true_layer_hessian(const ToyModel &model, std::size_t layer, const Dataset &data,
                                  const GradientSource &src)
{
  check_layer(model, layer);
  const std::size_t mn = model.weights[layer].size();
  if (mn > 4096)
    throw Error(ErrorKind::TooLarge, "dense Fisher is limited to mn <= 4096");
  Matrix h(mn, mn);
  for_each_gradient(model, layer, data, src, [&](double w, const Matrix &dy, const Matrix &x) {
    const Matrix g = matmul_tn(dy, x);
    const auto &v = g.data();
    for (std::size_t a = 0; a < mn; ++a)
    {
      if (v[a] == 0.0)
        continue;
      const double wa = w * v[a];
      double *row = &h(a, 0);
      for (std::size_t b = a; b < mn; ++b)
        row[b] += wa * v[b];
    }
  });
  for (std::size_t a = 0; a < mn; ++a)
    for (std::size_t b = 0; b < a; ++b)
      h(a, b) = h(b, a);
  FisherEstimate out{SymMatrix(h), src.mode == LabelMode::Exact ? "exact-enumeration" : "monte-carlo",
                     src.mode == LabelMode::Exact ? 0 : src.samples};
  return out;
}

SymMatrix layer_input_hessian(const ToyModel &model, std::size_t layer, const Dataset &data)
{
  check_layer(model, layer);
  const std::size_t tokens = data.tokens();
  if (tokens == 0)
    throw Error(ErrorKind::EmptyData, "no tokens");
  const std::size_t n = model.weights[layer].cols();
  Matrix h(n, n);
  for (const auto &seq : data.sequences)
  {
    const auto f = forward(model, seq);
    h += matmul_tn(f.inputs[layer], f.inputs[layer]);
  }
  h *= 1.0 / static_cast<double>(tokens);
  return SymMatrix(h);
}

double kl_to_reference(const ToyModel &ref, const ToyModel &q, const Dataset &data)
{
  if (ref.layers() != q.layers())
    throw Error(ErrorKind::ShapeMismatch, "models differ in depth");
  for (std::size_t l = 0; l < ref.layers(); ++l)
    if (ref.weights[l].rows() != q.weights[l].rows() || ref.weights[l].cols() != q.weights[l].cols())
      throw Error(ErrorKind::ShapeMismatch, "models differ in layer shapes");
  const std::size_t tokens = data.tokens();
  if (tokens == 0)
    throw Error(ErrorKind::EmptyData, "no tokens");
  double total = 0.0;
  for (const auto &seq : data.sequences)
  {
    const Matrix lp = log_softmax(forward(ref, seq).logits);
    const Matrix lq = log_softmax(forward(q, seq).logits);
    for (std::size_t i = 0; i < lp.size(); ++i)
    {
      const double p = std::exp(lp.data()[i]);
      if (p > 0.0)
        total += p * (lp.data()[i] - lq.data()[i]);
    }
  }
  return std::max(0.0, total / static_cast<double>(tokens));
}

double second_order_error(const ToyModel &ref, std::size_t layer, const Matrix &w_hat, const FisherEstimate &h)
{
  check_layer(ref, layer);
  const Matrix &w = ref.weights[layer];
  if (w_hat.rows() != w.rows() || w_hat.cols() != w.cols() || h.H.dim() != w.size())
    throw Error(ErrorKind::ShapeMismatch, "second_order_error: inconsistent shapes");
  return std::max(0.0, quad_form(vec(w - w_hat), h.H.matrix()));
}

} // namespace yaqa
