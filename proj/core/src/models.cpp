/*
 * Copyright 2026 The WAT Authors
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

#include "wat/models.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "wat/error.hpp"

namespace wat {

using nlohmann::json;

std::string_view model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::transformer: return "transformer";
    case ModelKind::lstm: return "lstm";
    case ModelKind::rnn: return "rnn";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view s) {
  for (auto k : kAllModelKinds) {
    if (model_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

void ModelConfig::validate() const {
  if (input_dim == 0) throw ConfigError("model input_dim must be > 0");
  if (model_dim == 0) throw ConfigError("model_dim must be > 0");
  if (num_classes != kNumConditions) {
    throw ConfigError("num_classes must be " + std::to_string(kNumConditions));
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0, 1)");
  if (kind == ModelKind::transformer) {
    if (heads == 0 || model_dim % heads != 0) {
      throw ConfigError("model_dim " + std::to_string(model_dim) +
                        " is not divisible by heads " + std::to_string(heads));
    }
    if (layers == 0 || ffn_dim == 0 || max_len == 0) {
      throw ConfigError("transformer needs layers, ffn_dim and max_len > 0");
    }
  }
}

std::string ModelConfig::to_json() const {
  json j;
  j["kind"] = model_kind_name(kind);
  j["input_dim"] = input_dim;
  j["model_dim"] = model_dim;
  j["heads"] = heads;
  j["layers"] = layers;
  j["ffn_dim"] = ffn_dim;
  j["dropout"] = dropout;
  j["num_classes"] = num_classes;
  j["max_len"] = max_len;
  j["seed"] = seed;
  j["positional_encoding"] = positional_encoding;
  j["readout"] = readout == RecurrentReadout::last ? "last" : "mean";
  return j.dump();
}

ModelConfig ModelConfig::from_json(std::string_view text) {
  ModelConfig c;
  try {
    const json j = json::parse(text);
    const auto kind = parse_model_kind(j.at("kind").get<std::string>());
    if (!kind) throw ConfigError("unknown model kind in config");
    c.kind = *kind;
    c.input_dim = j.at("input_dim").get<std::size_t>();
    c.model_dim = j.at("model_dim").get<std::size_t>();
    c.heads = j.at("heads").get<std::size_t>();
    c.layers = j.at("layers").get<std::size_t>();
    c.ffn_dim = j.at("ffn_dim").get<std::size_t>();
    c.dropout = j.at("dropout").get<double>();
    c.num_classes = j.at("num_classes").get<std::size_t>();
    c.max_len = j.at("max_len").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.positional_encoding = j.at("positional_encoding").get<bool>();
    c.readout = j.at("readout").get<std::string>() == "mean" ? RecurrentReadout::mean
                                                             : RecurrentReadout::last;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad model config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string ModelConfig::digest() const { return digest_hex(to_json()); }

ModelConfig default_model_config(ModelKind kind, std::size_t input_dim,
                                 std::uint64_t seed) {
  ModelConfig c;
  c.kind = kind;
  c.input_dim = input_dim;
  c.seed = seed;
  c.layers = kind == ModelKind::transformer ? 2 : 1;
  return c;
}

// ---------------------------------------------------------------------------

SequenceClassifier::SequenceClassifier(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
}

std::vector<Parameter*> SequenceClassifier::parameters() {
  std::vector<Parameter*> out;
  for (auto& p : params_) out.push_back(&p);
  return out;
}

std::vector<const Parameter*> SequenceClassifier::parameters() const {
  std::vector<const Parameter*> out;
  for (const auto& p : params_) out.push_back(&p);
  return out;
}

Parameter& SequenceClassifier::parameter(std::string_view name) {
  for (auto& p : params_) {
    if (p.name == name) return p;
  }
  throw ValidationError("no parameter named '" + std::string(name) + "'");
}

std::size_t SequenceClassifier::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.value.size();
  return n;
}

Parameter& SequenceClassifier::add_weight(std::string name, std::size_t out,
                                          std::size_t in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  std::uniform_real_distribution<double> dist(-bound, bound);
  Tensor w({out, in});
  for (double& v : w.values()) v = dist(rng);
  return params_.emplace_back(std::move(name), std::move(w));
}

Parameter& SequenceClassifier::add_bias(std::string name, std::size_t n, double value) {
  return params_.emplace_back(std::move(name), Tensor({n}, value));
}

void SequenceClassifier::check_input(const Tensor& sequence) const {
  if (sequence.rank() != 2 || sequence.cols() != config_.input_dim) {
    throw ShapeError(std::string(model_kind_name(config_.kind)) + ": expected input [T, " +
                     std::to_string(config_.input_dim) + "], got " +
                     shape_str(sequence.shape()));
  }
  if (sequence.shape()[0] == 0) {
    throw ShapeError(std::string(model_kind_name(config_.kind)) + ": empty input sequence");
  }
}

std::vector<double> SequenceClassifier::logits(const Tensor& sequence) {
  Graph g;
  Rng unused(0);
  Var out = forward(g, sequence, false, unused);
  return out.value().data();
}

// ---------------------------------------------------------------------------

Tensor TransformerClassifier::positional_encoding(std::size_t len, std::size_t dim) {
  Tensor pe({len, dim});
  for (std::size_t pos = 0; pos < len; ++pos) {
    for (std::size_t i = 0; i < dim; i += 2) {
      const double freq = std::pow(10000.0, -static_cast<double>(i) / dim);
      pe.at(pos, i) = std::sin(pos * freq);
      if (i + 1 < dim) pe.at(pos, i + 1) = std::cos(pos * freq);
    }
  }
  return pe;
}

TransformerClassifier::TransformerClassifier(ModelConfig config)
    : SequenceClassifier(std::move(config)) {
  const auto& c = config_;
  Rng rng(derive_seed(c.seed, "init"));
  in_w_ = &add_weight("input.weight", c.model_dim, c.input_dim, rng);
  in_b_ = &add_bias("input.bias", c.model_dim);
  for (std::size_t l = 0; l < c.layers; ++l) {
    const std::string p = "block" + std::to_string(l) + ".";
    Block b{};
    b.wq = &add_weight(p + "attn.q.weight", c.model_dim, c.model_dim, rng);
    b.bq = &add_bias(p + "attn.q.bias", c.model_dim);
    b.wk = &add_weight(p + "attn.k.weight", c.model_dim, c.model_dim, rng);
    b.bk = &add_bias(p + "attn.k.bias", c.model_dim);
    b.wv = &add_weight(p + "attn.v.weight", c.model_dim, c.model_dim, rng);
    b.bv = &add_bias(p + "attn.v.bias", c.model_dim);
    b.wo = &add_weight(p + "attn.out.weight", c.model_dim, c.model_dim, rng);
    b.bo = &add_bias(p + "attn.out.bias", c.model_dim);
    b.ln1_g = &add_bias(p + "norm1.gain", c.model_dim, 1.0);
    b.ln1_b = &add_bias(p + "norm1.bias", c.model_dim);
    b.ff1_w = &add_weight(p + "ffn1.weight", c.ffn_dim, c.model_dim, rng);
    b.ff1_b = &add_bias(p + "ffn1.bias", c.ffn_dim);
    b.ff2_w = &add_weight(p + "ffn2.weight", c.model_dim, c.ffn_dim, rng);
    b.ff2_b = &add_bias(p + "ffn2.bias", c.model_dim);
    b.ln2_g = &add_bias(p + "norm2.gain", c.model_dim, 1.0);
    b.ln2_b = &add_bias(p + "norm2.bias", c.model_dim);
    blocks_.push_back(b);
  }
  out_w_ = &add_weight("classifier.weight", c.num_classes, c.model_dim, rng);
  out_b_ = &add_bias("classifier.bias", c.num_classes);
  pe_ = positional_encoding(c.max_len, c.model_dim);
}

Var TransformerClassifier::forward(Graph& g, const Tensor& sequence, bool train, Rng& rng) {
  check_input(sequence);
  const auto& c = config_;
  const std::size_t len = sequence.shape()[0];
  if (len > c.max_len) {
    throw ShapeError("transformer: sequence length " + std::to_string(len) +
                     " exceeds max_len " + std::to_string(c.max_len));
  }
  const std::size_t head_dim = c.model_dim / c.heads;
  const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Var h = linear(g.constant(sequence), g.param(*in_w_), g.param(*in_b_));
  h = scale(h, std::sqrt(static_cast<double>(c.model_dim)));
  if (c.positional_encoding) {
    Tensor pe({len, c.model_dim});
    std::copy_n(pe_.values().begin(), len * c.model_dim, pe.values().begin());
    h = add(h, g.constant(std::move(pe)));
  }
  h = dropout(h, c.dropout, train, rng);

  for (const Block& b : blocks_) {
    Var q = linear(h, g.param(*b.wq), g.param(*b.bq));
    Var k = linear(h, g.param(*b.wk), g.param(*b.bk));
    Var v = linear(h, g.param(*b.wv), g.param(*b.bv));
    Var heads;
    for (std::size_t hd = 0; hd < c.heads; ++hd) {
      const std::size_t lo = hd * head_dim, hi = lo + head_dim;
      Var qh = slice(q, lo, hi);
      Var kh = slice(k, lo, hi);
      Var vh = slice(v, lo, hi);
      Var attn = softmax(scale(matmul(qh, transpose(kh)), inv_sqrt));
      Var ctx = matmul(attn, vh);
      heads = hd == 0 ? ctx : concat(heads, ctx);
    }
    Var attn_out = linear(heads, g.param(*b.wo), g.param(*b.bo));
    attn_out = dropout(attn_out, c.dropout, train, rng);
    h = layer_norm(add(h, attn_out), g.param(*b.ln1_g), g.param(*b.ln1_b));

    Var ff = relu(linear(h, g.param(*b.ff1_w), g.param(*b.ff1_b)));
    ff = linear(ff, g.param(*b.ff2_w), g.param(*b.ff2_b));
    ff = dropout(ff, c.dropout, train, rng);
    h = layer_norm(add(h, ff), g.param(*b.ln2_g), g.param(*b.ln2_b));
  }
  return linear(mean_rows(h), g.param(*out_w_), g.param(*out_b_));
}

// ---------------------------------------------------------------------------

LstmClassifier::LstmClassifier(ModelConfig config) : SequenceClassifier(std::move(config)) {
  const auto& c = config_;
  Rng rng(derive_seed(c.seed, "init"));
  // Gate blocks in row order: input, forget, cell candidate, output.
  w_ih_ = &add_weight("lstm.w_ih", 4 * c.model_dim, c.input_dim, rng);
  w_hh_ = &add_weight("lstm.w_hh", 4 * c.model_dim, c.model_dim, rng);
  b_ = &add_bias("lstm.bias", 4 * c.model_dim);
  out_w_ = &add_weight("classifier.weight", c.num_classes, c.model_dim, rng);
  out_b_ = &add_bias("classifier.bias", c.num_classes);
}

Var LstmClassifier::forward(Graph& g, const Tensor& sequence, bool /*train*/, Rng& /*rng*/) {
  check_input(sequence);
  const std::size_t H = config_.model_dim;
  const std::size_t len = sequence.shape()[0];
  Var x_proj = linear(g.constant(sequence), g.param(*w_ih_), g.param(*b_));
  Var w_hh = g.param(*w_hh_);
  Var no_bias = g.constant(Tensor({4 * H}));
  Var h = g.constant(Tensor({1, H}));
  Var c = g.constant(Tensor({1, H}));
  Var h_sum;
  for (std::size_t t = 0; t < len; ++t) {
    Var gates = add(slice_rows(x_proj, t, t + 1), linear(h, w_hh, no_bias));
    Var i = sigmoid(slice(gates, 0, H));
    Var f = sigmoid(slice(gates, H, 2 * H));
    Var cand = tanh(slice(gates, 2 * H, 3 * H));
    Var o = sigmoid(slice(gates, 3 * H, 4 * H));
    c = add(mul(f, c), mul(i, cand));
    h = mul(o, tanh(c));
    if (config_.readout == RecurrentReadout::mean) h_sum = t == 0 ? h : add(h_sum, h);
  }
  Var readout = config_.readout == RecurrentReadout::mean
                    ? scale(h_sum, 1.0 / static_cast<double>(len))
                    : h;
  return linear(readout, g.param(*out_w_), g.param(*out_b_));
}

// ---------------------------------------------------------------------------

RnnClassifier::RnnClassifier(ModelConfig config) : SequenceClassifier(std::move(config)) {
  const auto& c = config_;
  Rng rng(derive_seed(c.seed, "init"));
  w_ih_ = &add_weight("rnn.w_ih", c.model_dim, c.input_dim, rng);
  w_hh_ = &add_weight("rnn.w_hh", c.model_dim, c.model_dim, rng);
  b_ = &add_bias("rnn.bias", c.model_dim);
  out_w_ = &add_weight("classifier.weight", c.num_classes, c.model_dim, rng);
  out_b_ = &add_bias("classifier.bias", c.num_classes);
}

Var RnnClassifier::forward(Graph& g, const Tensor& sequence, bool /*train*/, Rng& /*rng*/) {
  check_input(sequence);
  const std::size_t H = config_.model_dim;
  const std::size_t len = sequence.shape()[0];
  Var x_proj = linear(g.constant(sequence), g.param(*w_ih_), g.param(*b_));
  Var w_hh = g.param(*w_hh_);
  Var no_bias = g.constant(Tensor({H}));
  Var h = g.constant(Tensor({1, H}));
  Var h_sum;
  for (std::size_t t = 0; t < len; ++t) {
    h = tanh(add(slice_rows(x_proj, t, t + 1), linear(h, w_hh, no_bias)));
    if (config_.readout == RecurrentReadout::mean) h_sum = t == 0 ? h : add(h_sum, h);
  }
  Var readout = config_.readout == RecurrentReadout::mean
                    ? scale(h_sum, 1.0 / static_cast<double>(len))
                    : h;
  return linear(readout, g.param(*out_w_), g.param(*out_b_));
}

// ---------------------------------------------------------------------------

std::unique_ptr<SequenceClassifier> make_model(const ModelConfig& config) {
  switch (config.kind) {
    case ModelKind::transformer: return std::make_unique<TransformerClassifier>(config);
    case ModelKind::lstm: return std::make_unique<LstmClassifier>(config);
    case ModelKind::rnn: return std::make_unique<RnnClassifier>(config);
  }
  throw ConfigError("unknown model kind");
}

Prediction predict_from_logits(std::span<const double> logits) {
  if (logits.size() != kNumConditions) {
    throw ShapeError("predict: expected " + std::to_string(kNumConditions) + " logits, got " +
                     std::to_string(logits.size()));
  }
  Prediction p;
  p.probabilities = softmax_values(logits);
  std::size_t best = 0;
  for (std::size_t k = 1; k < logits.size(); ++k) {
    if (logits[k] > logits[best]) best = k;
  }
  p.condition = condition_from_code(best);
  return p;
}

Prediction predict(SequenceClassifier& model, const Tensor& sequence) {
  return predict_from_logits(model.logits(sequence));
}

}  // namespace wat
