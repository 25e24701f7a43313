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

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wat/autograd.hpp"
#include "wat/corpus.hpp"
#include "wat/hash.hpp"
#include "wat/tensor.hpp"

namespace wat {

enum class ModelKind { transformer = 0, lstm = 1, rnn = 2 };
inline constexpr std::array<ModelKind, 3> kAllModelKinds = {
    ModelKind::transformer, ModelKind::lstm, ModelKind::rnn};

std::string_view model_kind_name(ModelKind k);
std::optional<ModelKind> parse_model_kind(std::string_view s);

// Readout of the recurrent models: final hidden state or mean over time.
enum class RecurrentReadout { last = 0, mean = 1 };

struct ModelConfig {
  ModelKind kind = ModelKind::transformer;
  std::size_t input_dim = 0;
  std::size_t model_dim = 64;
  std::size_t heads = 4;
  std::size_t layers = 2;  // transformer encoder blocks
  std::size_t ffn_dim = 128;
  double dropout = 0.5;
  std::size_t num_classes = kNumConditions;
  std::size_t max_len = 50;
  std::uint64_t seed = 0;
  bool positional_encoding = true;
  RecurrentReadout readout = RecurrentReadout::last;

  void validate() const;
  std::string to_json() const;
  static ModelConfig from_json(std::string_view text);
  std::string digest() const;

  bool operator==(const ModelConfig&) const = default;
};

// Paper-sized defaults for a given classifier kind and input width.
ModelConfig default_model_config(ModelKind kind, std::size_t input_dim,
                                 std::uint64_t seed = 0);

// Base class for the sequence classifiers. Parameters have stable addresses
// for the lifetime of the model.
class SequenceClassifier {
 public:
  explicit SequenceClassifier(ModelConfig config);
  virtual ~SequenceClassifier() = default;
  SequenceClassifier(const SequenceClassifier&) = delete;
  SequenceClassifier& operator=(const SequenceClassifier&) = delete;

  const ModelConfig& config() const { return config_; }
  std::vector<Parameter*> parameters();
  std::vector<const Parameter*> parameters() const;
  Parameter& parameter(std::string_view name);
  std::size_t parameter_count() const;

  // Records the forward pass on \p g for an input [T, input_dim] and
  // returns logits [1, num_classes]. Dropout is active only when train is
  // true; rng drives the masks.
  virtual Var forward(Graph& g, const Tensor& sequence, bool train, Rng& rng) = 0;

  // Eval-mode logits.
  std::vector<double> logits(const Tensor& sequence);

 protected:
  Parameter& add_weight(std::string name, std::size_t out, std::size_t in, Rng& rng);
  Parameter& add_bias(std::string name, std::size_t n, double value = 0.0);
  void check_input(const Tensor& sequence) const;

  ModelConfig config_;

 private:
  std::deque<Parameter> params_;
};

class TransformerClassifier final : public SequenceClassifier {
 public:
  explicit TransformerClassifier(ModelConfig config);
  Var forward(Graph& g, const Tensor& sequence, bool train, Rng& rng) override;

  // Sinusoidal encoding table [len, dim].
  static Tensor positional_encoding(std::size_t len, std::size_t dim);

 private:
  struct Block {
    Parameter *wq, *bq, *wk, *bk, *wv, *bv, *wo, *bo;
    Parameter *ln1_g, *ln1_b, *ff1_w, *ff1_b, *ff2_w, *ff2_b, *ln2_g, *ln2_b;
  };
  Parameter *in_w_, *in_b_, *out_w_, *out_b_;
  std::vector<Block> blocks_;
  Tensor pe_;
};

class LstmClassifier final : public SequenceClassifier {
 public:
  explicit LstmClassifier(ModelConfig config);
  Var forward(Graph& g, const Tensor& sequence, bool train, Rng& rng) override;

 private:
  Parameter *w_ih_, *w_hh_, *b_, *out_w_, *out_b_;
};

class RnnClassifier final : public SequenceClassifier {
 public:
  explicit RnnClassifier(ModelConfig config);
  Var forward(Graph& g, const Tensor& sequence, bool train, Rng& rng) override;

 private:
  Parameter *w_ih_, *w_hh_, *b_, *out_w_, *out_b_;
};

std::unique_ptr<SequenceClassifier> make_model(const ModelConfig& config);

struct Prediction {
  Condition condition = Condition::anxiety;
  std::vector<double> probabilities;
};

// Argmax of softmax(logits); ties go to the lowest class code.
Prediction predict_from_logits(std::span<const double> logits);
Prediction predict(SequenceClassifier& model, const Tensor& sequence);

}  // namespace wat
