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
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "wat/alliance.hpp"
#include "wat/checkpoint.hpp"
#include "wat/corpus.hpp"
#include "wat/features.hpp"
#include "wat/models.hpp"

namespace wat {

struct TrainConfig {
  std::size_t iterations = 50000;
  double lr = 0.001;
  double momentum = 0.9;
  std::size_t eval_every = 500;
  std::size_t max_pairs = kDefaultMaxPairs;
  std::uint64_t seed = 0;
  // Stop after this many consecutive evaluations without a new best
  // validation accuracy; 0 disables early stopping.
  std::size_t plateau_window = 0;
  // Balanced validation draws per evaluation.
  std::size_t val_samples = 200;
  // Global gradient-norm clipping threshold; 0 disables clipping.
  double clip_norm = 0.0;

  void validate() const;
  std::string canonical() const;
};

// Per-session turn embeddings and alliance trajectories, truncated to
// max_pairs. Built once per (provider, inventory) and shared read-only.
class ScoredCorpus {
 public:
  ScoredCorpus(const std::vector<Session>& sessions, const AllianceEncoder& encoder,
               std::size_t max_pairs = kDefaultMaxPairs);

  std::size_t embed_dim() const { return embed_dim_; }
  std::size_t inventory_size() const { return inventory_size_; }
  std::size_t max_pairs() const { return max_pairs_; }
  const std::vector<Session>& sessions() const { return sessions_; }

  const Session& session(std::string_view id) const;
  const SessionTrajectory& trajectory(std::string_view id) const;
  const SessionEmbeddings& embeddings(std::string_view id) const;

  FeatureConfig feature_config(FeatureType type, TurnSource source) const;

 private:
  std::size_t index_of(std::string_view id) const;

  std::vector<Session> sessions_;  // truncated copies
  std::vector<SessionEmbeddings> embeddings_;
  std::vector<SessionTrajectory> trajectories_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t embed_dim_ = 0;
  std::size_t inventory_size_ = 0;
  std::size_t max_pairs_ = 0;
};

// Assembled [T, width] feature matrices for every session under one
// FeatureConfig.
class FeatureStore {
 public:
  FeatureStore(const ScoredCorpus& corpus, const FeatureConfig& config);

  const FeatureConfig& config() const { return config_; }
  std::size_t width() const { return config_.feature_dim(); }
  const Tensor& sequence(std::string_view session_id) const;
  const std::vector<Session>& sessions() const { return corpus_.sessions(); }

 private:
  const ScoredCorpus& corpus_;
  FeatureConfig config_;
  std::unordered_map<std::string, Tensor> features_;
};

// ---- sampling ----

// Throws ConfigError naming the first empty class pool.
void require_nonempty_pools(const ClassPools& pools, std::string_view what);

// Uniform class, then uniform session within that class.
const Session& balanced_sample(const ClassPools& pools, Rng& rng);

// ---- evaluation ----

struct ConfusionMatrix {
  std::array<std::array<std::size_t, kNumConditions>, kNumConditions> counts{};

  std::size_t total() const;
  std::size_t trace() const;
  double accuracy() const;  // trace / total, in [0, 1]
  std::size_t row_sum(std::size_t true_class) const;
  std::size_t column_sum(std::size_t predicted_class) const;
  bool operator==(const ConfusionMatrix&) const = default;
};

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm,
                         std::string_view header = {});
ConfusionMatrix read_confusion_csv(std::istream& in);

enum class FailureReason { none = 0, single_class_collapse = 1, nan_divergence = 2, error = 3 };
std::string_view failure_reason_name(FailureReason r);

struct FailureFlag {
  bool failed = false;
  FailureReason reason = FailureReason::none;

  static FailureFlag ok() { return {}; }
  static FailureFlag of(FailureReason r) { return {r != FailureReason::none, r}; }
  bool operator==(const FailureFlag&) const = default;
};

// Collapse: more than 95% of predictions in one class and accuracy within
// 5 points of chance.
FailureFlag detect_collapse(const ConfusionMatrix& cm);

struct EvalResult {
  double accuracy_pct = 0.0;
  ConfusionMatrix confusion;
  FailureFlag failure;
};

// Predicts a session label; used to plug stub models into evaluate().
using SessionPredictor = std::function<std::size_t(const Session&)>;

// n_samples balanced draws with replacement; each distinct session is
// predicted once.
EvalResult evaluate(const SessionPredictor& predictor, const ClassPools& pools,
                    std::size_t n_samples, std::uint64_t seed);
EvalResult evaluate(SequenceClassifier& model, const FeatureStore& features,
                    const ClassPools& pools, std::size_t n_samples, std::uint64_t seed);

// ---- training ----

struct TrainLogRow {
  std::size_t iteration = 0;
  double loss = 0.0;          // mean training loss since the previous row
  double val_accuracy = 0.0;  // percent

  bool operator==(const TrainLogRow&) const = default;
};

void write_training_log(std::ostream& out, const std::vector<TrainLogRow>& rows,
                        std::string_view header = {}, std::string_view footer = {});

struct TrainData {
  ClassPools train;
  ClassPools validation;
};

// Holds out val_fraction of the training ids (stratified) for checkpoint
// selection. Falls back to validating on the training pools when the
// hold-out would leave a class empty on either side.
TrainData make_train_data(const std::vector<Session>& sessions,
                          const std::vector<std::string>& train_ids,
                          double val_fraction, std::uint64_t seed);

struct TrainResult {
  ModelCheckpoint best;
  std::size_t best_iteration = 0;
  double best_val_accuracy = 0.0;
  double final_val_accuracy = 0.0;
  std::size_t iterations_run = 0;
  std::vector<TrainLogRow> log;
  FailureFlag failure;
};

// Called with each session right before it drives a gradient step.
using StepObserver = std::function<void(const Session&)>;

// Class-balanced momentum-SGD training with periodic validation. The model
// holds the best-validation parameters on return. NaN divergence stops
// training and is reported, never thrown.
TrainResult train(SequenceClassifier& model, const FeatureStore& features,
                  const TrainData& data, const TrainConfig& config,
                  const StepObserver& observer = {});

// ---- ablation grid ----

struct GridSpec {
  std::vector<ModelKind> classifiers{kAllModelKinds.begin(), kAllModelKinds.end()};
  std::vector<FeatureType> features{kAllFeatureTypes.begin(), kAllFeatureTypes.end()};
  std::vector<TurnSource> sources{kAllTurnSources.begin(), kAllTurnSources.end()};
};

struct GridProvider {
  std::string label;
  EmbeddingProvider* provider = nullptr;
};

struct CellKey {
  ModelKind classifier = ModelKind::transformer;
  FeatureType feature_type = FeatureType::wa_embedding;
  TurnSource turn_source = TurnSource::patient;
  std::string provider;

  std::string str() const;
  bool operator==(const CellKey&) const = default;
};

struct CellResult {
  CellKey key;
  double accuracy_pct = std::numeric_limits<double>::quiet_NaN();
  FailureFlag failure;
  ConfusionMatrix confusion;
  std::size_t best_iteration = 0;
  std::string checkpoint_path;
  std::string error;
};

struct AblationOptions {
  TrainConfig train;
  double test_fraction = 0.2;
  double val_fraction = 0.1;
  std::uint64_t split_seed = 0;
  std::size_t eval_samples = 1000;
  std::size_t jobs = 1;
  std::filesystem::path out_dir;  // empty: no per-cell artifacts
  std::function<void(const CellResult&)> on_cell_done;
};

struct AblationResult {
  std::vector<std::string> providers;
  std::vector<CellResult> cells;  // grid order: provider, classifier, feature, source

  const CellResult* find(const CellKey& key) const;
};

AblationResult run_ablation_grid(const std::vector<Session>& sessions,
                                 const Inventory& inventory,
                                 const std::vector<GridProvider>& providers,
                                 const GridSpec& grid, const AblationOptions& options);

void write_ablation_csv(std::ostream& out, const AblationResult& result,
                        std::string_view header = {});
// Rows: classifier x feature type; columns: provider x turn source.
// Flagged cells render as "acc (F)", errored cells as "F".
std::string format_ablation_table(const AblationResult& result);

// Published accuracies for the two sentence encoders, keyed by provider
// name "sentencebert" or "doc2vec". Display only.
std::optional<double> reference_accuracy(const CellKey& key);
std::string format_reference_table();

}  // namespace wat
