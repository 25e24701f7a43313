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

#include "wat/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "wat/error.hpp"
#include "wat/optim.hpp"
#include "wat/text.hpp"

namespace wat {

using nlohmann::json;

void TrainConfig::validate() const {
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (eval_every < 1 || eval_every > iterations) {
    throw ConfigError("eval_every must be in [1, iterations]");
  }
  if (!(lr >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ConfigError("momentum must be in [0, 1)");
  if (max_pairs < 1) throw ConfigError("max_pairs must be >= 1");
  if (val_samples < 1) throw ConfigError("val_samples must be >= 1");
  if (!(clip_norm >= 0.0)) throw ConfigError("clip_norm must be >= 0");
}

std::string TrainConfig::canonical() const {
  json j;
  j["iterations"] = iterations;
  j["lr"] = lr;
  j["momentum"] = momentum;
  j["eval_every"] = eval_every;
  j["max_pairs"] = max_pairs;
  j["seed"] = seed;
  j["plateau_window"] = plateau_window;
  j["val_samples"] = val_samples;
  j["clip_norm"] = clip_norm;
  return j.dump();
}

// ---------------------------------------------------------------------------

ScoredCorpus::ScoredCorpus(const std::vector<Session>& sessions,
                           const AllianceEncoder& encoder, std::size_t max_pairs)
    : embed_dim_(encoder.provider().dim()),
      inventory_size_(encoder.inventory_size()),
      max_pairs_(max_pairs) {
  sessions_.reserve(sessions.size());
  for (const Session& s : sessions) {
    Session cut = truncate_session(s, max_pairs);
    SessionEmbeddings emb = embed_session(encoder.provider(), cut);
    SessionTrajectory traj =
        score_embedded_session(cut, emb, encoder.inventory_embeddings());
    if (!index_.emplace(cut.session_id, sessions_.size()).second) {
      throw ValidationError("duplicate session id '" + cut.session_id + "'");
    }
    sessions_.push_back(std::move(cut));
    embeddings_.push_back(std::move(emb));
    trajectories_.push_back(std::move(traj));
  }
}

std::size_t ScoredCorpus::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw ValidationError("unknown session id '" + std::string(id) + "'");
  return it->second;
}

const Session& ScoredCorpus::session(std::string_view id) const {
  return sessions_[index_of(id)];
}
const SessionTrajectory& ScoredCorpus::trajectory(std::string_view id) const {
  return trajectories_[index_of(id)];
}
const SessionEmbeddings& ScoredCorpus::embeddings(std::string_view id) const {
  return embeddings_[index_of(id)];
}

FeatureConfig ScoredCorpus::feature_config(FeatureType type, TurnSource source) const {
  return {type, source, embed_dim_, inventory_size_};
}

FeatureStore::FeatureStore(const ScoredCorpus& corpus, const FeatureConfig& config)
    : corpus_(corpus), config_(config) {
  for (const Session& s : corpus.sessions()) {
    features_.emplace(s.session_id,
                      assemble_session(s, corpus.trajectory(s.session_id),
                                       corpus.embeddings(s.session_id), config,
                                       corpus.max_pairs())
                          .to_tensor());
  }
}

const Tensor& FeatureStore::sequence(std::string_view session_id) const {
  auto it = features_.find(std::string(session_id));
  if (it == features_.end()) {
    throw ValidationError("no features for session '" + std::string(session_id) + "'");
  }
  return it->second;
}

// ---------------------------------------------------------------------------

void require_nonempty_pools(const ClassPools& pools, std::string_view what) {
  for (std::size_t c = 0; c < kNumConditions; ++c) {
    if (pools[c].empty()) {
      throw ConfigError(std::string(what) + ": class '" +
                        std::string(condition_name(condition_from_code(c))) +
                        "' has no sessions");
    }
  }
}

const Session& balanced_sample(const ClassPools& pools, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick_class(0, kNumConditions - 1);
  const auto& pool = pools[pick_class(rng)];
  if (pool.empty()) throw ConfigError("balanced_sample: empty class pool");
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return *pool[pick(rng)];
}

// ---------------------------------------------------------------------------

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts)
    for (auto v : row) t += v;
  return t;
}

std::size_t ConfusionMatrix::trace() const {
  std::size_t t = 0;
  for (std::size_t c = 0; c < kNumConditions; ++c) t += counts[c][c];
  return t;
}

double ConfusionMatrix::accuracy() const {
  const auto t = total();
  return t == 0 ? 0.0 : static_cast<double>(trace()) / static_cast<double>(t);
}

std::size_t ConfusionMatrix::row_sum(std::size_t true_class) const {
  std::size_t s = 0;
  for (auto v : counts.at(true_class)) s += v;
  return s;
}

std::size_t ConfusionMatrix::column_sum(std::size_t predicted_class) const {
  std::size_t s = 0;
  for (const auto& row : counts) s += row.at(predicted_class);
  return s;
}

void write_confusion_csv(std::ostream& out, const ConfusionMatrix& cm,
                         std::string_view header) {
  if (!header.empty()) out << "# " << header << '\n';
  out << "true/predicted";
  for (auto c : kAllConditions) out << ',' << condition_name(c);
  out << '\n';
  for (std::size_t r = 0; r < kNumConditions; ++r) {
    out << condition_name(condition_from_code(r));
    for (std::size_t c = 0; c < kNumConditions; ++c) out << ',' << cm.counts[r][c];
    out << '\n';
  }
}

ConfusionMatrix read_confusion_csv(std::istream& in) {
  ConfusionMatrix cm;
  std::string line;
  std::size_t lineno = 0, row = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(trim(cell));
    if (cells.size() != kNumConditions + 1) {
      throw ParseError(lineno, "confusion CSV rows need " +
                                   std::to_string(kNumConditions + 1) + " cells");
    }
    if (!header) {
      for (std::size_t c = 0; c < kNumConditions; ++c) {
        if (cells[c + 1] != condition_name(condition_from_code(c))) {
          throw ParseError(lineno, "unexpected column '" + cells[c + 1] + "'");
        }
      }
      header = true;
      continue;
    }
    if (row >= kNumConditions || cells[0] != condition_name(condition_from_code(row))) {
      throw ParseError(lineno, "unexpected row '" + cells[0] + "'");
    }
    for (std::size_t c = 0; c < kNumConditions; ++c) {
      try {
        cm.counts[row][c] = std::stoull(cells[c + 1]);
      } catch (const std::exception&) {
        throw ParseError(lineno, "bad count '" + cells[c + 1] + "'");
      }
    }
    ++row;
  }
  if (row != kNumConditions) throw ParseError(lineno, "confusion CSV is incomplete");
  return cm;
}

std::string_view failure_reason_name(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::single_class_collapse: return "single_class_collapse";
    case FailureReason::nan_divergence: return "nan_divergence";
    case FailureReason::error: return "error";
  }
  return "?";
}

FailureFlag detect_collapse(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) return FailureFlag::ok();
  std::size_t top = 0;
  for (std::size_t c = 0; c < kNumConditions; ++c) top = std::max(top, cm.column_sum(c));
  const double top_share = static_cast<double>(top) / static_cast<double>(total);
  const double acc_pct = 100.0 * cm.accuracy();
  const double chance = 100.0 / kNumConditions;
  if (top_share > 0.95 && std::abs(acc_pct - chance) <= 5.0) {
    return FailureFlag::of(FailureReason::single_class_collapse);
  }
  return FailureFlag::ok();
}

EvalResult evaluate(const SessionPredictor& predictor, const ClassPools& pools,
                    std::size_t n_samples, std::uint64_t seed) {
  require_nonempty_pools(pools, "evaluate");
  if (n_samples == 0) throw ConfigError("evaluate: n_samples must be >= 1");
  Rng rng(seed);
  std::unordered_map<const Session*, std::size_t> memo;
  EvalResult r;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Session& s = balanced_sample(pools, rng);
    auto it = memo.find(&s);
    if (it == memo.end()) {
      const std::size_t pred = predictor(s);
      if (pred >= kNumConditions) throw ValidationError("predictor returned an invalid class");
      it = memo.emplace(&s, pred).first;
    }
    ++r.confusion.counts[condition_code(s.condition)][it->second];
  }
  r.accuracy_pct = 100.0 * r.confusion.accuracy();
  r.failure = detect_collapse(r.confusion);
  return r;
}

EvalResult evaluate(SequenceClassifier& model, const FeatureStore& features,
                    const ClassPools& pools, std::size_t n_samples, std::uint64_t seed) {
  return evaluate(
      [&](const Session& s) {
        return condition_code(predict(model, features.sequence(s.session_id)).condition);
      },
      pools, n_samples, seed);
}

// ---------------------------------------------------------------------------

namespace {

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Validation draws are fixed for the whole run so accuracies are comparable.
std::vector<const Session*> fixed_draws(const ClassPools& pools, std::size_t n,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::vector<const Session*> draws;
  draws.reserve(n);
  for (std::size_t k = 0; k < n; ++k) draws.push_back(&balanced_sample(pools, rng));
  return draws;
}

double draws_accuracy(SequenceClassifier& model, const FeatureStore& features,
                      const std::vector<const Session*>& draws) {
  std::unordered_map<const Session*, bool> memo;
  std::size_t hits = 0;
  for (const Session* s : draws) {
    auto it = memo.find(s);
    if (it == memo.end()) {
      const auto pred = predict(model, features.sequence(s->session_id)).condition;
      it = memo.emplace(s, pred == s->condition).first;
    }
    hits += it->second ? 1 : 0;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(draws.size());
}

std::string rng_state_string(const Rng& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

}  // namespace

void write_training_log(std::ostream& out, const std::vector<TrainLogRow>& rows,
                        std::string_view header, std::string_view footer) {
  if (!header.empty()) out << "# " << header << '\n';
  out << "iteration,loss,val_accuracy\n";
  for (const auto& r : rows) {
    out << r.iteration << ',' << fmt_g(r.loss) << ',' << fmt_g(r.val_accuracy) << '\n';
  }
  if (!footer.empty()) out << "# " << footer << '\n';
}

TrainData make_train_data(const std::vector<Session>& sessions,
                          const std::vector<std::string>& train_ids,
                          double val_fraction, std::uint64_t seed) {
  TrainData data;
  data.train = make_class_pools(sessions, train_ids);
  require_nonempty_pools(data.train, "training set");

  std::vector<Session> subset;
  {
    std::unordered_map<std::string_view, const Session*> by_id;
    for (const auto& s : sessions) by_id.emplace(s.session_id, &s);
    for (const auto& id : train_ids) subset.push_back(*by_id.at(id));
  }
  bool use_holdout = val_fraction > 0.0 && subset.size() >= 2;
  CorpusSplit holdout;
  if (use_holdout) {
    holdout = split_corpus(subset, val_fraction, derive_seed(seed, "validation-split"));
    const auto fit = make_class_pools(sessions, holdout.train);
    const auto val = make_class_pools(sessions, holdout.test);
    for (std::size_t c = 0; c < kNumConditions; ++c) {
      if (fit[c].empty() || val[c].empty()) use_holdout = false;
    }
    if (use_holdout) {
      data.train = fit;
      data.validation = val;
    }
  }
  if (!use_holdout) data.validation = data.train;
  return data;
}

TrainResult train(SequenceClassifier& model, const FeatureStore& features,
                  const TrainData& data, const TrainConfig& config,
                  const StepObserver& observer) {
  config.validate();
  require_nonempty_pools(data.train, "training set");
  require_nonempty_pools(data.validation, "validation set");
  if (features.width() != model.config().input_dim) {
    throw ConfigError("feature width " + std::to_string(features.width()) +
                      " does not match model input_dim " +
                      std::to_string(model.config().input_dim));
  }

  Rng sample_rng(derive_seed(config.seed, "sample"));
  Rng dropout_rng(derive_seed(config.seed, "dropout"));
  const auto val_draws =
      fixed_draws(data.validation, config.val_samples, derive_seed(config.seed, "val-draws"));

  auto params = model.parameters();
  std::vector<const Parameter*> cparams(params.begin(), params.end());
  OptimizerState opt = make_optimizer(cparams, config.lr, config.momentum);

  TrainResult result;
  auto snapshot = [&](std::size_t iteration) {
    result.best = capture_checkpoint(model, &opt);
    result.best.iteration = iteration;
    result.best.seed = config.seed;
    result.best.rng_state = rng_state_string(sample_rng);
    result.best_iteration = iteration;
  };

  result.best_val_accuracy = draws_accuracy(model, features, val_draws);
  result.final_val_accuracy = result.best_val_accuracy;
  snapshot(0);

  double loss_sum = 0.0;
  std::size_t loss_n = 0;
  std::size_t evals_since_best = 0;
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    const Session& s = balanced_sample(data.train, sample_rng);
    if (observer) observer(s);
    zero_grads(params);
    try {
      Graph g;
      Var logits = model.forward(g, features.sequence(s.session_id), true, dropout_rng);
      Var loss = cross_entropy(logits, condition_code(s.condition));
      g.backward(loss);
      loss_sum += loss.value().item();
      ++loss_n;
      if (config.clip_norm > 0.0) clip_grad_norm(params, config.clip_norm);
      sgd_step(params, opt);
      for (const Parameter* p : params) {
        if (!p->value.all_finite()) throw NumericError("sgd_step: parameter " + p->name + " diverged");
      }
    } catch (const NumericError&) {
      result.failure = FailureFlag::of(FailureReason::nan_divergence);
      result.iterations_run = it;
      break;
    }
    result.iterations_run = it;

    if (it % config.eval_every == 0 || it == config.iterations) {
      const double acc = draws_accuracy(model, features, val_draws);
      result.final_val_accuracy = acc;
      result.log.push_back({it, loss_n ? loss_sum / loss_n : 0.0, acc});
      loss_sum = 0.0;
      loss_n = 0;
      if (acc > result.best_val_accuracy) {
        result.best_val_accuracy = acc;
        snapshot(it);
        evals_since_best = 0;
      } else if (config.plateau_window > 0 && ++evals_since_best >= config.plateau_window) {
        break;
      }
    }
  }

  load_parameters(model, result.best.parameters);
  return result;
}

// ---------------------------------------------------------------------------

std::string CellKey::str() const {
  return std::string(model_kind_name(classifier)) + "." +
         std::string(feature_type_name(feature_type)) + "." +
         std::string(turn_source_name(turn_source)) + "." + provider;
}

const CellResult* AblationResult::find(const CellKey& key) const {
  for (const auto& c : cells) {
    if (c.key == key) return &c;
  }
  return nullptr;
}

namespace {

std::string safe_filename(std::string s) {
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-')) {
      c = '_';
    }
  }
  return s;
}

CellResult run_cell(const CellKey& key, const ScoredCorpus& corpus,
                    const CorpusSplit& split, const AblationOptions& options,
                    std::uint64_t master_seed) {
  CellResult r;
  r.key = key;
  try {
    const FeatureStore features(corpus,
                                corpus.feature_config(key.feature_type, key.turn_source));
    TrainConfig tc = options.train;
    tc.seed = derive_seed(master_seed, key.str());
    auto model = make_model(
        default_model_config(key.classifier, features.width(), derive_seed(tc.seed, "model")));
    const TrainData data =
        make_train_data(corpus.sessions(), split.train, options.val_fraction, tc.seed);
    TrainResult tr = train(*model, features, data, tc);
    const auto test_pools = make_class_pools(corpus.sessions(), split.test);
    EvalResult ev = evaluate(*model, features, test_pools, options.eval_samples,
                             derive_seed(tc.seed, "eval"));
    r.accuracy_pct = ev.accuracy_pct;
    r.confusion = ev.confusion;
    r.failure = tr.failure.failed ? tr.failure : ev.failure;
    r.best_iteration = tr.best_iteration;

    if (!options.out_dir.empty()) {
      const auto dir = options.out_dir / "cells";
      std::filesystem::create_directories(dir);
      const std::string stem = safe_filename(key.str());
      json meta;
      meta["cell"] = key.str();
      meta["feature_config"] = features.config().canonical();
      meta["train_config"] = json::parse(tc.canonical());
      tr.best.metadata = meta.dump();
      const auto ckpt_path = dir / (stem + ".ckpt");
      save_checkpoint(ckpt_path, tr.best);
      r.checkpoint_path = ckpt_path.string();
      const std::string digest = digest_hex(key.str() + tc.canonical());
      std::ofstream log(dir / (stem + ".log.csv"));
      write_training_log(log, tr.log, "config_digest=" + digest,
                         "failure=" + std::string(failure_reason_name(r.failure.reason)));
      std::ofstream cm(dir / (stem + ".confusion.csv"));
      write_confusion_csv(cm, ev.confusion, "config_digest=" + digest);
    }
  } catch (const std::exception& e) {
    r.failure = FailureFlag::of(FailureReason::error);
    r.error = e.what();
  }
  return r;
}

}  // namespace

AblationResult run_ablation_grid(const std::vector<Session>& sessions,
                                 const Inventory& inventory,
                                 const std::vector<GridProvider>& providers,
                                 const GridSpec& grid, const AblationOptions& options) {
  options.train.validate();
  if (providers.empty()) throw ConfigError("ablation grid needs at least one provider");
  const CorpusSplit split = split_corpus(sessions, options.test_fraction, options.split_seed);
  require_nonempty_pools(make_class_pools(sessions, split.test), "test set");

  // Embedding and scoring happen once per provider, serially.
  std::vector<std::unique_ptr<ScoredCorpus>> scored;
  AblationResult result;
  for (const auto& p : providers) {
    if (p.provider == nullptr) throw ConfigError("provider '" + p.label + "' is null");
    AllianceEncoder encoder(*p.provider, inventory);
    scored.push_back(
        std::make_unique<ScoredCorpus>(sessions, encoder, options.train.max_pairs));
    result.providers.push_back(p.label);
  }

  struct Job {
    CellKey key;
    std::size_t provider;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < providers.size(); ++p)
    for (auto k : grid.classifiers)
      for (auto f : grid.features)
        for (auto s : grid.sources) jobs.push_back({{k, f, s, providers[p].label}, p});

  result.cells.resize(jobs.size());
  std::atomic<std::size_t> next{0};
  std::mutex done_mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      result.cells[i] = run_cell(jobs[i].key, *scored[jobs[i].provider], split, options,
                                 options.train.seed);
      if (options.on_cell_done) {
        std::lock_guard lock(done_mu);
        options.on_cell_done(result.cells[i]);
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(options.jobs, jobs.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  return result;
}

void write_ablation_csv(std::ostream& out, const AblationResult& result,
                        std::string_view header) {
  if (!header.empty()) out << "# " << header << '\n';
  out << "classifier,feature_type,turn_source,provider,accuracy_pct,failure_flag,"
         "checkpoint_path\n";
  for (const auto& c : result.cells) {
    char acc[32];
    if (std::isnan(c.accuracy_pct)) {
      acc[0] = '\0';
    } else {
      std::snprintf(acc, sizeof(acc), "%.1f", c.accuracy_pct);
    }
    out << model_kind_name(c.key.classifier) << ',' << feature_type_name(c.key.feature_type)
        << ',' << turn_source_name(c.key.turn_source) << ',' << c.key.provider << ','
        << acc << ',' << (c.failure.failed ? "F" : "") << ',' << c.checkpoint_path << '\n';
  }
}

namespace {

std::string row_label(ModelKind k, FeatureType f) {
  const std::string name = k == ModelKind::transformer ? "Transformer"
                           : k == ModelKind::lstm      ? "LSTM"
                                                       : "RNN";
  const std::string wa = k == ModelKind::transformer ? "WAT" : "WA-" + name;
  switch (f) {
    case FeatureType::wa_embedding: return wa + " (working alliance embedding)";
    case FeatureType::wa_score: return wa + " (working alliance score)";
    case FeatureType::embedding: return "Embedding " + name;
  }
  return name;
}

std::string render_cell(const CellResult* c) {
  if (c == nullptr) return "-";
  if (std::isnan(c->accuracy_pct)) return "F";
  char buf[32];
  std::snprintf(buf, sizeof(buf), c->failure.failed ? "%.1f (F)" : "%.1f", c->accuracy_pct);
  return buf;
}

std::string render_table(const std::vector<std::string>& providers,
                         const std::function<std::string(const CellKey&)>& cell) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> head1{""}, head2{""};
  for (const auto& p : providers) {
    for (auto s : kAllTurnSources) {
      head1.push_back(p);
      head2.push_back(std::string(turn_source_name(s)) + " turns");
    }
  }
  rows.push_back(head1);
  rows.push_back(head2);
  for (auto k : kAllModelKinds) {
    for (auto f : kAllFeatureTypes) {
      std::vector<std::string> row{row_label(k, f)};
      for (const auto& p : providers)
        for (auto s : kAllTurnSources) row.push_back(cell({k, f, s, p}));
      rows.push_back(std::move(row));
    }
  }
  std::vector<std::size_t> width(rows.front().size(), 0);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  std::ostringstream os;
  for (std::size_t ri = 0; ri < rows.size(); ++ri) {
    const auto& r = rows[ri];
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << " | ";
      os << r[i] << std::string(width[i] - r[i].size(), ' ');
    }
    os << '\n';
    if (ri == 1 || (ri > 1 && (ri - 1) % 3 == 0)) {
      std::size_t total = 0;
      for (auto w : width) total += w + 3;
      os << std::string(total - 3, '-') << '\n';
    }
  }
  return os.str();
}

struct RefValue {
  double acc;
  bool failed;
};

// Rows: transformer/lstm/rnn x wa_embedding/wa_score/embedding.
// Columns: sentencebert patient/therapist/both, doc2vec patient/therapist/both.
constexpr RefValue kReference[9][6] = {
    {{27.6, false}, {27.0, false}, {26.0, false}, {34.1, false}, {25.7, false}, {31.9, false}},
    {{26.1, false}, {23.4, false}, {25.5, false}, {28.9, false}, {23.7, false}, {31.9, false}},
    {{24.8, false}, {24.0, false}, {25.5, false}, {31.8, false}, {26.2, false}, {29.9, false}},
    {{35.0, false}, {36.9, false}, {23.3, false}, {46.0, false}, {27.7, false}, {29.6, false}},
    {{24.5, false}, {34.2, false}, {22.6, false}, {30.2, false}, {24.7, true}, {43.4, false}},
    {{23.0, false}, {36.0, false}, {22.9, false}, {44.3, false}, {31.1, false}, {31.1, false}},
    {{22.8, false}, {30.6, false}, {26.8, false}, {23.0, true}, {24.9, false}, {19.1, false}},
    {{30.5, false}, {28.0, true}, {25.6, true}, {24.0, true}, {22.9, false}, {32.6, false}},
    {{25.3, false}, {27.5, false}, {29.0, false}, {33.8, false}, {29.0, false}, {26.2, false}},
};

const RefValue* reference_value(const CellKey& key) {
  std::size_t col_base;
  if (key.provider == "sentencebert") {
    col_base = 0;
  } else if (key.provider == "doc2vec") {
    col_base = 3;
  } else {
    return nullptr;
  }
  const auto row = static_cast<std::size_t>(key.classifier) * 3 +
                   static_cast<std::size_t>(key.feature_type);
  return &kReference[row][col_base + static_cast<std::size_t>(key.turn_source)];
}

}  // namespace

std::string format_ablation_table(const AblationResult& result) {
  return render_table(result.providers,
                      [&](const CellKey& k) { return render_cell(result.find(k)); });
}

std::optional<double> reference_accuracy(const CellKey& key) {
  const RefValue* v = reference_value(key);
  if (v == nullptr) return std::nullopt;
  return v->acc;
}

std::string format_reference_table() {
  return render_table({"sentencebert", "doc2vec"}, [](const CellKey& k) {
    const RefValue* v = reference_value(k);
    char buf[32];
    std::snprintf(buf, sizeof(buf), v->failed ? "%.1f (F)" : "%.1f", v->acc);
    return std::string(buf);
  });
}

}  // namespace wat
