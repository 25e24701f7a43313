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

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "wat/alliance.hpp"
#include "wat/checkpoint.hpp"
#include "wat/corpus.hpp"
#include "wat/embed_server.hpp"
#include "wat/embedding.hpp"
#include "wat/error.hpp"
#include "wat/hash.hpp"
#include "wat/inventory.hpp"
#include "wat/pipeline.hpp"
#include "wat/synthetic.hpp"

namespace wat::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t default_seed() {
  const char* env = std::getenv("WAT_SEED");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(env, &used);
    if (used != std::string_view(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("WAT_SEED is not an unsigned integer: '") + env + "'");
  }
}

namespace {

// ---- shared helpers ----

std::string digest_of(const json& config) { return digest_hex(config.dump()); }

std::string digest_header(const std::string& digest) { return "config_digest=" + digest; }

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  return out;
}

struct InventoryChoice {
  Inventory inventory;
  std::string source;  // file path or "bundled"
};

InventoryChoice load_inventory_choice(const std::string& path) {
  if (path.empty()) return {bundled_inventory(), "bundled"};
  return {load_inventory(path), path};
}

ProviderConfig resolve_provider(const std::string& spec, std::size_t dim,
                                const std::string& embeddings, const std::string& endpoint,
                                std::uint64_t hash_seed) {
  ProviderConfig pc;
  if (spec == "file" && !embeddings.empty()) {
    pc = parse_provider_spec("file:" + embeddings, dim);
  } else if (spec == "remote" && !endpoint.empty()) {
    pc = parse_provider_spec("remote:" + endpoint, dim);
  } else {
    pc = parse_provider_spec(spec, dim);
  }
  if (pc.kind == ProviderKind::hash) pc.hash_seed = hash_seed;
  pc.cache_capacity = 4096;
  return pc;
}

json provider_json(const ProviderConfig& pc) {
  json j;
  j["kind"] = provider_kind_name(pc.kind);
  switch (pc.kind) {
    case ProviderKind::hash:
      j["dim"] = pc.dim;
      j["hash_seed"] = pc.hash_seed;
      break;
    case ProviderKind::file: j["path"] = pc.path.string(); break;
    case ProviderKind::remote: j["endpoint"] = pc.endpoint; break;
  }
  return j;
}

ProviderConfig provider_from_json(const json& j) {
  ProviderConfig pc;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "hash") {
    pc.kind = ProviderKind::hash;
    pc.dim = j.at("dim").get<std::size_t>();
    pc.hash_seed = j.at("hash_seed").get<std::uint64_t>();
  } else if (kind == "file") {
    pc.kind = ProviderKind::file;
    pc.path = j.at("path").get<std::string>();
  } else if (kind == "remote") {
    pc.kind = ProviderKind::remote;
    pc.endpoint = j.at("endpoint").get<std::string>();
  } else {
    throw ConfigError("unknown provider kind '" + kind + "' in checkpoint");
  }
  pc.cache_capacity = 4096;
  return pc;
}

void print_digest(std::ostream& out, const std::string& digest) {
  out << "config_digest=" << digest << '\n';
}

std::array<std::size_t, kNumConditions> parse_counts(const std::string& text) {
  std::array<std::size_t, kNumConditions> counts{};
  std::stringstream ss(text);
  std::string part;
  std::size_t i = 0;
  while (std::getline(ss, part, ',')) {
    if (i >= kNumConditions) throw UsageError("--class-counts needs exactly 4 values");
    try {
      std::size_t used = 0;
      const long long v = std::stoll(part, &used);
      if (used != part.size() || v < 0) throw std::invalid_argument(part);
      counts[i++] = static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      throw UsageError("invalid class count '" + part + "'");
    }
  }
  if (i != kNumConditions) throw UsageError("--class-counts needs exactly 4 values");
  return counts;
}

// ---- gen-corpus ----

struct GenArgs {
  std::optional<std::size_t> per_class;
  std::string class_counts;
  std::size_t turns = 60;
  double marker_rate = 0.5;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_corpus(const GenArgs& a, std::ostream& out) {
  GeneratorSpec spec;
  if (a.per_class.has_value() == !a.class_counts.empty()) {
    throw UsageError("give exactly one of --sessions-per-class or --class-counts");
  }
  if (a.per_class) {
    spec.class_counts.fill(*a.per_class);
  } else {
    spec.class_counts = parse_counts(a.class_counts);
  }
  spec.turns = a.turns;
  spec.marker_rate = a.marker_rate;
  spec.seed = a.seed;
  try {
    spec.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  } catch (const ValidationError& e) {
    throw UsageError(e.what());
  }

  json cfg{{"command", "gen-corpus"}, {"generator", spec.canonical()}};
  const std::string digest = digest_of(cfg);
  print_digest(out, digest);

  const auto sessions = generate_synthetic_corpus(spec);
  save_corpus(a.out, sessions, digest_header(digest));
  std::size_t total = 0;
  for (auto c : kAllConditions) {
    out << condition_name(c) << '=' << spec.class_counts[condition_code(c)] << '\n';
    total += spec.class_counts[condition_code(c)];
  }
  out << "sessions=" << total << '\n';
  return kExitOk;
}

// ---- score ----

struct ProviderArgs {
  std::string spec = "hash";
  std::size_t dim = 64;
  std::string embeddings;
  std::string endpoint;
  std::uint64_t hash_seed = 0;

  ProviderConfig resolve() const {
    return resolve_provider(spec, dim, embeddings, endpoint, hash_seed);
  }
};

void add_provider_flags(CLI::App* app, ProviderArgs& p) {
  app->add_option("--provider", p.spec,
                  "Embedding provider: hash[:dim], file[:path], remote[:url]")
      ->capture_default_str();
  app->add_option("--dim", p.dim, "Hash provider dimension")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app->add_option("--embeddings", p.embeddings, "Vector file for --provider file");
  app->add_option("--endpoint", p.endpoint, "Server URL for --provider remote");
  app->add_option("--hash-seed", p.hash_seed, "Hash provider seed")->capture_default_str();
}

struct ScoreArgs {
  std::string corpus;
  std::string inventory;
  ProviderArgs provider;
  std::string out;
};

// Re-scores a failing session turn by turn to name the offending pair.
std::string locate_failure(const AllianceEncoder& encoder, const Session& s) {
  for (const auto& p : s.pairs) {
    for (const Turn* t : {&p.patient_turn, &p.therapist_turn}) {
      try {
        (void)encoder.score_text(t->text, t->speaker, p.index);
      } catch (const std::exception& e) {
        return "session " + s.session_id + " pair " + std::to_string(p.index) + " (" +
               std::string(role_name(t->speaker)) + "): " + e.what();
      }
    }
  }
  return "session " + s.session_id;
}

int cmd_score(const ScoreArgs& a, std::ostream& out) {
  const ProviderConfig pc = a.provider.resolve();
  const auto sessions = load_corpus(a.corpus);
  const InventoryChoice inv = load_inventory_choice(a.inventory);

  json cfg{{"command", "score"},
           {"provider", provider_json(pc)},
           {"inventory_digest", inventory_digest(inv.inventory)}};
  const std::string digest = digest_of(cfg);
  print_digest(out, digest);

  auto provider = make_provider(pc);
  const AllianceEncoder encoder(*provider, inv.inventory);
  std::vector<ScoreRow> rows;
  for (const auto& s : sessions) {
    SessionTrajectory traj;
    try {
      traj = encoder.score_session(s);
    } catch (const ProviderError& e) {
      throw ProviderError(locate_failure(encoder, s) + " [" + e.what() + "]");
    }
    auto r = score_rows(traj, inv.inventory);
    rows.insert(rows.end(), std::make_move_iterator(r.begin()),
                std::make_move_iterator(r.end()));
  }
  auto file = open_output(a.out);
  write_scores_csv(file, rows, inv.inventory.size(), digest_header(digest));
  out << "rows=" << rows.size() << '\n';
  return kExitOk;
}

// ---- train ----

struct TrainArgs {
  std::string corpus;
  std::string inventory;
  ProviderArgs provider;
  std::string model = "transformer";
  std::string features = "wa_embedding";
  std::string turns = "patient";
  long long iters = 50000;
  double lr = 0.001;
  double momentum = 0.9;
  std::optional<std::size_t> eval_every;
  std::size_t max_pairs = kDefaultMaxPairs;
  double clip_norm = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> split_seed;
  double test_fraction = 0.2;
  double val_fraction = 0.1;
  std::string out_checkpoint;
  std::string log;
};

template <typename T, typename F>
T parse_enum(const std::string& flag, const std::string& value, F parse) {
  const auto v = parse(value);
  if (!v) throw UsageError("invalid " + flag + " value '" + value + "'");
  return *v;
}

int cmd_train(const TrainArgs& a, std::ostream& out) {
  if (a.iters < 1) throw UsageError("--iters must be >= 1");
  const ModelKind kind = parse_enum<ModelKind>("--model", a.model, parse_model_kind);
  const FeatureType ftype = parse_enum<FeatureType>("--features", a.features, parse_feature_type);
  const TurnSource source = parse_enum<TurnSource>("--turns", a.turns, parse_turn_source);
  if (!(a.test_fraction > 0.0 && a.test_fraction < 1.0)) {
    throw UsageError("--test-fraction must be in (0, 1)");
  }

  TrainConfig tc;
  tc.iterations = static_cast<std::size_t>(a.iters);
  tc.lr = a.lr;
  tc.momentum = a.momentum;
  tc.eval_every = a.eval_every.value_or(std::min<std::size_t>(500, tc.iterations));
  tc.max_pairs = a.max_pairs;
  tc.clip_norm = a.clip_norm;
  tc.seed = a.seed;
  tc.validate();
  const std::uint64_t split_seed = a.split_seed.value_or(a.seed);
  const ProviderConfig pc = a.provider.resolve();

  out << "lr=" << tc.lr << " momentum=" << tc.momentum << " iters=" << tc.iterations << '\n';

  const auto sessions = load_corpus(a.corpus);
  const InventoryChoice inv = load_inventory_choice(a.inventory);
  auto provider = make_provider(pc);
  const AllianceEncoder encoder(*provider, inv.inventory);
  const ScoredCorpus scored(sessions, encoder, tc.max_pairs);
  const FeatureStore features(scored, scored.feature_config(ftype, source));

  ModelConfig mc = default_model_config(kind, features.width(), derive_seed(a.seed, "model"));
  mc.max_len = std::max(mc.max_len, tc.max_pairs);

  json cfg{{"command", "train"},
           {"provider", provider_json(pc)},
           {"inventory_digest", inventory_digest(inv.inventory)},
           {"feature_config", features.config().canonical()},
           {"model", json::parse(mc.to_json())},
           {"train", json::parse(tc.canonical())},
           {"split_seed", split_seed},
           {"test_fraction", a.test_fraction},
           {"val_fraction", a.val_fraction}};
  const std::string digest = digest_of(cfg);
  print_digest(out, digest);

  const CorpusSplit split = split_corpus(scored.sessions(), a.test_fraction, split_seed);
  const TrainData data = make_train_data(scored.sessions(), split.train, a.val_fraction, a.seed);
  auto model = make_model(mc);
  TrainResult tr = train(*model, features, data, tc);

  json meta = cfg;
  meta["config_digest"] = digest;
  meta["inventory_source"] = inv.source;
  meta["feature_type"] = feature_type_name(ftype);
  meta["turn_source"] = turn_source_name(source);
  meta["max_pairs"] = tc.max_pairs;
  meta["failure"] = failure_reason_name(tr.failure.reason);
  tr.best.metadata = meta.dump();
  save_checkpoint(a.out_checkpoint, tr.best);

  const std::string footer = "failure=" + std::string(failure_reason_name(tr.failure.reason)) +
                             " best_iteration=" + std::to_string(tr.best_iteration);
  if (!a.log.empty()) {
    auto log = open_output(a.log);
    write_training_log(log, tr.log, digest_header(digest), footer);
  } else {
    write_training_log(out, tr.log, digest_header(digest), footer);
  }

  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", tr.best_val_accuracy);
  out << "best_iteration=" << tr.best_iteration << " best_val_accuracy=" << buf << '\n';
  out << "failure_flag=" << (tr.failure.failed ? "F" : "none")
      << " reason=" << failure_reason_name(tr.failure.reason) << '\n';
  return kExitOk;
}

// ---- eval ----

struct EvalArgs {
  std::string checkpoint;
  std::string corpus;
  std::string inventory;
  std::optional<std::uint64_t> split_seed;
  std::size_t n = 1000;
  std::uint64_t seed = 0;
  std::string out = "confusion.csv";
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  if (a.n < 1) throw UsageError("--n must be >= 1");
  const ModelCheckpoint ckpt = load_checkpoint(a.checkpoint);
  json meta;
  try {
    meta = json::parse(ckpt.metadata);
    (void)meta.at("provider");
    (void)meta.at("inventory_digest");
    (void)meta.at("feature_type");
  } catch (const json::exception&) {
    throw Error("checkpoint '" + a.checkpoint + "' lacks pipeline metadata");
  }
  const std::string recorded = meta.value("config_digest", "");
  json train_cfg = meta;
  train_cfg.erase("config_digest");
  for (const char* k : {"inventory_source", "feature_type", "turn_source", "max_pairs", "failure"})
    train_cfg.erase(k);
  if (digest_of(train_cfg) != recorded) {
    throw Error("checkpoint config digest mismatch: recorded " + recorded + ", computed " +
                digest_of(train_cfg));
  }
  if (meta.at("model") != json::parse(ckpt.model.to_json())) {
    throw Error("checkpoint model config does not match its recorded config digest");
  }

  const ProviderConfig pc = provider_from_json(meta.at("provider"));
  std::string inv_path = a.inventory;
  if (inv_path.empty() && meta.value("inventory_source", "bundled") != "bundled") {
    inv_path = meta.at("inventory_source").get<std::string>();
  }
  const InventoryChoice inv = load_inventory_choice(inv_path);
  if (inventory_digest(inv.inventory) != meta.at("inventory_digest").get<std::string>()) {
    throw Error("inventory digest mismatch: checkpoint was trained with " +
                meta.at("inventory_digest").get<std::string>());
  }
  const std::uint64_t split_seed = a.split_seed.value_or(meta.at("split_seed").get<std::uint64_t>());
  const double test_fraction = meta.at("test_fraction").get<double>();
  const std::size_t max_pairs = meta.at("max_pairs").get<std::size_t>();
  const FeatureType ftype = parse_enum<FeatureType>(
      "feature_type", meta.at("feature_type").get<std::string>(), parse_feature_type);
  const TurnSource source = parse_enum<TurnSource>(
      "turn_source", meta.at("turn_source").get<std::string>(), parse_turn_source);

  json cfg{{"command", "eval"},
           {"checkpoint_digest", recorded},
           {"split_seed", split_seed},
           {"n", a.n},
           {"seed", a.seed}};
  const std::string digest = digest_of(cfg);
  print_digest(out, digest);

  const auto sessions = load_corpus(a.corpus);
  auto provider = make_provider(pc);
  const AllianceEncoder encoder(*provider, inv.inventory);
  const ScoredCorpus scored(sessions, encoder, max_pairs);
  const FeatureStore features(scored, scored.feature_config(ftype, source));
  if (features.config().canonical() != meta.at("feature_config").get<std::string>()) {
    throw Error("feature configuration mismatch: checkpoint expects " +
                meta.at("feature_config").get<std::string>() + ", corpus gives " +
                features.config().canonical());
  }
  auto model = restore_model(ckpt);
  const CorpusSplit split = split_corpus(scored.sessions(), test_fraction, split_seed);
  const ClassPools pools = make_class_pools(scored.sessions(), split.test);
  const EvalResult ev = evaluate(*model, features, pools, a.n, a.seed);

  auto file = open_output(a.out);
  write_confusion_csv(file, ev.confusion, digest_header(digest));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", ev.accuracy_pct);
  out << "accuracy=" << buf << '\n';
  out << "failure_flag=" << (ev.failure.failed ? "F" : "none")
      << " reason=" << failure_reason_name(ev.failure.reason) << '\n';
  return kExitOk;
}

// ---- ablate ----

struct AblateArgs {
  std::string corpus;
  std::string inventory;
  std::string providers = "hash";
  std::size_t dim = 64;
  long long iters = 50000;
  std::optional<std::size_t> eval_every;
  std::size_t eval_samples = 1000;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> split_seed;
  std::string out_dir = "ablation";
  std::size_t jobs = 1;
  bool reference = false;
};

int cmd_ablate(const AblateArgs& a, std::ostream& out) {
  if (a.iters < 1) throw UsageError("--iters must be >= 1");
  if (a.jobs < 1) throw UsageError("--jobs must be >= 1");
  AblationOptions opt;
  opt.train.iterations = static_cast<std::size_t>(a.iters);
  opt.train.eval_every = a.eval_every.value_or(std::min<std::size_t>(500, opt.train.iterations));
  opt.train.seed = a.seed;
  opt.train.validate();
  opt.split_seed = a.split_seed.value_or(a.seed);
  opt.eval_samples = a.eval_samples;
  opt.jobs = a.jobs;
  opt.out_dir = a.out_dir;

  std::vector<ProviderConfig> configs;
  std::vector<std::string> labels;
  std::stringstream ss(a.providers);
  std::string spec;
  while (std::getline(ss, spec, ',')) {
    if (spec.empty()) throw UsageError("empty entry in --providers");
    configs.push_back(resolve_provider(spec, a.dim, "", "", 0));
    std::string label(provider_kind_name(configs.back().kind));
    if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
      label += std::to_string(labels.size());
    }
    labels.push_back(label);
  }
  if (configs.empty()) throw UsageError("--providers is empty");

  const auto sessions = load_corpus(a.corpus);
  const InventoryChoice inv = load_inventory_choice(a.inventory);

  json pj = json::array();
  for (const auto& c : configs) pj.push_back(provider_json(c));
  json cfg{{"command", "ablate"},
           {"providers", pj},
           {"inventory_digest", inventory_digest(inv.inventory)},
           {"train", json::parse(opt.train.canonical())},
           {"split_seed", opt.split_seed},
           {"eval_samples", opt.eval_samples}};
  const std::string digest = digest_of(cfg);
  print_digest(out, digest);

  std::vector<std::unique_ptr<EmbeddingProvider>> owned;
  std::vector<GridProvider> grid_providers;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    owned.push_back(make_provider(configs[i]));
    grid_providers.push_back({labels[i], owned.back().get()});
  }
  opt.on_cell_done = [&out](const CellResult& c) {
    out << "cell " << c.key.str() << ' '
        << (std::isnan(c.accuracy_pct) ? std::string("F") : std::to_string(c.accuracy_pct))
        << (c.failure.failed ? " F" : "") << (c.error.empty() ? "" : " error: " + c.error)
        << '\n';
  };
  const AblationResult result =
      run_ablation_grid(sessions, inv.inventory, grid_providers, GridSpec{}, opt);

  fs::create_directories(a.out_dir);
  {
    auto csv = open_output(fs::path(a.out_dir) / "summary.csv");
    write_ablation_csv(csv, result, digest_header(digest));
  }
  const std::string table = format_ablation_table(result);
  {
    auto txt = open_output(fs::path(a.out_dir) / "summary.txt");
    txt << "# " << digest_header(digest) << '\n' << table;
  }
  out << table;
  if (a.reference) out << '\n' << format_reference_table();
  return kExitOk;
}

// ---- serve-embed ----

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop = true; }

int cmd_serve(std::size_t dim, int port, const std::string& host, std::uint64_t hash_seed,
              std::ostream& out) {
  if (port < 0 || port > 65535) throw UsageError("--port must be in [0, 65535]");
  json cfg{{"command", "serve-embed"}, {"dim", dim}, {"hash_seed", hash_seed}};
  print_digest(out, digest_of(cfg));
  auto provider = std::make_shared<HashEmbeddingProvider>(dim, hash_seed, 4096);
  EmbedServer server(provider);
  const int bound = server.start(host, port);
  out << "listening on http://" << host << ':' << bound << std::endl;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return kExitOk;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Working-alliance session classification toolkit", "wat"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "wat 0.1.0");

  std::uint64_t seed = 0;
  try {
    seed = default_seed();
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  GenArgs gen;
  gen.seed = seed;
  auto* g = app.add_subcommand("gen-corpus", "Generate a synthetic transcript corpus");
  g->add_option("--sessions-per-class", gen.per_class, "Sessions per condition")
      ->check(CLI::PositiveNumber);
  g->add_option("--class-counts", gen.class_counts,
                "Comma-separated sessions per condition (anxiety,depression,schizophrenia,suicidal)");
  g->add_option("--turns", gen.turns, "Turn pairs per session")->capture_default_str();
  g->add_option("--marker-rate", gen.marker_rate, "Fraction of patient turns with markers")
      ->capture_default_str();
  g->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output transcript file")->required();

  ScoreArgs score;
  auto* s = app.add_subcommand("score", "Write turn-level alliance scores as CSV");
  s->add_option("--corpus", score.corpus, "Transcript file")->required();
  s->add_option("--inventory", score.inventory, "Inventory file (default: bundled)");
  add_provider_flags(s, score.provider);
  s->add_option("--out", score.out, "Output CSV")->required();

  TrainArgs tr;
  tr.seed = seed;
  auto* t = app.add_subcommand("train", "Train one classifier");
  t->add_option("--corpus", tr.corpus, "Transcript file")->required();
  t->add_option("--inventory", tr.inventory, "Inventory file (default: bundled)");
  add_provider_flags(t, tr.provider);
  t->add_option("--model", tr.model, "transformer|lstm|rnn")->capture_default_str();
  t->add_option("--features", tr.features, "wa_embedding|wa_score|embedding")
      ->capture_default_str();
  t->add_option("--turns", tr.turns, "patient|therapist|both")->capture_default_str();
  t->add_option("--iters", tr.iters, "Training iterations")->capture_default_str();
  t->add_option("--lr", tr.lr, "Learning rate")->capture_default_str();
  t->add_option("--momentum", tr.momentum, "SGD momentum")->capture_default_str();
  t->add_option("--eval-every", tr.eval_every, "Validation interval (default: min(500, iters))");
  t->add_option("--max-pairs", tr.max_pairs, "Turn pairs per session")->capture_default_str();
  t->add_option("--clip-norm", tr.clip_norm, "Gradient clipping norm, 0 disables")
      ->capture_default_str();
  t->add_option("--seed", tr.seed, "Training seed")->capture_default_str();
  t->add_option("--split-seed", tr.split_seed, "Train/test split seed (default: --seed)");
  t->add_option("--test-fraction", tr.test_fraction, "Held-out test fraction")
      ->capture_default_str();
  t->add_option("--val-fraction", tr.val_fraction, "Validation fraction of train")
      ->capture_default_str();
  t->add_option("--out-checkpoint", tr.out_checkpoint, "Checkpoint path")->required();
  t->add_option("--log", tr.log, "Training log CSV (default: stdout)");

  EvalArgs ev;
  ev.seed = seed;
  auto* e = app.add_subcommand("eval", "Evaluate a checkpoint on the test split");
  e->add_option("--checkpoint", ev.checkpoint, "Checkpoint path")->required();
  e->add_option("--corpus", ev.corpus, "Transcript file")->required();
  e->add_option("--inventory", ev.inventory, "Inventory file (default: as trained)");
  e->add_option("--split-seed", ev.split_seed, "Split seed (default: as trained)");
  e->add_option("--n", ev.n, "Balanced test draws")->capture_default_str();
  e->add_option("--seed", ev.seed, "Sampling seed")->capture_default_str();
  e->add_option("--out", ev.out, "Confusion matrix CSV")->capture_default_str();

  AblateArgs ab;
  ab.seed = seed;
  auto* b = app.add_subcommand("ablate", "Run the classifier x feature x turn-source grid");
  b->add_option("--corpus", ab.corpus, "Transcript file")->required();
  b->add_option("--inventory", ab.inventory, "Inventory file (default: bundled)");
  b->add_option("--providers", ab.providers, "Comma-separated provider specs")
      ->capture_default_str();
  b->add_option("--dim", ab.dim, "Hash provider dimension")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  b->add_option("--iters", ab.iters, "Training iterations per cell")->capture_default_str();
  b->add_option("--eval-every", ab.eval_every, "Validation interval (default: min(500, iters))");
  b->add_option("--eval-samples", ab.eval_samples, "Balanced test draws per cell")
      ->capture_default_str();
  b->add_option("--seed", ab.seed, "Master seed")->capture_default_str();
  b->add_option("--split-seed", ab.split_seed, "Train/test split seed (default: --seed)");
  b->add_option("--out-dir", ab.out_dir, "Artifact directory")->capture_default_str();
  b->add_option("--jobs", ab.jobs, "Worker threads")->capture_default_str();
  b->add_flag("--reference", ab.reference, "Also print the published reference table");

  std::size_t serve_dim = 64;
  int serve_port = 8080;
  std::string serve_host = "127.0.0.1";
  std::uint64_t serve_seed = 0;
  auto* v = app.add_subcommand("serve-embed", "Serve the remote embedding protocol");
  v->add_option("--dim", serve_dim, "Embedding dimension")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  v->add_option("--port", serve_port, "TCP port, 0 picks a free one")->capture_default_str();
  v->add_option("--host", serve_host, "Bind address")->capture_default_str();
  v->add_option("--hash-seed", serve_seed, "Hash provider seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << "wat 0.1.0\n";
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*g) return cmd_gen_corpus(gen, out);
    if (*s) return cmd_score(score, out);
    if (*t) return cmd_train(tr, out);
    if (*e) return cmd_eval(ev, out);
    if (*b) return cmd_ablate(ab, out);
    if (*v) return cmd_serve(serve_dim, serve_port, serve_host, serve_seed, out);
  } catch (const UsageError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace wat::cli
