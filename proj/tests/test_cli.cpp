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

#include <gtest/gtest.h>

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "support/test_support.hpp"
#include "wat/checkpoint.hpp"
#include "wat/pipeline.hpp"

namespace wat {
namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "wat");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = (dir_ / "c.jsonl").string();
    ASSERT_EQ(run({"gen-corpus", "--sessions-per-class", "5", "--turns", "6", "--seed", "2", "--out",
                   corpus_}).code,
              0);
  }
  Result train(std::vector<std::string> extra = {}, std::string model = "lstm") {
    std::vector<std::string> args{"train", "--corpus", corpus_, "--model", model, "--features",
                                  "wa_score", "--iters", "20", "--out-checkpoint", ckpt(), "--log",
                                  (dir_ / "log.csv").string()};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  }
  std::string ckpt() const { return (dir_ / "m.ckpt").string(); }

  test::TempDir dir_;
  std::string corpus_;
};

TEST_F(Cli, GenCorpusCountsAndDigest) {
  const auto r = run({"gen-corpus", "--class-counts", "495,373,71,12", "--turns", "1", "--seed", "1",
                      "--out", (dir_ / "big.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("config_digest="), std::string::npos);
  EXPECT_NE(r.out.find("anxiety=495"), std::string::npos);
  EXPECT_NE(r.out.find("sessions=951"), std::string::npos);
  EXPECT_EQ(load_corpus(dir_ / "big.jsonl").size(), 951u);
  const auto small = run({"gen-corpus", "--sessions-per-class", "4", "--out", (dir_ / "s.jsonl").string()});
  EXPECT_NE(small.out.find("sessions=16"), std::string::npos);
}

TEST_F(Cli, GenCorpusIsByteDeterministic) {
  run({"gen-corpus", "--sessions-per-class", "5", "--turns", "6", "--seed", "2", "--out",
       (dir_ / "again.jsonl").string()});
  EXPECT_EQ(slurp(corpus_), slurp(dir_ / "again.jsonl"));
}

TEST_F(Cli, UsageErrorsExitTwo) {
  const auto out = (dir_ / "x.jsonl").string();
  EXPECT_EQ(run({"gen-corpus", "--class-counts", "1,2,3", "--out", out}).code, 2);
  EXPECT_EQ(run({"gen-corpus", "--class-counts", "1,0,3,4", "--out", out}).code, 2);
  EXPECT_EQ(run({"gen-corpus", "--sessions-per-class", "2", "--class-counts", "1,1,1,1", "--out", out}).code, 2);
  EXPECT_EQ(run({"gen-corpus", "--out", out}).code, 2);
  EXPECT_EQ(run({"gen-corpus", "--sessions-per-class", "2", "--out", out, "--bogus"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(train({"--iters", "0"}).code, 2);
  EXPECT_EQ(train({}, "gru").code, 2);
  EXPECT_EQ(train({"--momentum", "1.5"}).code, 2);
  EXPECT_EQ(run({"score", "--corpus", corpus_, "--provider", "nonsense", "--out", out}).code, 2);
}

TEST_F(Cli, ScoreRowsAndRange) {
  const auto csv = dir_ / "scores.csv";
  const auto r = run({"score", "--corpus", corpus_, "--out", csv.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("rows=240"), std::string::npos) << r.out;
  std::ifstream in(csv);
  const auto rows = read_scores_csv(in);
  ASSERT_EQ(rows.size(), 240u);
  for (const auto& row : rows)
    for (double v : row.scores) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
}

TEST_F(Cli, ProviderFailureExitsOneWithContext) {
  // Vectors for the inventory only: the first transcript turn is missing.
  const auto vecs = dir_ / "v.jsonl";
  std::vector<std::string> texts;
  for (Role role : {Role::patient, Role::therapist})
    for (const auto& it : bundled_inventory().items(role)) texts.push_back(it.text);
  HashEmbeddingProvider h(8);
  write_embedding_file(vecs, texts, h.embed_batch(texts));
  const auto r = run({"score", "--corpus", corpus_, "--provider", "file:" + vecs.string(), "--out",
                      (dir_ / "s.csv").string()});
  EXPECT_EQ(r.code, 1);
  const auto first = load_corpus(corpus_).front().session_id;
  EXPECT_NE(r.err.find("session " + first), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("pair 0"), std::string::npos) << r.err;
}

TEST_F(Cli, TrainEchoesDefaultsAndEvalRuns) {
  const auto t = train();
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("lr=0.001 momentum=0.9 iters=20"), std::string::npos) << t.out;
  EXPECT_NE(t.out.find("failure_flag="), std::string::npos);
  EXPECT_EQ(slurp(dir_ / "log.csv").rfind("# config_digest=", 0), 0u);
  const auto e = run({"eval", "--checkpoint", ckpt(), "--corpus", corpus_, "--n", "200", "--out",
                      (dir_ / "cm.csv").string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("accuracy="), std::string::npos);
  std::ifstream cm(dir_ / "cm.csv");
  EXPECT_EQ(read_confusion_csv(cm).total(), 200u);
}

TEST_F(Cli, EvalRejectsTamperedCheckpoint) {
  ASSERT_EQ(train().code, 0);
  auto ck = load_checkpoint(ckpt());
  auto meta = nlohmann::json::parse(ck.metadata);
  meta["split_seed"] = meta["split_seed"].get<std::uint64_t>() + 1;
  ck.metadata = meta.dump();
  save_checkpoint(dir_ / "tampered.ckpt", ck);
  const auto e = run({"eval", "--checkpoint", (dir_ / "tampered.ckpt").string(), "--corpus", corpus_,
                      "--out", (dir_ / "cm.csv").string()});
  EXPECT_EQ(e.code, 1);
  EXPECT_NE(e.err.find("digest"), std::string::npos) << e.err;
}

TEST_F(Cli, DivergenceIsAResultNotACrash) {
  const auto t = train({"--lr", "1e305"}, "transformer");
  EXPECT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("failure_flag=F"), std::string::npos) << t.out;
}

TEST_F(Cli, AblateSmallGrid) {
  const auto r = run({"ablate", "--corpus", corpus_, "--providers", "hash:16", "--iters", "10",
                      "--eval-samples", "40", "--out-dir", (dir_ / "ab").string(), "--jobs", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir_ / "ab" / "summary.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir_ / "ab" / "summary.txt"));
  EXPECT_NE(r.out.find("Embedding RNN"), std::string::npos);
}

}  // namespace
}  // namespace wat
