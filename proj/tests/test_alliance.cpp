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

#include <mutex>
#include <set>
#include <sstream>

#include "support/test_support.hpp"
#include "wat/alliance.hpp"
#include "wat/error.hpp"
#include "wat/synthetic.hpp"

namespace wat {
namespace {

using test::brute_cosine;
using test::make_session;

// Hash provider that logs every text reaching the backend.
class RecordingProvider final : public EmbeddingProvider {
 public:
  std::size_t dim() const override { return 64; }
  std::string label() const override { return "recording"; }
  std::vector<std::string> seen() const {
    std::lock_guard lock(mu_);
    return seen_;
  }

 protected:
  std::vector<EmbeddingVector> compute(std::span<const std::string> texts) override {
    std::lock_guard lock(mu_);
    seen_.insert(seen_.end(), texts.begin(), texts.end());
    std::vector<EmbeddingVector> out;
    for (const auto& t : texts) out.push_back(inner_.hash_text(t));
    return out;
  }

 private:
  HashEmbeddingProvider inner_{64};
  mutable std::mutex mu_;
  std::vector<std::string> seen_;
};

EmbeddingVector random_vec(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> n(0, 1);
  EmbeddingVector v;
  for (std::size_t i = 0; i < d; ++i) v.values.push_back(n(rng));
  return v;
}

TEST(Cosine, Examples) {
  EXPECT_EQ(cosine(std::vector<double>{1, 0}, std::vector<double>{1, 0}), 1.0);
  EXPECT_EQ(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(cosine(std::vector<double>{1, 1}, std::vector<double>{1, 0}), 0.7071067811865475);
  EXPECT_EQ(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}), 0.0);
  EXPECT_EQ(cosine(std::vector<double>{3, 4}, std::vector<double>{0, 0}), 0.0);
  EXPECT_THROW(cosine(std::vector<double>{1}, std::vector<double>{1, 0}), ShapeError);
}

TEST(Cosine, ScaleInvariantAndBounded) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> alpha(1e-3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_vec(rng, 16), b = random_vec(rng, 16);
    auto sa = a;
    const double k = alpha(rng);
    for (double& x : sa.values) x *= k;
    const double c = cosine(a, b);
    EXPECT_NEAR(cosine(sa, b), c, 1e-12);
    EXPECT_LE(std::abs(c), 1.0);
  }
  EXPECT_LE(cosine(std::vector<double>{1e-200, 1e-200}, std::vector<double>{1e-200, 1e-200}), 1.0);
}

TEST(ScoreTurn, MatchesBruteForceOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t d = 1 + rng() % 96;
    const std::size_t m = 1 + rng() % 40;
    const auto turn = random_vec(rng, d);
    std::vector<EmbeddingVector> items;
    for (std::size_t j = 0; j < m; ++j) items.push_back(random_vec(rng, d));
    const auto s = score_turn(turn, items);
    ASSERT_EQ(s.size(), m);
    for (std::size_t j = 0; j < m; ++j) {
      EXPECT_NEAR(s.scores[j], brute_cosine(turn.values, items[j].values), 1e-12);
    }
  }
}

TEST(ScoreTurn, ZeroEmbeddingGivesZeroScores) {
  HashEmbeddingProvider p(64);
  const auto inv = embed_inventory(p, bundled_inventory());
  const auto s = score_turn(p.embed(""), inv.patient);
  EXPECT_EQ(s.scores, std::vector<double>(36, 0.0));
}

TEST(ScoreTurn, ItemTextScoresOneAgainstItself) {
  HashEmbeddingProvider p(64);
  AllianceEncoder enc(p, bundled_inventory());
  const auto& item = bundled_inventory().patient_items[6];
  ASSERT_EQ(item.index, 7u);
  const auto s = enc.score_text(item.text, Role::patient);
  EXPECT_NEAR(s.scores[6], 1.0, 1e-12);
  for (double v : s.scores) {
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(ScoreTurn, DimensionMismatchIsError) {
  std::vector<EmbeddingVector> items{EmbeddingVector{{1, 0, 0}}};
  EXPECT_THROW(score_turn(EmbeddingVector{{1, 0}}, items), ShapeError);
}

TEST(ScoreSession, TrajectoryShapesAndRaters) {
  HashEmbeddingProvider p(64);
  AllianceEncoder enc(p, bundled_inventory());
  const auto s = make_session("x", Condition::anxiety, {{"a", "b"}, {"c d", ""}, {"", "e"}});
  const auto t = enc.score_session(s);
  ASSERT_EQ(t.patient.size(), 3u);
  ASSERT_EQ(t.therapist.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.patient[i].rater, Role::patient);
    EXPECT_EQ(t.therapist[i].rater, Role::therapist);
    EXPECT_EQ(t.patient[i].pair_index, i);
    EXPECT_EQ(t.patient[i].size(), 36u);
  }
  EXPECT_EQ(t.therapist[1].scores, std::vector<double>(36, 0.0));
}

TEST(ScoreSession, InventoryEmbeddedExactlyOnce) {
  RecordingProvider p;
  AllianceEncoder enc(p, bundled_inventory());
  const auto after_init = p.seen().size();
  EXPECT_EQ(after_init, 72u);
  std::set<std::string> items;
  for (Role r : {Role::patient, Role::therapist})
    for (const auto& it : bundled_inventory().items(r)) items.insert(it.text);
  const auto s = make_session("x", Condition::anxiety, {{"hello there", "how are you"}, {"fine", "good"}});
  enc.score_session(s);
  enc.score_session(s);
  const auto seen = p.seen();
  for (std::size_t i = after_init; i < seen.size(); ++i) EXPECT_FALSE(items.count(seen[i])) << seen[i];
}

TEST(ScoreSession, PermutingPairsPermutesTrajectories) {
  HashEmbeddingProvider p(64);
  AllianceEncoder enc(p, bundled_inventory());
  const auto a = make_session("x", Condition::anxiety, {{"one", "two"}, {"three", "four"}, {"five", "six"}});
  const auto b = make_session("x", Condition::anxiety, {{"five", "six"}, {"one", "two"}, {"three", "four"}});
  const auto ta = enc.score_session(a), tb = enc.score_session(b);
  const std::size_t perm[3] = {2, 0, 1};
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(tb.patient[i].scores, ta.patient[perm[i]].scores);
    EXPECT_EQ(tb.therapist[i].scores, ta.therapist[perm[i]].scores);
  }
}

TEST(ScoreSession, RaterRoutingNeverCrossesInventories) {
  HashEmbeddingProvider p(64);
  const auto inv = embed_inventory(p, bundled_inventory());
  const auto s = make_session("x", Condition::anxiety, {{"I feel we agree", "we work on goals"}, {"trust", "plan"}});
  const auto emb = embed_session(p, s);
  const auto clean = score_embedded_session(s, emb, inv);

  // Poison one rater's item embeddings: any read from the wrong side would
  // surface as NaN in the other rater's scores.
  auto poisoned_t = inv;
  for (auto& v : poisoned_t.therapist) v.values.assign(64, std::nan(""));
  const auto pt = score_embedded_session(s, emb, poisoned_t);
  auto poisoned_p = inv;
  for (auto& v : poisoned_p.patient) v.values.assign(64, std::nan(""));
  const auto pp = score_embedded_session(s, emb, poisoned_p);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(pt.patient[i].scores, clean.patient[i].scores);
    EXPECT_EQ(pp.therapist[i].scores, clean.therapist[i].scores);
  }
}

TEST(ScoreSession, PlantedItemPhraseRaisesThatItemsScore) {
  GeneratorSpec g;
  g.class_counts = {1, 1, 1, 1};
  g.turns = 12;
  g.marker_rate = 0.0;
  g.seed = 4;
  auto s = generate_synthetic_corpus(g).front();
  const auto& item = bundled_inventory().patient_items[6];
  s.pairs[4].patient_turn.text = item.text;
  HashEmbeddingProvider p(64);
  AllianceEncoder enc(p, bundled_inventory());
  const auto t = enc.score_session(s);
  double mean = 0;
  for (const auto& v : t.patient) mean += v.scores[6];
  mean /= static_cast<double>(t.length());
  EXPECT_GT(t.patient[4].scores[6], mean);
}

TEST(ScoreSession, ProviderFailureCarriesSessionContext) {
  test::TempDir dir;
  HashEmbeddingProvider h(8);
  std::vector<std::string> texts;
  for (Role r : {Role::patient, Role::therapist})
    for (const auto& it : bundled_inventory().items(r)) texts.push_back(it.text);
  texts.push_back("known");
  write_embedding_file(dir / "v.jsonl", texts, h.embed_batch(texts));
  FileEmbeddingProvider f(dir / "v.jsonl");
  AllianceEncoder enc(f, bundled_inventory());
  const auto s = make_session("sess-9", Condition::suicidal, {{"known", "known"}, {"known", "mystery"}});
  try {
    enc.score_session(s);
    FAIL();
  } catch (const ProviderError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("sess-9"), std::string::npos) << msg;
    EXPECT_NE(msg.find("therapist"), std::string::npos) << msg;
    EXPECT_NE(msg.find("mystery"), std::string::npos) << msg;
  }
}

TEST(SubscaleMeans, AveragesMaskedEntries) {
  AllianceScoreVector v;
  for (std::size_t j = 0; j < 36; ++j) v.scores.push_back(static_cast<double>(j + 1));
  const auto m = subscale_means(v, bundled_inventory());
  for (auto s : {Subscale::task, Subscale::bond, Subscale::goal}) {
    double sum = 0;
    const auto mask = subscale_mask(bundled_inventory(), s);
    for (auto idx : mask) sum += static_cast<double>(idx);
    EXPECT_DOUBLE_EQ(m[static_cast<std::size_t>(s)], sum / static_cast<double>(mask.size()));
  }
  AllianceScoreVector short_v;
  short_v.scores = {1, 2};
  EXPECT_THROW(subscale_means(short_v, bundled_inventory()), ShapeError);
}

TEST(ScoreCsv, RowsPerPairAndRoundTrip) {
  HashEmbeddingProvider p(64);
  AllianceEncoder enc(p, bundled_inventory());
  const auto s = make_session("s1", Condition::depression, {{"I feel heard", ""}, {"x", "y"}, {"z", "w"}});
  const auto rows = score_rows(enc.score_session(s), bundled_inventory());
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0].rater, Role::patient);
  EXPECT_EQ(rows[1].rater, Role::therapist);
  EXPECT_EQ(rows[1].scores, std::vector<double>(36, 0.0));
  for (const auto& r : rows)
    for (double v : r.scores) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  std::ostringstream out;
  write_scores_csv(out, rows, 36, "config_digest=0123");
  const std::string text = out.str();
  EXPECT_EQ(text.rfind("# config_digest=0123\n", 0), 0u);
  const std::string header_line = text.substr(text.find('\n') + 1, text.find('\n', text.find('\n') + 1) - text.find('\n') - 1);
  EXPECT_EQ(header_line.rfind("session_id,pair_index,rater,w_1,", 0), 0u);
  EXPECT_NE(header_line.find("w_36,task_mean,bond_mean,goal_mean"), std::string::npos);
  std::istringstream in(text);
  EXPECT_EQ(read_scores_csv(in), rows);
}

TEST(ScoreCsv, MalformedInputRejected) {
  std::istringstream empty("");
  EXPECT_THROW(read_scores_csv(empty), ParseError);
  std::istringstream no_header("s1,0,patient,0.5\n");
  EXPECT_THROW(read_scores_csv(no_header), ParseError);
}

}  // namespace
}  // namespace wat
