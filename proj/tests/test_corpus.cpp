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

#include <set>
#include <sstream>

#include "support/test_support.hpp"
#include "wat/corpus.hpp"
#include "wat/error.hpp"

namespace wat {
namespace {

using test::counted_sessions;
using test::make_session;

std::vector<Session> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

std::string line(const std::string& id, const std::string& cond, const std::string& turns) {
  return R"({"session_id":")" + id + R"(","condition":")" + cond + R"(","turns":)" + turns +
         "}\n";
}

TEST(Conditions, StableCodes) {
  EXPECT_EQ(condition_code(Condition::anxiety), 0u);
  EXPECT_EQ(condition_code(Condition::depression), 1u);
  EXPECT_EQ(condition_code(Condition::schizophrenia), 2u);
  EXPECT_EQ(condition_code(Condition::suicidal), 3u);
  for (auto c : kAllConditions) {
    EXPECT_EQ(parse_condition(condition_name(c)), c);
    EXPECT_EQ(condition_from_code(condition_code(c)), c);
  }
  EXPECT_FALSE(parse_condition("bipolar").has_value());
  EXPECT_THROW(condition_from_code(4), ValidationError);
}

TEST(PairTurns, AlternatingTurnsPairDirectly) {
  auto s = parse(line("a", "anxiety",
                      R"([{"speaker":"patient","text":"p1"},{"speaker":"therapist","text":"t1"},)"
                      R"({"speaker":"patient","text":"p2"},{"speaker":"therapist","text":"t2"}])"));
  ASSERT_EQ(s.size(), 1u);
  ASSERT_EQ(s[0].length(), 2u);
  EXPECT_EQ(s[0].pairs[0].patient_turn.text, "p1");
  EXPECT_EQ(s[0].pairs[1].therapist_turn.text, "t2");
  EXPECT_EQ(s[0].pairs[1].index, 1u);
}

TEST(PairTurns, ConsecutiveSameSpeakerMerged) {
  auto pairs = pair_turns({{Role::patient, "P1"}, {Role::patient, "P2"}, {Role::therapist, "T1"}});
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].patient_turn.text, "P1 P2");
  EXPECT_EQ(pairs[0].therapist_turn.text, "T1");
}

TEST(PairTurns, DanglingTurnGetsEmptyPartner) {
  auto pairs = pair_turns({{Role::patient, "P1"}, {Role::therapist, "T1"}, {Role::patient, "P2"}});
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[1].patient_turn.text, "P2");
  EXPECT_EQ(pairs[1].therapist_turn.text, "");
  EXPECT_EQ(pairs[1].therapist_turn.speaker, Role::therapist);
}

TEST(PairTurns, LeadingTherapistTurnGetsEmptyPatient) {
  auto pairs = pair_turns({{Role::therapist, "T0"}, {Role::patient, "P1"}});
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].patient_turn.text, "");
  EXPECT_EQ(pairs[0].therapist_turn.text, "T0");
  EXPECT_EQ(pairs[1].patient_turn.text, "P1");
}

TEST(PairTurns, TextsAreTrimmedAndEmptyPiecesSkippedInMerge) {
  auto pairs = pair_turns({{Role::patient, "  a "}, {Role::patient, "   "}, {Role::patient, "b"}});
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].patient_turn.text, "a b");
}

TEST(PairTurns, MergeThenPairProperty) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    std::vector<Turn> raw;
    std::multiset<std::string> texts;
    for (std::size_t i = 0; i < n; ++i) {
      const Role r = rng() % 2 ? Role::patient : Role::therapist;
      std::string text = rng() % 5 == 0 ? "" : "w" + std::to_string(trial) + "_" + std::to_string(i);
      if (!text.empty()) texts.insert(text);
      raw.push_back({r, text});
    }
    const auto pairs = pair_turns(raw);
    ASSERT_FALSE(pairs.empty());
    std::string joined;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      EXPECT_EQ(pairs[i].index, i);
      EXPECT_EQ(pairs[i].patient_turn.speaker, Role::patient);
      EXPECT_EQ(pairs[i].therapist_turn.speaker, Role::therapist);
      joined += " " + pairs[i].patient_turn.text + " " + pairs[i].therapist_turn.text;
    }
    std::istringstream words(joined);
    std::multiset<std::string> seen;
    for (std::string w; words >> w;) seen.insert(w);
    EXPECT_EQ(seen, texts);
  }
}

TEST(ParseCorpus, MalformedLineReportsLineNumber) {
  const std::string text = line("a", "anxiety", R"([{"speaker":"patient","text":"x"}])") +
                           "{not json\n";
  try {
    parse(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ParseCorpus, MissingFieldIsParseError) {
  EXPECT_THROW(parse(R"({"session_id":"a","turns":[]})" "\n"), ParseError);
  EXPECT_THROW(parse(line("a", "anxiety", R"([{"speaker":"doctor","text":"x"}])")), ParseError);
}

TEST(ParseCorpus, UnknownConditionIsValidationError) {
  EXPECT_THROW(parse(line("a", "bipolar", R"([{"speaker":"patient","text":"x"}])")),
               ValidationError);
}

TEST(ParseCorpus, EmptyFileIsValidationError) {
  EXPECT_THROW(parse(""), ValidationError);
  EXPECT_THROW(parse("# only a comment\n\n"), ValidationError);
}

TEST(ParseCorpus, DuplicateIdAndEmptySessionRejected) {
  const std::string one = line("a", "anxiety", R"([{"speaker":"patient","text":"x"}])");
  EXPECT_THROW(parse(one + one), ValidationError);
  EXPECT_THROW(parse(line("b", "anxiety", "[]")), ValidationError);
  EXPECT_THROW(parse(line("", "anxiety", R"([{"speaker":"patient","text":"x"}])")),
               ValidationError);
}

TEST(ParseCorpus, MissingFileIsError) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl"), Error);
}

TEST(CorpusFile, RoundTripPreservesSessions) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Session> sessions;
    const std::size_t n = 1 + rng() % 6;
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<std::pair<std::string, std::string>> pairs;
      const std::size_t t = 1 + rng() % 5;
      for (std::size_t i = 0; i < t; ++i) {
        pairs.emplace_back(rng() % 4 ? "p \"quoted\" ünï " + std::to_string(rng() % 100) : "",
                           rng() % 4 ? "t\\" + std::to_string(rng() % 100) : "");
      }
      sessions.push_back(make_session("id" + std::to_string(s), kAllConditions[rng() % 4], pairs));
    }
    std::ostringstream out;
    write_corpus(out, sessions, "config_digest=abc");
    EXPECT_EQ(out.str().rfind("# config_digest=abc\n", 0), 0u);
    EXPECT_EQ(parse(out.str()), sessions);
  }
}

TEST(CorpusFile, SaveLoadRoundTrip) {
  test::TempDir dir;
  const auto sessions = counted_sessions({2, 1, 1, 3});
  save_corpus(dir / "c.jsonl", sessions);
  EXPECT_EQ(load_corpus(dir / "c.jsonl"), sessions);
}

TEST(SplitCorpus, TenSessionsFractionPointTwo) {
  const auto sessions = counted_sessions({3, 3, 2, 2});
  const auto split = split_corpus(sessions, 0.2, 7);
  EXPECT_EQ(split.test.size(), 2u);
  EXPECT_EQ(split.train.size(), 8u);
  std::set<std::string> tr(split.train.begin(), split.train.end());
  for (const auto& id : split.test) EXPECT_FALSE(tr.count(id));
}

TEST(SplitCorpus, ImbalancedCountsStratified) {
  const auto sessions = counted_sessions({495, 373, 71, 12});
  const auto split = split_corpus(sessions, 0.2, 1);
  const auto pools = make_class_pools(sessions, split.test);
  const std::array<std::size_t, 4> expected{99, 75, 14, 2};
  for (std::size_t c = 0; c < 4; ++c) {
    EXPECT_LE(pools[c].size(), expected[c] + 1);
    EXPECT_GE(pools[c].size() + 1, expected[c]);
  }
  EXPECT_EQ(split.test.size(), 190u);
}

TEST(SplitCorpus, Deterministic) {
  const auto sessions = counted_sessions({20, 15, 5, 3});
  const auto a = split_corpus(sessions, 0.3, 42);
  const auto b = split_corpus(sessions, 0.3, 42);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_EQ(a.seed, 42u);
}

TEST(SplitCorpus, DisjointCoveringAndSizedForAnySeedAndFraction) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::array<std::size_t, 4> counts{};
    std::size_t total = 0;
    while (total < 2) {
      for (auto& c : counts) c = rng() % 8;
      total = counts[0] + counts[1] + counts[2] + counts[3];
    }
    const auto sessions = counted_sessions(counts);
    const double frac = 0.05 + 0.9 * std::uniform_real_distribution<double>(0, 1)(rng);
    const auto split = split_corpus(sessions, frac, rng());
    std::set<std::string> all;
    for (const auto& id : split.train) all.insert(id);
    for (const auto& id : split.test) EXPECT_TRUE(all.insert(id).second);
    EXPECT_EQ(all.size(), total);
    EXPECT_GE(split.test.size(), 1u);
    EXPECT_GE(split.train.size(), 1u);
    EXPECT_LE(std::abs(static_cast<double>(split.test.size()) - frac * total), 1.0 + 1e-9)
        << "fraction " << frac << " total " << total;
  }
}

TEST(SplitCorpus, TooFewSessionsRejected) {
  EXPECT_THROW(split_corpus(counted_sessions({1, 0, 0, 0}), 0.2, 1), ValidationError);
  EXPECT_THROW(split_corpus(counted_sessions({0, 0, 0, 0}), 0.2, 1), ValidationError);
}

TEST(Truncate, CapsLongSessions) {
  std::vector<std::pair<std::string, std::string>> pairs(120, {"p", "t"});
  const auto s = make_session("x", Condition::anxiety, pairs);
  EXPECT_EQ(truncate_session(s, 50).length(), 50u);
  std::vector<std::pair<std::string, std::string>> few(10, {"p", "t"});
  const auto short_s = make_session("y", Condition::anxiety, few);
  EXPECT_EQ(truncate_session(short_s, 50), short_s);
  const auto one = truncate_session(s, 1);
  ASSERT_EQ(one.length(), 1u);
  EXPECT_EQ(one.pairs[0], s.pairs[0]);
}

TEST(Truncate, Idempotent) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<std::string, std::string>> pairs(1 + rng() % 80, {"p", "t"});
    const auto s = make_session("x", Condition::depression, pairs);
    const std::size_t k = 1 + rng() % 90;
    const auto once = truncate_session(s, k);
    EXPECT_EQ(truncate_session(once, k), once);
    EXPECT_EQ(once.length(), std::min(k, s.length()));
  }
}

TEST(ClassPools, GroupsByConditionInCorpusOrder) {
  const auto sessions = counted_sessions({2, 0, 1, 1});
  const auto pools = make_class_pools(sessions);
  EXPECT_EQ(pools[0].size(), 2u);
  EXPECT_TRUE(pools[1].empty());
  EXPECT_EQ(pools[0][0]->session_id, "s0");
  EXPECT_EQ(class_counts(sessions), (std::array<std::size_t, 4>{2, 0, 1, 1}));
  EXPECT_THROW(make_class_pools(sessions, {"missing"}), ValidationError);
}

}  // namespace
}  // namespace wat
