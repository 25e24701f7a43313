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

#include "wat/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "wat/error.hpp"
#include "wat/hash.hpp"
#include "wat/text.hpp"

namespace wat {

using nlohmann::json;

std::string_view role_name(Role r) {
  return r == Role::patient ? "patient" : "therapist";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "patient") return Role::patient;
  if (s == "therapist") return Role::therapist;
  return std::nullopt;
}

std::string_view condition_name(Condition c) {
  switch (c) {
    case Condition::anxiety: return "anxiety";
    case Condition::depression: return "depression";
    case Condition::schizophrenia: return "schizophrenia";
    case Condition::suicidal: return "suicidal";
  }
  return "?";
}

std::optional<Condition> parse_condition(std::string_view s) {
  for (Condition c : kAllConditions) {
    if (condition_name(c) == s) return c;
  }
  return std::nullopt;
}

Condition condition_from_code(std::size_t code) {
  if (code >= kNumConditions) {
    throw ValidationError("condition code out of range: " + std::to_string(code));
  }
  return kAllConditions[code];
}

std::vector<TurnPair> pair_turns(const std::vector<Turn>& raw) {
  std::vector<Turn> merged;
  for (const Turn& t : raw) {
    std::string text = trim(t.text);
    if (!merged.empty() && merged.back().speaker == t.speaker) {
      if (!text.empty()) {
        std::string& acc = merged.back().text;
        acc = acc.empty() ? std::move(text) : acc + " " + text;
      }
    } else {
      merged.push_back({t.speaker, std::move(text)});
    }
  }

  std::vector<TurnPair> pairs;
  for (std::size_t i = 0; i < merged.size();) {
    TurnPair p;
    p.index = pairs.size();
    if (merged[i].speaker == Role::patient) {
      p.patient_turn = std::move(merged[i]);
      ++i;
      if (i < merged.size() && merged[i].speaker == Role::therapist) {
        p.therapist_turn = std::move(merged[i]);
        ++i;
      }
    } else {
      p.therapist_turn = std::move(merged[i]);
      ++i;
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

namespace {

Session parse_session_line(const std::string& line, std::size_t lineno) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError(lineno, "expected a JSON object");
  for (const char* field : {"session_id", "condition", "turns"}) {
    if (!j.contains(field)) {
      throw ParseError(lineno, std::string("missing field '") + field + "'");
    }
  }
  if (!j["session_id"].is_string() || !j["condition"].is_string() ||
      !j["turns"].is_array()) {
    throw ParseError(lineno, "field types: session_id and condition must be "
                             "strings, turns an array");
  }

  Session s;
  s.session_id = j["session_id"].get<std::string>();
  if (s.session_id.empty()) {
    throw ValidationError("line " + std::to_string(lineno) + ": empty session_id");
  }
  const auto cond_str = j["condition"].get<std::string>();
  const auto cond = parse_condition(cond_str);
  if (!cond) {
    throw ValidationError("line " + std::to_string(lineno) +
                          ": unknown condition '" + cond_str + "'");
  }
  s.condition = *cond;

  std::vector<Turn> raw;
  for (const auto& t : j["turns"]) {
    if (!t.is_object() || !t.contains("speaker") || !t.contains("text") ||
        !t["speaker"].is_string() || !t["text"].is_string()) {
      throw ParseError(lineno, "each turn needs string fields 'speaker' and 'text'");
    }
    const auto sp = parse_role(t["speaker"].get<std::string>());
    if (!sp) {
      throw ParseError(lineno, "unknown speaker '" +
                                   t["speaker"].get<std::string>() + "'");
    }
    raw.push_back({*sp, t["text"].get<std::string>()});
  }
  s.pairs = pair_turns(raw);
  if (s.pairs.empty()) {
    throw ValidationError("line " + std::to_string(lineno) + ": session '" +
                          s.session_id + "' has no turns");
  }
  return s;
}

}  // namespace

std::vector<Session> parse_corpus(std::istream& in) {
  std::vector<Session> sessions;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    Session s = parse_session_line(t, lineno);
    if (!ids.insert(s.session_id).second) {
      throw ValidationError("line " + std::to_string(lineno) +
                            ": duplicate session_id '" + s.session_id + "'");
    }
    sessions.push_back(std::move(s));
  }
  if (sessions.empty()) throw ValidationError("corpus contains no sessions");
  return sessions;
}

std::vector<Session> load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open corpus file " + path.string());
  return parse_corpus(in);
}

void write_corpus(std::ostream& out, const std::vector<Session>& sessions,
                  std::string_view header) {
  if (!header.empty()) out << "# " << header << '\n';
  for (const Session& s : sessions) {
    json turns = json::array();
    for (const TurnPair& p : s.pairs) {
      turns.push_back({{"speaker", "patient"}, {"text", p.patient_turn.text}});
      turns.push_back({{"speaker", "therapist"}, {"text", p.therapist_turn.text}});
    }
    json j;
    j["session_id"] = s.session_id;
    j["condition"] = condition_name(s.condition);
    j["turns"] = std::move(turns);
    out << j.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path,
                 const std::vector<Session>& sessions, std::string_view header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write corpus file " + path.string());
  write_corpus(out, sessions, header);
}

CorpusSplit split_corpus(const std::vector<Session>& sessions,
                         double test_fraction, std::uint64_t seed) {
  if (sessions.size() < 2) {
    throw ValidationError("split needs at least 2 sessions, got " +
                          std::to_string(sessions.size()));
  }
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw ValidationError("test fraction must be in (0, 1)");
  }
  const std::size_t n = sessions.size();

  std::array<std::vector<std::size_t>, kNumConditions> by_class;
  for (std::size_t i = 0; i < n; ++i) {
    by_class[condition_code(sessions[i].condition)].push_back(i);
  }

  auto total = static_cast<std::size_t>(std::llround(n * test_fraction));
  total = std::clamp<std::size_t>(total, 1, n - 1);

  // Largest-remainder apportionment of the test total across classes.
  std::array<std::size_t, kNumConditions> quota{};
  std::array<double, kNumConditions> remainder{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < kNumConditions; ++c) {
    const double exact = by_class[c].size() * (static_cast<double>(total) / n);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - quota[c];
    assigned += quota[c];
  }
  std::array<std::size_t, kNumConditions> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t k = 0; assigned < total; k = (k + 1) % kNumConditions) {
    const std::size_t c = order[k];
    if (quota[c] < by_class[c].size()) {
      ++quota[c];
      ++assigned;
    }
  }

  std::vector<bool> is_test(n, false);
  for (std::size_t c = 0; c < kNumConditions; ++c) {
    auto idx = by_class[c];
    Rng rng(derive_seed(seed, condition_name(kAllConditions[c])));
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < quota[c]; ++k) is_test[idx[k]] = true;
  }

  CorpusSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    (is_test[i] ? split.test : split.train).push_back(sessions[i].session_id);
  }
  return split;
}

Session truncate_session(const Session& session, std::size_t max_pairs) {
  if (max_pairs == 0) throw ValidationError("max_pairs must be >= 1");
  Session out;
  out.session_id = session.session_id;
  out.condition = session.condition;
  const std::size_t k = std::min(max_pairs, session.pairs.size());
  out.pairs.assign(session.pairs.begin(), session.pairs.begin() + k);
  return out;
}

ClassPools make_class_pools(const std::vector<Session>& sessions,
                            const std::vector<std::string>& ids) {
  std::unordered_map<std::string_view, const Session*> by_id;
  for (const Session& s : sessions) by_id.emplace(s.session_id, &s);
  ClassPools pools;
  for (const auto& id : ids) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw ValidationError("unknown session id '" + id + "'");
    pools[condition_code(it->second->condition)].push_back(it->second);
  }
  return pools;
}

ClassPools make_class_pools(const std::vector<Session>& sessions) {
  ClassPools pools;
  for (const Session& s : sessions) pools[condition_code(s.condition)].push_back(&s);
  return pools;
}

std::array<std::size_t, kNumConditions> class_counts(
    const std::vector<Session>& sessions) {
  std::array<std::size_t, kNumConditions> counts{};
  for (const Session& s : sessions) ++counts[condition_code(s.condition)];
  return counts;
}

}  // namespace wat
