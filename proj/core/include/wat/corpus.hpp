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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wat {

// Speaker of a dialogue turn; also the rater of an inventory item.
enum class Role { patient = 0, therapist = 1 };

std::string_view role_name(Role r);
std::optional<Role> parse_role(std::string_view s);

enum class Condition { anxiety = 0, depression = 1, schizophrenia = 2, suicidal = 3 };

inline constexpr std::size_t kNumConditions = 4;
inline constexpr std::array<Condition, kNumConditions> kAllConditions = {
    Condition::anxiety, Condition::depression, Condition::schizophrenia,
    Condition::suicidal};

std::string_view condition_name(Condition c);
std::optional<Condition> parse_condition(std::string_view s);
inline std::size_t condition_code(Condition c) { return static_cast<std::size_t>(c); }
Condition condition_from_code(std::size_t code);

struct Turn {
  Role speaker = Role::patient;
  std::string text;

  bool operator==(const Turn&) const = default;
};

// One time step: a patient turn followed by the therapist's reply.
struct TurnPair {
  Turn patient_turn{Role::patient, {}};
  Turn therapist_turn{Role::therapist, {}};
  std::size_t index = 0;

  bool operator==(const TurnPair&) const = default;
};

struct Session {
  std::string session_id;
  Condition condition = Condition::anxiety;
  std::vector<TurnPair> pairs;

  std::size_t length() const { return pairs.size(); }
  bool operator==(const Session&) const = default;
};

struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> test;
  std::uint64_t seed = 0;
};

// Merges consecutive same-speaker turns (nonempty texts joined by one space),
// then pairs patient->therapist. A turn without a partner gets an empty-text
// partner of the opposite role. Texts are trimmed.
std::vector<TurnPair> pair_turns(const std::vector<Turn>& raw);

// Transcript JSONL: one session per line. Blank lines and lines starting
// with '#' are ignored.
std::vector<Session> parse_corpus(std::istream& in);
std::vector<Session> load_corpus(const std::filesystem::path& path);

// Writes sessions as raw alternating turns, including empty ones, so that
// parse_corpus reproduces the same pairs. \p header, if nonempty, is written
// as a leading '#' comment line.
void write_corpus(std::ostream& out, const std::vector<Session>& sessions,
                  std::string_view header = {});
void save_corpus(const std::filesystem::path& path,
                 const std::vector<Session>& sessions,
                 std::string_view header = {});

// Stratified, seeded split. The total test count is round(N * fraction)
// clamped to [1, N-1]; per-class counts follow largest-remainder rounding.
CorpusSplit split_corpus(const std::vector<Session>& sessions,
                         double test_fraction, std::uint64_t seed);

Session truncate_session(const Session& session, std::size_t max_pairs);

// Sessions grouped by condition code, in corpus order.
using ClassPools = std::array<std::vector<const Session*>, kNumConditions>;
ClassPools make_class_pools(const std::vector<Session>& sessions,
                            const std::vector<std::string>& ids);
ClassPools make_class_pools(const std::vector<Session>& sessions);

std::array<std::size_t, kNumConditions> class_counts(
    const std::vector<Session>& sessions);

}  // namespace wat
