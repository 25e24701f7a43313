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

#include "wat/synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <random>
#include <set>

#include "wat/error.hpp"
#include "wat/hash.hpp"
#include "wat/text.hpp"

namespace wat {

namespace {

constexpr std::string_view kFiller[] = {
    // shared with the inventory wording
    "i", "my", "the", "we", "and", "to", "feel",
    // class-neutral small talk
    "weather", "yesterday", "morning", "coffee", "kitchen", "train", "bus", "dog",
    "garden", "weekend", "sister", "brother", "cousin", "neighbor", "office", "email",
    "phone", "dinner", "lunch", "breakfast", "walk", "drive", "street", "market",
    "store", "movie", "music", "book", "newspaper", "television", "radio", "window",
    "door", "chair", "table", "car", "rain", "snow", "sunny", "cold", "warm", "tired",
    "busy", "quiet", "loud", "early", "late", "tomorrow", "tonight", "maybe", "really",
    "just", "kind", "sort", "thing", "stuff", "guess", "mean", "okay", "yeah", "well",
    "so", "um", "uh", "like", "anyway", "then", "there", "went", "came", "said", "told",
    "saw", "got", "had", "was", "were", "it", "this", "that", "they", "them", "she", "he",
    "her", "him", "at", "in", "on", "with", "after", "before", "again", "still", "also",
};

std::string capitalize(std::vector<std::string> words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out + ".";
}

}  // namespace

void GeneratorSpec::validate() const {
  std::size_t total = 0;
  for (auto n : class_counts) total += n;
  if (total == 0) throw ValidationError("generator: zero sessions requested");
  for (std::size_t c = 0; c < kNumConditions; ++c) {
    if (class_counts[c] == 0) {
      throw ValidationError("generator: condition '" +
                            std::string(condition_name(condition_from_code(c))) +
                            "' needs at least one session");
    }
  }
  if (turns < 1) throw ValidationError("generator: turns must be >= 1");
  if (!(marker_rate >= 0.0 && marker_rate <= 1.0)) {
    throw ValidationError("generator: marker_rate must be in [0, 1]");
  }
  if (min_filler < 1 || max_filler < min_filler) {
    throw ValidationError("generator: need 1 <= min_filler <= max_filler");
  }
}

std::string GeneratorSpec::canonical() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", marker_rate);
  std::string s = "counts=";
  for (std::size_t c = 0; c < kNumConditions; ++c) {
    s += (c ? "," : "") + std::to_string(class_counts[c]);
  }
  return s + ";turns=" + std::to_string(turns) + ";seed=" + std::to_string(seed) +
         ";marker_rate=" + buf + ";filler=" + std::to_string(min_filler) + "-" +
         std::to_string(max_filler);
}

std::span<const std::string_view> filler_vocabulary() { return kFiller; }

std::array<std::vector<MarkerGroup>, kNumConditions> condition_marker_groups(
    const Inventory& inventory) {
  const std::set<std::string_view> filler(std::begin(kFiller), std::end(kFiller));
  std::map<std::string, std::size_t> doc_freq;
  std::vector<std::vector<std::string>> item_tokens;
  for (const auto& item : inventory.patient_items) {
    auto toks = tokenize(item.text);
    std::set<std::string> uniq(toks.begin(), toks.end());
    for (const auto& t : uniq) ++doc_freq[t];
    item_tokens.push_back(std::move(toks));
  }
  std::array<std::vector<MarkerGroup>, kNumConditions> groups;
  for (std::size_t k = 0; k < item_tokens.size(); ++k) {
    MarkerGroup g;
    g.item_index = inventory.patient_items[k].index;
    for (const auto& t : item_tokens[k]) {
      if (doc_freq[t] == 1 && !filler.contains(t) &&
          std::find(g.tokens.begin(), g.tokens.end(), t) == g.tokens.end()) {
        g.tokens.push_back(t);
      }
    }
    if (!g.tokens.empty()) groups[(g.item_index - 1) % kNumConditions].push_back(std::move(g));
  }
  for (std::size_t c = 0; c < kNumConditions; ++c) {
    if (groups[c].empty()) {
      throw ValidationError("generator: inventory gives condition '" +
                            std::string(condition_name(condition_from_code(c))) +
                            "' no distinctive marker tokens");
    }
  }
  return groups;
}

std::vector<Session> generate_synthetic_corpus(const GeneratorSpec& spec,
                                               const Inventory& inventory) {
  spec.validate();
  const auto groups = condition_marker_groups(inventory);
  Rng rng(spec.seed);
  std::uniform_int_distribution<std::size_t> filler_len(spec.min_filler, spec.max_filler);
  std::uniform_int_distribution<std::size_t> filler_word(0, std::size(kFiller) - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  auto filler = [&] {
    std::vector<std::string> words(filler_len(rng));
    for (auto& w : words) w = std::string(kFiller[filler_word(rng)]);
    return words;
  };

  std::vector<Session> sessions;
  std::size_t serial = 0;
  for (std::size_t c = 0; c < kNumConditions; ++c) {
    const auto& own = groups[c];
    std::uniform_int_distribution<std::size_t> pick_group(0, own.size() - 1);
    for (std::size_t n = 0; n < spec.class_counts[c]; ++n) {
      Session s;
      char id[32];
      std::snprintf(id, sizeof(id), "syn-%05zu", ++serial);
      s.session_id = id;
      s.condition = condition_from_code(c);
      for (std::size_t i = 0; i < spec.turns; ++i) {
        TurnPair p;
        p.index = i;
        auto words = filler();
        if (coin(rng) < spec.marker_rate) {
          auto marker = own[pick_group(rng)].tokens;
          std::shuffle(marker.begin(), marker.end(), rng);
          std::uniform_int_distribution<std::size_t> keep((marker.size() + 1) / 2,
                                                          marker.size());
          marker.resize(keep(rng));
          std::uniform_int_distribution<std::size_t> at(0, words.size());
          words.insert(words.begin() + static_cast<std::ptrdiff_t>(at(rng)), marker.begin(),
                       marker.end());
        }
        p.patient_turn = {Role::patient, capitalize(std::move(words))};
        p.therapist_turn = {Role::therapist, capitalize(filler())};
        s.pairs.push_back(std::move(p));
      }
      sessions.push_back(std::move(s));
    }
  }
  return sessions;
}

}  // namespace wat
