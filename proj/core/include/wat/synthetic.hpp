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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wat/corpus.hpp"
#include "wat/inventory.hpp"

namespace wat {

struct GeneratorSpec {
  std::array<std::size_t, kNumConditions> class_counts{4, 4, 4, 4};
  std::size_t turns = 60;  // turn pairs per session
  std::uint64_t seed = 1;
  // Fraction of patient turns that carry a condition marker phrase.
  double marker_rate = 0.5;
  std::size_t min_filler = 4;
  std::size_t max_filler = 10;

  void validate() const;
  std::string canonical() const;
};

// Tokens of one patient inventory item that occur in no other patient item
// and not in the filler vocabulary.
struct MarkerGroup {
  std::size_t item_index = 0;
  std::vector<std::string> tokens;
};

// Patient item j is linked to condition (j - 1) mod 4; each condition owns
// the marker groups of its linked items, so groups never overlap across
// conditions.
std::array<std::vector<MarkerGroup>, kNumConditions> condition_marker_groups(
    const Inventory& inventory);

// Class-neutral words used to pad every turn. A few common inventory
// function words are included so that unmarked turns still score nonzero.
std::span<const std::string_view> filler_vocabulary();

// Deterministic stand-in corpus: every turn is filler, and with probability
// marker_rate a patient turn also carries a phrase drawn from one of its
// condition's marker groups.
std::vector<Session> generate_synthetic_corpus(const GeneratorSpec& spec,
                                               const Inventory& inventory = bundled_inventory());

}  // namespace wat
