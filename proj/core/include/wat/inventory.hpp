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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wat/corpus.hpp"

namespace wat {

enum class Subscale { task = 0, bond = 1, goal = 2 };

inline constexpr std::size_t kDefaultInventorySize = 36;

std::string_view subscale_name(Subscale s);
std::optional<Subscale> parse_subscale(std::string_view s);

struct InventoryItem {
  std::size_t index = 1;  // 1-based
  Role rater = Role::patient;
  Subscale subscale = Subscale::task;
  std::string text;

  bool operator==(const InventoryItem&) const = default;
};

// Paired alliance inventory. Item j of both raters shares a subscale tag.
struct Inventory {
  std::vector<InventoryItem> patient_items;    // sorted by index
  std::vector<InventoryItem> therapist_items;  // sorted by index

  std::size_t size() const { return patient_items.size(); }
  const std::vector<InventoryItem>& items(Role rater) const {
    return rater == Role::patient ? patient_items : therapist_items;
  }
  bool operator==(const Inventory&) const = default;
};

// Inventory JSONL: one item object per line (rater, index, subscale, text).
// \p expected_size of 0 accepts any size m as long as both raters carry
// indices 1..m exactly once.
Inventory parse_inventory(std::istream& in,
                          std::size_t expected_size = kDefaultInventorySize);
Inventory load_inventory(const std::filesystem::path& path,
                         std::size_t expected_size = kDefaultInventorySize);
void write_inventory(std::ostream& out, const Inventory& inv);

// Placeholder 36+36 item inventory compiled into the library. Its statements
// are paraphrased stand-ins, not the licensed instrument text.
const Inventory& bundled_inventory();
std::string_view bundled_inventory_text();

// Indices (1-based, ascending) tagged with \p subscale.
std::vector<std::size_t> subscale_mask(const Inventory& inv, Subscale subscale);

// Canonical digest of the inventory contents.
std::string inventory_digest(const Inventory& inv);

}  // namespace wat
