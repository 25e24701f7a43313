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

#include "wat/inventory.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bundled_inventory.inc"
#include "wat/error.hpp"
#include "wat/hash.hpp"
#include "wat/text.hpp"

namespace wat {

using nlohmann::json;

std::string_view subscale_name(Subscale s) {
  switch (s) {
    case Subscale::task: return "task";
    case Subscale::bond: return "bond";
    case Subscale::goal: return "goal";
  }
  return "?";
}

std::optional<Subscale> parse_subscale(std::string_view s) {
  if (s == "task") return Subscale::task;
  if (s == "bond") return Subscale::bond;
  if (s == "goal") return Subscale::goal;
  return std::nullopt;
}

namespace {

InventoryItem parse_item(const std::string& line, std::size_t lineno) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rater") || !j.contains("index") ||
      !j.contains("subscale") || !j.contains("text")) {
    throw ParseError(lineno, "item needs fields rater, index, subscale, text");
  }
  if (!j["rater"].is_string() || !j["subscale"].is_string() ||
      !j["text"].is_string() || !j["index"].is_number_integer()) {
    throw ParseError(lineno, "item field types are wrong");
  }
  InventoryItem item;
  const auto rater = parse_role(j["rater"].get<std::string>());
  if (!rater) throw ParseError(lineno, "unknown rater '" + j["rater"].get<std::string>() + "'");
  const auto sub = parse_subscale(j["subscale"].get<std::string>());
  if (!sub) {
    throw ParseError(lineno, "unknown subscale '" + j["subscale"].get<std::string>() + "'");
  }
  const auto idx = j["index"].get<long long>();
  if (idx < 1) {
    throw ValidationError(std::string(role_name(*rater)) + " item " +
                          std::to_string(idx) + ": index must be >= 1");
  }
  item.rater = *rater;
  item.subscale = *sub;
  item.index = static_cast<std::size_t>(idx);
  item.text = trim(j["text"].get<std::string>());
  if (item.text.empty()) {
    throw ValidationError(std::string(role_name(item.rater)) + " item " +
                          std::to_string(item.index) + ": empty text");
  }
  return item;
}

void validate_rater(std::vector<InventoryItem>& items, Role rater,
                    std::size_t expected) {
  const std::string who(role_name(rater));
  if (expected != 0 && items.size() != expected) {
    throw ValidationError(who + " items: expected " + std::to_string(expected) +
                          ", found " + std::to_string(items.size()));
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  for (std::size_t k = 1; k < items.size(); ++k) {
    if (items[k].index == items[k - 1].index) {
      throw ValidationError(who + " item " + std::to_string(items[k].index) +
                            ": duplicate index");
    }
  }
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].index != k + 1) {
      throw ValidationError(who + " item " + std::to_string(k + 1) + ": missing index");
    }
  }
}

}  // namespace

Inventory parse_inventory(std::istream& in, std::size_t expected_size) {
  Inventory inv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    InventoryItem item = parse_item(t, lineno);
    (item.rater == Role::patient ? inv.patient_items : inv.therapist_items)
        .push_back(std::move(item));
  }
  validate_rater(inv.patient_items, Role::patient, expected_size);
  validate_rater(inv.therapist_items, Role::therapist, expected_size);
  if (inv.patient_items.empty()) throw ValidationError("inventory has no items");
  if (inv.patient_items.size() != inv.therapist_items.size()) {
    throw ValidationError("patient and therapist item counts differ: " +
                          std::to_string(inv.patient_items.size()) + " vs " +
                          std::to_string(inv.therapist_items.size()));
  }
  for (std::size_t k = 0; k < inv.size(); ++k) {
    if (inv.patient_items[k].subscale != inv.therapist_items[k].subscale) {
      throw ValidationError(
          "item " + std::to_string(k + 1) + ": subscale differs between raters (patient " +
          std::string(subscale_name(inv.patient_items[k].subscale)) + ", therapist " +
          std::string(subscale_name(inv.therapist_items[k].subscale)) + ")");
    }
  }
  return inv;
}

Inventory load_inventory(const std::filesystem::path& path,
                         std::size_t expected_size) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open inventory file " + path.string());
  return parse_inventory(in, expected_size);
}

void write_inventory(std::ostream& out, const Inventory& inv) {
  for (Role r : {Role::patient, Role::therapist}) {
    for (const auto& item : inv.items(r)) {
      json j;
      j["rater"] = role_name(item.rater);
      j["index"] = item.index;
      j["subscale"] = subscale_name(item.subscale);
      j["text"] = item.text;
      out << j.dump() << '\n';
    }
  }
}

std::string_view bundled_inventory_text() { return kBundledInventoryJsonl; }

const Inventory& bundled_inventory() {
  static const Inventory inv = [] {
    std::istringstream in{std::string(kBundledInventoryJsonl)};
    return parse_inventory(in);
  }();
  return inv;
}

std::vector<std::size_t> subscale_mask(const Inventory& inv, Subscale subscale) {
  std::vector<std::size_t> out;
  for (const auto& item : inv.patient_items) {
    if (item.subscale == subscale) out.push_back(item.index);
  }
  return out;
}

std::string inventory_digest(const Inventory& inv) {
  std::ostringstream os;
  write_inventory(os, inv);
  return digest_hex(os.str());
}

}  // namespace wat
