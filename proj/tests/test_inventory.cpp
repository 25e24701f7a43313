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

#include <fstream>
#include <set>
#include <sstream>

#include "support/test_support.hpp"
#include "wat/error.hpp"
#include "wat/inventory.hpp"

namespace wat {
namespace {

std::string item_line(const std::string& rater, std::size_t index, const std::string& subscale,
                      const std::string& text) {
  return R"({"rater":")" + rater + R"(","index":)" + std::to_string(index) +
         R"(,"subscale":")" + subscale + R"(","text":")" + text + "\"}\n";
}

const char* kSubscales[3] = {"task", "bond", "goal"};

std::string full_text(std::size_t m, std::size_t drop_patient = 0) {
  std::string s;
  for (const char* r : {"patient", "therapist"}) {
    for (std::size_t j = 1; j <= m; ++j) {
      if (std::string(r) == "patient" && j == drop_patient) continue;
      s += item_line(r, j, kSubscales[(j - 1) % 3], std::string(r) + " item " + std::to_string(j));
    }
  }
  return s;
}

Inventory parse(const std::string& text, std::size_t expected = kDefaultInventorySize) {
  std::istringstream in(text);
  return parse_inventory(in, expected);
}

std::string error_of(const std::string& text) {
  try {
    parse(text);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

TEST(Inventory, BundledHasThirtySixPerRater) {
  const Inventory& inv = bundled_inventory();
  EXPECT_EQ(inv.patient_items.size(), 36u);
  EXPECT_EQ(inv.therapist_items.size(), 36u);
  for (std::size_t j = 0; j < 36; ++j) {
    EXPECT_EQ(inv.patient_items[j].index, j + 1);
    EXPECT_EQ(inv.therapist_items[j].index, j + 1);
    EXPECT_EQ(inv.patient_items[j].rater, Role::patient);
    EXPECT_EQ(inv.therapist_items[j].rater, Role::therapist);
    EXPECT_EQ(inv.patient_items[j].subscale, inv.therapist_items[j].subscale);
    EXPECT_FALSE(inv.patient_items[j].text.empty());
  }
}

TEST(Inventory, BundledTextParsesToBundledInventory) {
  EXPECT_EQ(parse(std::string(bundled_inventory_text())), bundled_inventory());
}

TEST(Inventory, ThirtyFivePatientItemsNamed) {
  EXPECT_EQ(error_of(full_text(36, 36)), "patient items: expected 36, found 35");
}

TEST(Inventory, SubscaleMismatchBetweenRaters) {
  std::string text = full_text(36);
  const std::string bad = item_line("therapist", 5, "task", "therapist item 5");
  const std::string good = item_line("therapist", 5, "bond", "therapist item 5");
  text.replace(text.find(good), good.size(), bad);
  // Patient item 5 is bond under the cyclic tagging; therapist item 5 is now task.
  const std::string msg = error_of(text);
  EXPECT_NE(msg.find("5"), std::string::npos) << msg;
  EXPECT_NE(msg.find("subscale"), std::string::npos) << msg;
}

TEST(Inventory, DuplicateMissingAndEmptyItemsNamed) {
  std::string dup = full_text(36, 7) + item_line("patient", 8, "bond", "again");
  EXPECT_NE(error_of(dup).find("item 8"), std::string::npos) << error_of(dup);

  std::string missing = full_text(36, 7) + item_line("patient", 37, "task", "extra");
  EXPECT_FALSE(error_of(missing).empty());

  std::string empty_text = full_text(36);
  const std::string good = item_line("patient", 3, "goal", "patient item 3");
  empty_text.replace(empty_text.find(good), good.size(), item_line("patient", 3, "goal", "  "));
  const std::string msg = error_of(empty_text);
  EXPECT_NE(msg.find("patient item 3"), std::string::npos) << msg;
}

TEST(Inventory, MalformedLinesAreParseErrors) {
  EXPECT_THROW(parse("{oops\n"), ParseError);
  EXPECT_THROW(parse(item_line("doctor", 1, "task", "x")), ParseError);
  EXPECT_THROW(parse(item_line("patient", 1, "rapport", "x")), ParseError);
  EXPECT_THROW(parse(R"({"rater":"patient","index":1})" "\n"), ParseError);
}

TEST(Inventory, AnySizeWhenExpectedIsZero) {
  const Inventory inv = parse(full_text(6), 0);
  EXPECT_EQ(inv.size(), 6u);
  EXPECT_THROW(parse(full_text(6)), ValidationError);
}

TEST(Inventory, ItemsSortedByIndexRegardlessOfFileOrder) {
  std::string text;
  for (const char* r : {"therapist", "patient"}) {
    for (std::size_t j = 36; j >= 1; --j) {
      text += item_line(r, j, kSubscales[(j - 1) % 3], "x" + std::to_string(j));
    }
  }
  const Inventory inv = parse(text);
  for (std::size_t j = 0; j < 36; ++j) EXPECT_EQ(inv.patient_items[j].index, j + 1);
}

TEST(Inventory, WriteParseRoundTrip) {
  std::ostringstream out;
  write_inventory(out, bundled_inventory());
  EXPECT_EQ(parse(out.str()), bundled_inventory());

  const Inventory small = parse(full_text(9), 0);
  std::ostringstream out2;
  write_inventory(out2, small);
  EXPECT_EQ(parse(out2.str(), 0), small);
}

TEST(Inventory, LoadFromFile) {
  test::TempDir dir;
  {
    std::ofstream f(dir / "inv.jsonl");
    write_inventory(f, bundled_inventory());
  }
  EXPECT_EQ(load_inventory(dir / "inv.jsonl"), bundled_inventory());
  EXPECT_THROW(load_inventory(dir / "absent.jsonl"), Error);
}

TEST(SubscaleMask, BundledTwelvePerSubscaleAndPartition) {
  const Inventory& inv = bundled_inventory();
  std::set<std::size_t> all;
  std::size_t total = 0;
  for (auto s : {Subscale::task, Subscale::bond, Subscale::goal}) {
    const auto mask = subscale_mask(inv, s);
    EXPECT_EQ(mask.size(), 12u);
    EXPECT_TRUE(std::is_sorted(mask.begin(), mask.end()));
    total += mask.size();
    all.insert(mask.begin(), mask.end());
  }
  EXPECT_EQ(total, 36u);
  EXPECT_EQ(all.size(), 36u);
  EXPECT_EQ(*all.begin(), 1u);
  EXPECT_EQ(*all.rbegin(), 36u);
}

TEST(SubscaleMask, PartitionHoldsForRandomTagging) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng() % 40;
    std::string text;
    std::vector<const char*> tags(m);
    for (auto& t : tags) t = kSubscales[rng() % 3];
    for (const char* r : {"patient", "therapist"})
      for (std::size_t j = 1; j <= m; ++j) text += item_line(r, j, tags[j - 1], "t");
    const Inventory inv = parse(text, 0);
    std::set<std::size_t> all;
    std::size_t total = 0;
    for (auto s : {Subscale::task, Subscale::bond, Subscale::goal}) {
      const auto mask = subscale_mask(inv, s);
      total += mask.size();
      all.insert(mask.begin(), mask.end());
    }
    EXPECT_EQ(total, m);
    EXPECT_EQ(all.size(), m);
  }
}

TEST(Inventory, DigestTracksContent) {
  Inventory a = bundled_inventory();
  const std::string d = inventory_digest(a);
  EXPECT_EQ(d.size(), 16u);
  EXPECT_EQ(inventory_digest(bundled_inventory()), d);
  a.patient_items[0].text += "!";
  EXPECT_NE(inventory_digest(a), d);
}

}  // namespace
}  // namespace wat
