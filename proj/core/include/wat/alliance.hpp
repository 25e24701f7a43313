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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wat/corpus.hpp"
#include "wat/embedding.hpp"
#include "wat/inventory.hpp"

namespace wat {

// a.b / (|a||b|); exactly 0 when either norm is 0. Clamped to [-1, 1].
double cosine(std::span<const double> a, std::span<const double> b);
inline double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
  return cosine(a.values, b.values);
}

// Entry j holds the similarity to inventory item j+1 of the matching rater.
struct AllianceScoreVector {
  std::vector<double> scores;
  Role rater = Role::patient;
  std::size_t pair_index = 0;

  std::size_t size() const { return scores.size(); }
  bool operator==(const AllianceScoreVector&) const = default;
};

struct SessionTrajectory {
  std::string session_id;
  std::vector<AllianceScoreVector> patient;
  std::vector<AllianceScoreVector> therapist;

  std::size_t length() const { return patient.size(); }
};

// Per-pair turn embeddings of one session.
struct SessionEmbeddings {
  std::vector<EmbeddingVector> patient;
  std::vector<EmbeddingVector> therapist;
};

// Item embeddings for both raters, computed once per (provider, inventory).
struct InventoryEmbeddings {
  std::vector<EmbeddingVector> patient;
  std::vector<EmbeddingVector> therapist;

  const std::vector<EmbeddingVector>& items(Role r) const {
    return r == Role::patient ? patient : therapist;
  }
  std::size_t size() const { return patient.size(); }
};

InventoryEmbeddings embed_inventory(EmbeddingProvider& provider, const Inventory& inv);

AllianceScoreVector score_turn(const EmbeddingVector& turn_embedding,
                               std::span<const EmbeddingVector> inventory_embeddings,
                               Role rater = Role::patient, std::size_t pair_index = 0);

// Embeds every turn of \p session (one batch per rater). Provider failures
// are rethrown with session context.
SessionEmbeddings embed_session(EmbeddingProvider& provider, const Session& session);

// Scores precomputed turn embeddings; patient turns against patient items,
// therapist turns against therapist items.
SessionTrajectory score_embedded_session(const Session& session,
                                         const SessionEmbeddings& embeddings,
                                         const InventoryEmbeddings& inventory);

// The psychological state encoder: holds a provider and the inventory
// embeddings computed at construction.
class AllianceEncoder {
 public:
  AllianceEncoder(EmbeddingProvider& provider, const Inventory& inventory);

  const Inventory& inventory() const { return inventory_; }
  const InventoryEmbeddings& inventory_embeddings() const { return items_; }
  EmbeddingProvider& provider() const { return provider_; }
  std::size_t inventory_size() const { return inventory_.size(); }

  AllianceScoreVector score_text(std::string_view text, Role rater,
                                 std::size_t pair_index = 0) const;
  SessionTrajectory score_session(const Session& session) const;

 private:
  EmbeddingProvider& provider_;
  Inventory inventory_;
  InventoryEmbeddings items_;
};

// Mean score per subscale, ordered task, bond, goal.
std::array<double, 3> subscale_means(const AllianceScoreVector& v, const Inventory& inv);

// ---- score CSV ----

struct ScoreRow {
  std::string session_id;
  std::size_t pair_index = 0;
  Role rater = Role::patient;
  std::vector<double> scores;
  std::array<double, 3> subscale_means{};

  bool operator==(const ScoreRow&) const = default;
};

std::vector<ScoreRow> score_rows(const SessionTrajectory& traj, const Inventory& inv);

// Columns: session_id, pair_index, rater, w_1..w_m, task_mean, bond_mean,
// goal_mean. Values are written with 17 significant digits.
void write_scores_csv(std::ostream& out, std::span<const ScoreRow> rows,
                      std::size_t inventory_size, std::string_view header = {});
std::vector<ScoreRow> read_scores_csv(std::istream& in);

}  // namespace wat
