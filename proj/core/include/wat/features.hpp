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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wat/alliance.hpp"
#include "wat/corpus.hpp"
#include "wat/tensor.hpp"

namespace wat {

enum class FeatureType { wa_embedding = 0, wa_score = 1, embedding = 2 };
enum class TurnSource { patient = 0, therapist = 1, both = 2 };

inline constexpr std::array<FeatureType, 3> kAllFeatureTypes = {
    FeatureType::wa_embedding, FeatureType::wa_score, FeatureType::embedding};
inline constexpr std::array<TurnSource, 3> kAllTurnSources = {
    TurnSource::patient, TurnSource::therapist, TurnSource::both};

std::string_view feature_type_name(FeatureType t);
std::optional<FeatureType> parse_feature_type(std::string_view s);
std::string_view turn_source_name(TurnSource s);
std::optional<TurnSource> parse_turn_source(std::string_view s);

inline constexpr std::size_t kDefaultMaxPairs = 50;

struct FeatureConfig {
  FeatureType feature_type = FeatureType::wa_embedding;
  TurnSource turn_source = TurnSource::patient;
  std::size_t embed_dim = 64;
  std::size_t inventory_size = kDefaultInventorySize;

  // Width of one rater block.
  std::size_t block_dim() const;
  // Per-step width: one block, or two for TurnSource::both.
  std::size_t feature_dim() const;
  std::string canonical() const;
};

struct TurnFeature {
  std::vector<double> values;
  std::size_t pair_index = 0;
};

struct FeatureSequence {
  std::vector<TurnFeature> steps;
  Condition label = Condition::anxiety;

  std::size_t length() const { return steps.size(); }
  std::size_t width() const { return steps.empty() ? 0 : steps.front().values.size(); }
  // [length, width] matrix, one row per step.
  Tensor to_tensor() const;
};

// Block layout: [embedding | scores] within a rater block, patient block
// before therapist block for TurnSource::both. wa_score never reads the
// embeddings and embedding never reads the scores.
TurnFeature assemble_turn_feature(const TurnPair& pair,
                                  const AllianceScoreVector& patient_scores,
                                  const AllianceScoreVector& therapist_scores,
                                  const EmbeddingVector& patient_embedding,
                                  const EmbeddingVector& therapist_embedding,
                                  const FeatureConfig& config);

// Truncates to the first max_pairs pairs, then assembles each pair.
FeatureSequence assemble_session(const Session& session,
                                 const SessionTrajectory& trajectory,
                                 const SessionEmbeddings& embeddings,
                                 const FeatureConfig& config,
                                 std::size_t max_pairs = kDefaultMaxPairs);

}  // namespace wat
