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

#include "wat/features.hpp"

#include <algorithm>

#include "wat/error.hpp"

namespace wat {

std::string_view feature_type_name(FeatureType t) {
  switch (t) {
    case FeatureType::wa_embedding: return "wa_embedding";
    case FeatureType::wa_score: return "wa_score";
    case FeatureType::embedding: return "embedding";
  }
  return "?";
}

std::optional<FeatureType> parse_feature_type(std::string_view s) {
  for (auto t : kAllFeatureTypes) {
    if (feature_type_name(t) == s) return t;
  }
  return std::nullopt;
}

std::string_view turn_source_name(TurnSource s) {
  switch (s) {
    case TurnSource::patient: return "patient";
    case TurnSource::therapist: return "therapist";
    case TurnSource::both: return "both";
  }
  return "?";
}

std::optional<TurnSource> parse_turn_source(std::string_view s) {
  for (auto t : kAllTurnSources) {
    if (turn_source_name(t) == s) return t;
  }
  return std::nullopt;
}

std::size_t FeatureConfig::block_dim() const {
  switch (feature_type) {
    case FeatureType::wa_embedding: return embed_dim + inventory_size;
    case FeatureType::wa_score: return inventory_size;
    case FeatureType::embedding: return embed_dim;
  }
  return 0;
}

std::size_t FeatureConfig::feature_dim() const {
  return turn_source == TurnSource::both ? 2 * block_dim() : block_dim();
}

std::string FeatureConfig::canonical() const {
  return std::string(feature_type_name(feature_type)) + "/" +
         std::string(turn_source_name(turn_source)) + "/d" + std::to_string(embed_dim) +
         "/m" + std::to_string(inventory_size);
}

Tensor FeatureSequence::to_tensor() const {
  if (steps.empty()) throw ShapeError("feature sequence is empty");
  const std::size_t w = width();
  std::vector<double> data;
  data.reserve(steps.size() * w);
  for (const auto& s : steps) {
    if (s.values.size() != w) throw ShapeError("feature sequence has ragged width");
    data.insert(data.end(), s.values.begin(), s.values.end());
  }
  return Tensor::matrix(steps.size(), w, std::move(data));
}

namespace {

void append_block(std::vector<double>& out, const AllianceScoreVector& scores,
                  const EmbeddingVector& embedding, const FeatureConfig& config) {
  const bool use_emb = config.feature_type != FeatureType::wa_score;
  const bool use_scores = config.feature_type != FeatureType::embedding;
  if (use_emb) {
    if (embedding.dim() != config.embed_dim) {
      throw ShapeError("feature assembly: embedding has dimension " +
                       std::to_string(embedding.dim()) + ", config expects " +
                       std::to_string(config.embed_dim));
    }
    out.insert(out.end(), embedding.values.begin(), embedding.values.end());
  }
  if (use_scores) {
    if (scores.size() != config.inventory_size) {
      throw ShapeError("feature assembly: score vector has " +
                       std::to_string(scores.size()) + " entries, config expects " +
                       std::to_string(config.inventory_size));
    }
    out.insert(out.end(), scores.scores.begin(), scores.scores.end());
  }
}

}  // namespace

TurnFeature assemble_turn_feature(const TurnPair& pair,
                                  const AllianceScoreVector& patient_scores,
                                  const AllianceScoreVector& therapist_scores,
                                  const EmbeddingVector& patient_embedding,
                                  const EmbeddingVector& therapist_embedding,
                                  const FeatureConfig& config) {
  if (patient_scores.rater != Role::patient || therapist_scores.rater != Role::therapist) {
    throw ValidationError("feature assembly: score vectors passed for the wrong rater");
  }
  TurnFeature f;
  f.pair_index = pair.index;
  f.values.reserve(config.feature_dim());
  if (config.turn_source != TurnSource::therapist) {
    append_block(f.values, patient_scores, patient_embedding, config);
  }
  if (config.turn_source != TurnSource::patient) {
    append_block(f.values, therapist_scores, therapist_embedding, config);
  }
  return f;
}

FeatureSequence assemble_session(const Session& session,
                                 const SessionTrajectory& trajectory,
                                 const SessionEmbeddings& embeddings,
                                 const FeatureConfig& config, std::size_t max_pairs) {
  const Session cut = truncate_session(session, max_pairs);
  if (trajectory.length() < cut.length() || embeddings.patient.size() < cut.length() ||
      embeddings.therapist.size() < cut.length()) {
    throw ShapeError("assemble_session: trajectory or embeddings shorter than session '" +
                     session.session_id + "'");
  }
  FeatureSequence seq;
  seq.label = session.condition;
  seq.steps.reserve(cut.length());
  for (std::size_t i = 0; i < cut.length(); ++i) {
    seq.steps.push_back(assemble_turn_feature(
        cut.pairs[i], trajectory.patient[i], trajectory.therapist[i],
        embeddings.patient[i], embeddings.therapist[i], config));
  }
  return seq;
}

}  // namespace wat
