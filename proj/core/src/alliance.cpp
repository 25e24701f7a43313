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

#include "wat/alliance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "wat/error.hpp"
#include "wat/text.hpp"

namespace wat {

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("cosine: dimension mismatch " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

InventoryEmbeddings embed_inventory(EmbeddingProvider& provider, const Inventory& inv) {
  InventoryEmbeddings out;
  for (Role r : {Role::patient, Role::therapist}) {
    std::vector<std::string> texts;
    for (const auto& item : inv.items(r)) texts.push_back(item.text);
    (r == Role::patient ? out.patient : out.therapist) = provider.embed_batch(texts);
  }
  return out;
}

AllianceScoreVector score_turn(const EmbeddingVector& turn_embedding,
                               std::span<const EmbeddingVector> inventory_embeddings,
                               Role rater, std::size_t pair_index) {
  AllianceScoreVector v;
  v.rater = rater;
  v.pair_index = pair_index;
  v.scores.reserve(inventory_embeddings.size());
  for (const auto& item : inventory_embeddings) {
    v.scores.push_back(cosine(turn_embedding, item));
  }
  return v;
}

SessionEmbeddings embed_session(EmbeddingProvider& provider, const Session& session) {
  SessionEmbeddings out;
  for (Role r : {Role::patient, Role::therapist}) {
    std::vector<std::string> texts;
    texts.reserve(session.length());
    for (const auto& p : session.pairs) {
      texts.push_back(r == Role::patient ? p.patient_turn.text : p.therapist_turn.text);
    }
    try {
      (r == Role::patient ? out.patient : out.therapist) = provider.embed_batch(texts);
    } catch (const ProviderError& e) {
      throw ProviderError("session '" + session.session_id + "', " +
                          std::string(role_name(r)) + " turns: " + e.what());
    }
  }
  return out;
}

SessionTrajectory score_embedded_session(const Session& session,
                                         const SessionEmbeddings& embeddings,
                                         const InventoryEmbeddings& inventory) {
  if (embeddings.patient.size() != session.length() ||
      embeddings.therapist.size() != session.length()) {
    throw ShapeError("score_session: embeddings do not cover every pair of '" +
                     session.session_id + "'");
  }
  SessionTrajectory traj;
  traj.session_id = session.session_id;
  for (std::size_t i = 0; i < session.length(); ++i) {
    try {
      traj.patient.push_back(
          score_turn(embeddings.patient[i], inventory.patient, Role::patient, i));
      traj.therapist.push_back(
          score_turn(embeddings.therapist[i], inventory.therapist, Role::therapist, i));
    } catch (const ShapeError& e) {
      throw ShapeError("session '" + session.session_id + "', pair " +
                       std::to_string(i) + ": " + e.what());
    }
  }
  return traj;
}

AllianceEncoder::AllianceEncoder(EmbeddingProvider& provider, const Inventory& inventory)
    : provider_(provider), inventory_(inventory),
      items_(embed_inventory(provider, inventory)) {}

AllianceScoreVector AllianceEncoder::score_text(std::string_view text, Role rater,
                                                std::size_t pair_index) const {
  return score_turn(provider_.embed(text), items_.items(rater), rater, pair_index);
}

SessionTrajectory AllianceEncoder::score_session(const Session& session) const {
  return score_embedded_session(session, embed_session(provider_, session), items_);
}

std::array<double, 3> subscale_means(const AllianceScoreVector& v, const Inventory& inv) {
  if (v.size() != inv.size()) {
    throw ShapeError("subscale_means: score vector has " + std::to_string(v.size()) +
                     " entries, inventory " + std::to_string(inv.size()));
  }
  std::array<double, 3> sum{};
  std::array<std::size_t, 3> n{};
  for (std::size_t j = 0; j < v.size(); ++j) {
    const auto s = static_cast<std::size_t>(inv.patient_items[j].subscale);
    sum[s] += v.scores[j];
    ++n[s];
  }
  for (std::size_t s = 0; s < 3; ++s) sum[s] = n[s] ? sum[s] / n[s] : 0.0;
  return sum;
}

std::vector<ScoreRow> score_rows(const SessionTrajectory& traj, const Inventory& inv) {
  std::vector<ScoreRow> rows;
  for (std::size_t i = 0; i < traj.length(); ++i) {
    for (const auto* v : {&traj.patient[i], &traj.therapist[i]}) {
      rows.push_back({traj.session_id, v->pair_index, v->rater, v->scores,
                      subscale_means(*v, inv)});
    }
  }
  return rows;
}

namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(std::move(cur));
  return cells;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

double parse_double(const std::string& s, std::size_t lineno) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(lineno, "not a number: '" + s + "'");
  }
}

}  // namespace

void write_scores_csv(std::ostream& out, std::span<const ScoreRow> rows,
                      std::size_t inventory_size, std::string_view header) {
  if (!header.empty()) out << "# " << header << '\n';
  out << "session_id,pair_index,rater";
  for (std::size_t j = 1; j <= inventory_size; ++j) out << ",w_" << j;
  out << ",task_mean,bond_mean,goal_mean\n";
  for (const auto& r : rows) {
    if (r.scores.size() != inventory_size) {
      throw ShapeError("score row for '" + r.session_id + "' has " +
                       std::to_string(r.scores.size()) + " scores, expected " +
                       std::to_string(inventory_size));
    }
    out << csv_escape(r.session_id) << ',' << r.pair_index << ',' << role_name(r.rater);
    for (double v : r.scores) out << ',' << fmt_double(v);
    for (double v : r.subscale_means) out << ',' << fmt_double(v);
    out << '\n';
  }
}

std::vector<ScoreRow> read_scores_csv(std::istream& in) {
  std::vector<ScoreRow> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t m = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cells = split_csv_line(line);
    if (!have_header) {
      if (cells.size() < 7 || cells[0] != "session_id") {
        throw ParseError(lineno, "missing score CSV header");
      }
      m = cells.size() - 6;
      have_header = true;
      continue;
    }
    if (cells.size() != m + 6) {
      throw ParseError(lineno, "expected " + std::to_string(m + 6) + " columns, got " +
                                   std::to_string(cells.size()));
    }
    ScoreRow r;
    r.session_id = cells[0];
    r.pair_index = static_cast<std::size_t>(parse_double(cells[1], lineno));
    const auto rater = parse_role(cells[2]);
    if (!rater) throw ParseError(lineno, "unknown rater '" + cells[2] + "'");
    r.rater = *rater;
    for (std::size_t j = 0; j < m; ++j) r.scores.push_back(parse_double(cells[3 + j], lineno));
    for (std::size_t s = 0; s < 3; ++s) {
      r.subscale_means[s] = parse_double(cells[3 + m + s], lineno);
    }
    rows.push_back(std::move(r));
  }
  if (!have_header) throw ParseError(lineno, "empty score CSV");
  return rows;
}

}  // namespace wat
