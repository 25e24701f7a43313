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

#include "wat/embedding.hpp"

#include <cmath>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "wat/error.hpp"
#include "wat/hash.hpp"
#include "wat/text.hpp"

namespace wat {

using nlohmann::json;

bool EmbeddingVector::is_zero() const {
  for (double v : values) {
    if (v != 0.0) return false;
  }
  return true;
}

std::string_view provider_kind_name(ProviderKind k) {
  switch (k) {
    case ProviderKind::hash: return "hash";
    case ProviderKind::file: return "file";
    case ProviderKind::remote: return "remote";
  }
  return "?";
}

std::string ProviderConfig::canonical() const {
  switch (kind) {
    case ProviderKind::hash:
      return "hash:" + std::to_string(dim) + ":" + std::to_string(hash_seed);
    case ProviderKind::file:
      return "file:" + path.string();
    case ProviderKind::remote:
      return "remote:" + endpoint;
  }
  return {};
}

ProviderConfig parse_provider_spec(std::string_view spec, std::size_t default_dim) {
  ProviderConfig c;
  const auto colon = spec.find(':');
  const std::string_view kind = spec.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
  if (kind == "hash") {
    c.kind = ProviderKind::hash;
    c.dim = default_dim;
    if (!rest.empty()) {
      try {
        c.dim = std::stoul(std::string(rest));
      } catch (const std::exception&) {
        throw ConfigError("bad hash dimension in provider spec '" + std::string(spec) + "'");
      }
    }
    if (c.dim == 0) throw ConfigError("hash provider dimension must be > 0");
  } else if (kind == "file") {
    if (rest.empty()) throw ConfigError("file provider needs a path: file:<path>");
    c.kind = ProviderKind::file;
    c.path = std::string(rest);
  } else if (kind == "remote") {
    if (rest.empty()) throw ConfigError("remote provider needs a URL: remote:<url>");
    c.kind = ProviderKind::remote;
    c.endpoint = std::string(rest);
  } else {
    throw ConfigError("unknown provider '" + std::string(spec) + "'");
  }
  return c;
}

// ---------------------------------------------------------------------------

bool EmbeddingProvider::cache_get(const std::string& key, EmbeddingVector& out) {
  if (cache_capacity_ == 0) return false;
  std::lock_guard lock(mu_);
  auto it = index_.find(key);
  if (it == index_.end()) return false;
  lru_.splice(lru_.begin(), lru_, it->second);
  out = it->second->second;
  return true;
}

void EmbeddingProvider::cache_put(const std::string& key, const EmbeddingVector& v) {
  if (cache_capacity_ == 0) return;
  std::lock_guard lock(mu_);
  if (auto it = index_.find(key); it != index_.end()) {
    lru_.splice(lru_.begin(), lru_, it->second);
    return;
  }
  lru_.emplace_front(key, v);
  index_.emplace(key, lru_.begin());
  while (lru_.size() > cache_capacity_) {
    index_.erase(lru_.back().first);
    lru_.pop_back();
  }
}

std::size_t EmbeddingProvider::backend_calls() const {
  std::lock_guard lock(mu_);
  return backend_calls_;
}

EmbeddingVector EmbeddingProvider::embed(std::string_view text) {
  const std::string one[] = {std::string(text)};
  return std::move(embed_batch(one).front());
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out(texts.size());
  std::vector<std::string> pending;
  std::vector<std::size_t> pending_pos;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::string key = trim(texts[i]);
    if (key.empty()) {
      out[i].values.assign(dim(), 0.0);
    } else if (!cache_get(key, out[i])) {
      pending.push_back(std::move(key));
      pending_pos.push_back(i);
    }
  }
  if (pending.empty()) return out;

  {
    std::lock_guard lock(mu_);
    ++backend_calls_;
  }
  std::vector<EmbeddingVector> computed;
  try {
    computed = compute(pending);
  } catch (const ProviderError& e) {
    throw ProviderError(label() + ": " + e.what());
  }
  if (computed.size() != pending.size()) {
    throw ProviderError(label() + ": backend returned " + std::to_string(computed.size()) +
                        " vectors for " + std::to_string(pending.size()) + " texts");
  }
  for (std::size_t k = 0; k < pending.size(); ++k) {
    if (computed[k].dim() != dim()) {
      throw ProviderError(label() + ": text index " + std::to_string(pending_pos[k]) +
                          " has dimension " + std::to_string(computed[k].dim()) +
                          ", expected " + std::to_string(dim()));
    }
    for (double v : computed[k].values) {
      if (!std::isfinite(v)) {
        throw ProviderError(label() + ": text index " + std::to_string(pending_pos[k]) +
                            " has a non-finite entry");
      }
    }
    cache_put(pending[k], computed[k]);
    out[pending_pos[k]] = std::move(computed[k]);
  }
  return out;
}

// ---------------------------------------------------------------------------

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dim, std::uint64_t seed,
                                             std::size_t cache_capacity)
    : EmbeddingProvider(cache_capacity), dim_(dim), seed_(seed) {
  if (dim_ == 0) throw ConfigError("hash provider dimension must be > 0");
}

std::string HashEmbeddingProvider::label() const {
  return dim_ == 64 && seed_ == 0 ? "hash" : "hash" + std::to_string(dim_);
}

EmbeddingVector HashEmbeddingProvider::hash_text(std::string_view text) const {
  EmbeddingVector v;
  v.values.assign(dim_, 0.0);
  for (const std::string& tok : tokenize(text)) {
    const std::uint64_t h = fnv1a64(tok, seed_);
    const double sign = (h >> 63) != 0 ? -1.0 : 1.0;
    v.values[h % dim_] += sign;
  }
  double sq = 0.0;
  for (double x : v.values) sq += x * x;
  if (sq > 0.0) {
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v.values) x *= inv;
  }
  return v;
}

std::vector<EmbeddingVector> HashEmbeddingProvider::compute(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  for (const auto& t : texts) out.push_back(hash_text(t));
  return out;
}

// ---------------------------------------------------------------------------

FileEmbeddingProvider::FileEmbeddingProvider(const std::filesystem::path& path,
                                             std::size_t cache_capacity)
    : EmbeddingProvider(cache_capacity), path_(path) {
  std::ifstream in(path);
  if (!in) throw ProviderError("cannot open embedding file " + path.string());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    json j;
    try {
      j = json::parse(t);
    } catch (const json::parse_error& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string() ||
        !j.contains("vector") || !j["vector"].is_array()) {
      throw ParseError(lineno, "record needs 'text' (string) and 'vector' (array)");
    }
    EmbeddingVector v;
    for (const auto& x : j["vector"]) {
      if (!x.is_number()) throw ParseError(lineno, "vector entries must be numbers");
      v.values.push_back(x.get<double>());
    }
    if (v.values.empty()) throw ParseError(lineno, "empty vector");
    if (dim_ == 0) dim_ = v.dim();
    if (v.dim() != dim_) {
      throw ParseError(lineno, "vector has dimension " + std::to_string(v.dim()) +
                                   ", file declares " + std::to_string(dim_));
    }
    table_[trim(j["text"].get<std::string>())] = std::move(v);
  }
  if (dim_ == 0) throw ProviderError("embedding file " + path.string() + " is empty");
}

std::string FileEmbeddingProvider::label() const {
  return "file:" + path_.stem().string();
}

std::vector<EmbeddingVector> FileEmbeddingProvider::compute(
    std::span<const std::string> texts) {
  std::vector<EmbeddingVector> out;
  out.reserve(texts.size());
  std::vector<std::string> missing;
  for (const auto& t : texts) {
    auto it = table_.find(t);
    if (it == table_.end()) {
      missing.push_back(t);
    } else {
      out.push_back(it->second);
    }
  }
  if (!missing.empty()) {
    std::string msg = "unknown text:";
    for (const auto& m : missing) msg += " '" + m + "'";
    throw ProviderError(msg);
  }
  return out;
}

// ---------------------------------------------------------------------------

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string endpoint,
                                                 std::size_t cache_capacity)
    : EmbeddingProvider(cache_capacity), endpoint_(std::move(endpoint)) {
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
  std::size_t declared = 0;
  request({}, &declared);
  if (declared == 0) throw ProviderError(endpoint_ + ": server declared dimension 0");
  dim_ = declared;
}

std::string RemoteEmbeddingProvider::label() const { return "remote"; }

std::vector<EmbeddingVector> RemoteEmbeddingProvider::request(
    std::span<const std::string> texts, std::size_t* declared_dim) {
  httplib::Client client(endpoint_);
  client.set_connection_timeout(5);
  client.set_read_timeout(60);
  json body;
  body["texts"] = json::array();
  for (const auto& t : texts) body["texts"].push_back(t);
  auto res = client.Post("/embed", body.dump(), "application/json");
  if (!res) {
    throw ProviderError(endpoint_ + "/embed: transport error (" +
                        httplib::to_string(res.error()) + ")");
  }
  if (res->status != 200) {
    throw ProviderError(endpoint_ + "/embed: HTTP status " + std::to_string(res->status));
  }
  json j;
  try {
    j = json::parse(res->body);
  } catch (const json::parse_error&) {
    throw ProviderError(endpoint_ + "/embed: response is not JSON");
  }
  if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_unsigned() ||
      !j.contains("embeddings") || !j["embeddings"].is_array()) {
    throw ProviderError(endpoint_ + "/embed: response needs 'dim' and 'embeddings'");
  }
  const auto d = j["dim"].get<std::size_t>();
  if (declared_dim) *declared_dim = d;
  const auto& embs = j["embeddings"];
  if (embs.size() != texts.size()) {
    throw ProviderError(endpoint_ + "/embed: got " + std::to_string(embs.size()) +
                        " embeddings for " + std::to_string(texts.size()) + " texts");
  }
  std::vector<EmbeddingVector> out(texts.size());
  for (std::size_t i = 0; i < embs.size(); ++i) {
    if (!embs[i].is_array() || embs[i].size() != d) {
      throw ProviderError(endpoint_ + "/embed: text index " + std::to_string(i) +
                          ": embedding is not a " + std::to_string(d) + "-vector");
    }
    for (const auto& x : embs[i]) {
      if (!x.is_number()) {
        throw ProviderError(endpoint_ + "/embed: text index " + std::to_string(i) +
                            ": non-numeric entry");
      }
      out[i].values.push_back(x.get<double>());
    }
  }
  return out;
}

std::vector<EmbeddingVector> RemoteEmbeddingProvider::compute(
    std::span<const std::string> texts) {
  return request(texts, nullptr);
}

// ---------------------------------------------------------------------------

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config) {
  switch (config.kind) {
    case ProviderKind::hash:
      return std::make_unique<HashEmbeddingProvider>(config.dim, config.hash_seed,
                                                     config.cache_capacity);
    case ProviderKind::file:
      return std::make_unique<FileEmbeddingProvider>(config.path, config.cache_capacity);
    case ProviderKind::remote:
      return std::make_unique<RemoteEmbeddingProvider>(config.endpoint,
                                                       config.cache_capacity);
  }
  throw ConfigError("unknown provider kind");
}

void write_embedding_file(const std::filesystem::path& path,
                          std::span<const std::string> texts,
                          std::span<const EmbeddingVector> vectors) {
  if (texts.size() != vectors.size()) {
    throw ShapeError("write_embedding_file: texts and vectors differ in length");
  }
  std::ofstream out(path);
  if (!out) throw ProviderError("cannot write embedding file " + path.string());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    json j;
    j["text"] = texts[i];
    j["vector"] = vectors[i].values;
    out << j.dump() << '\n';
  }
}

}  // namespace wat
