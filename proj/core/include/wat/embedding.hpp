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
#include <cstdint>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wat {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
  bool is_zero() const;
  bool operator==(const EmbeddingVector&) const = default;
};

enum class ProviderKind { hash, file, remote };

std::string_view provider_kind_name(ProviderKind k);

struct ProviderConfig {
  ProviderKind kind = ProviderKind::hash;
  std::size_t dim = 64;            // hash only
  std::uint64_t hash_seed = 0;     // hash only
  std::filesystem::path path;      // file only
  std::string endpoint;            // remote only, e.g. "http://127.0.0.1:8080"
  std::size_t cache_capacity = 0;  // 0 disables the cache

  // Canonical text used for digests and labels.
  std::string canonical() const;
};

// Parses "hash", "hash:128", "file:<path>", "remote:<url>".
ProviderConfig parse_provider_spec(std::string_view spec, std::size_t default_dim = 64);

// Sentence-embedding provider. Empty or whitespace-only text embeds to the
// zero vector without reaching the backend. embed/embed_batch may be called
// concurrently; the LRU cache is guarded by a mutex.
class EmbeddingProvider {
 public:
  explicit EmbeddingProvider(std::size_t cache_capacity = 0)
      : cache_capacity_(cache_capacity) {}
  virtual ~EmbeddingProvider() = default;
  EmbeddingProvider(const EmbeddingProvider&) = delete;
  EmbeddingProvider& operator=(const EmbeddingProvider&) = delete;

  virtual std::size_t dim() const = 0;
  virtual std::string label() const = 0;

  EmbeddingVector embed(std::string_view text);
  std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts);

  std::size_t backend_calls() const;

 protected:
  // Embeds nonempty texts; one backend round trip per call.
  virtual std::vector<EmbeddingVector> compute(
      std::span<const std::string> texts) = 0;

 private:
  bool cache_get(const std::string& key, EmbeddingVector& out);
  void cache_put(const std::string& key, const EmbeddingVector& v);

  std::size_t cache_capacity_;
  mutable std::mutex mu_;
  std::list<std::pair<std::string, EmbeddingVector>> lru_;
  std::unordered_map<std::string, decltype(lru_)::iterator> index_;
  std::size_t backend_calls_ = 0;
};

// Signed feature hashing over normalized tokens, L2-normalized.
class HashEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dim = 64, std::uint64_t seed = 0,
                                 std::size_t cache_capacity = 0);
  std::size_t dim() const override { return dim_; }
  std::string label() const override;

  // Uncached single-text hash embedding.
  EmbeddingVector hash_text(std::string_view text) const;

 protected:
  std::vector<EmbeddingVector> compute(std::span<const std::string> texts) override;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Precomputed vectors looked up by exact (trimmed) text.
class FileEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit FileEmbeddingProvider(const std::filesystem::path& path,
                                 std::size_t cache_capacity = 0);
  std::size_t dim() const override { return dim_; }
  std::string label() const override;
  std::size_t entries() const { return table_.size(); }

 protected:
  std::vector<EmbeddingVector> compute(std::span<const std::string> texts) override;

 private:
  std::filesystem::path path_;
  std::size_t dim_ = 0;
  std::unordered_map<std::string, EmbeddingVector> table_;
};

// Client for the HTTP embedding protocol (POST <endpoint>/embed). The
// dimension is discovered with an empty request at construction.
class RemoteEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(std::string endpoint,
                                   std::size_t cache_capacity = 0);
  std::size_t dim() const override { return dim_; }
  std::string label() const override;

 protected:
  std::vector<EmbeddingVector> compute(std::span<const std::string> texts) override;

 private:
  std::vector<EmbeddingVector> request(std::span<const std::string> texts,
                                       std::size_t* declared_dim);
  std::string endpoint_;
  std::size_t dim_ = 0;
};

std::unique_ptr<EmbeddingProvider> make_provider(const ProviderConfig& config);

// Writes vectors in the file-provider format.
void write_embedding_file(const std::filesystem::path& path,
                          std::span<const std::string> texts,
                          std::span<const EmbeddingVector> vectors);

}  // namespace wat
