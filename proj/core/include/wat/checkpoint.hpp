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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wat/models.hpp"
#include "wat/optim.hpp"

namespace wat {

struct NamedTensor {
  std::string name;
  Tensor value;

  bool operator==(const NamedTensor&) const = default;
};

// Versioned binary container: magic, version, a JSON header (model config,
// digest, training metadata), parameter tensors and optimizer velocities as
// raw little-endian doubles. Round trips are bit-exact.
struct ModelCheckpoint {
  ModelConfig model;
  std::vector<NamedTensor> parameters;
  std::vector<NamedTensor> velocity;  // empty when no optimizer state was saved
  double lr = 0.0;
  double momentum = 0.0;
  std::uint64_t iteration = 0;
  std::uint64_t seed = 0;
  std::string rng_state;
  // Free-form JSON object with pipeline context (features, provider, split).
  std::string metadata = "{}";

  bool operator==(const ModelCheckpoint&) const = default;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

ModelCheckpoint capture_checkpoint(const SequenceClassifier& model,
                                   const OptimizerState* optimizer = nullptr);
// Builds a model from the checkpoint's config and copies its parameters in.
// Throws ValidationError when names or shapes disagree.
std::unique_ptr<SequenceClassifier> restore_model(const ModelCheckpoint& ckpt);
void load_parameters(SequenceClassifier& model, const std::vector<NamedTensor>& params);

void write_checkpoint(std::ostream& out, const ModelCheckpoint& ckpt);
ModelCheckpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt);
ModelCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace wat
