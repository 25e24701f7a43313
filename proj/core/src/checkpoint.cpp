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

#include "wat/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "wat/error.hpp"

namespace wat {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'W', 'A', 'T', 'C', 'K', 'P', 'T', '\0'};

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T))) {
    throw ValidationError("checkpoint: truncated file");
  }
  return v;
}

void put_string(std::ostream& out, const std::string& s) {
  put<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& in) {
  const auto n = get<std::uint64_t>(in);
  if (n > (1ULL << 32)) throw ValidationError("checkpoint: implausible string length");
  std::string s(n, '\0');
  if (n && !in.read(s.data(), static_cast<std::streamsize>(n))) {
    throw ValidationError("checkpoint: truncated file");
  }
  return s;
}

void put_tensors(std::ostream& out, const std::vector<NamedTensor>& ts) {
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ts.size()));
  for (const auto& t : ts) {
    put_string(out, t.name);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(t.value.rank()));
    for (auto d : t.value.shape()) put<std::uint64_t>(out, d);
    out.write(reinterpret_cast<const char*>(t.value.data().data()),
              static_cast<std::streamsize>(t.value.size() * sizeof(double)));
  }
}

std::vector<NamedTensor> get_tensors(std::istream& in) {
  const auto n = get<std::uint32_t>(in);
  std::vector<NamedTensor> ts;
  for (std::uint32_t k = 0; k < n; ++k) {
    NamedTensor t;
    t.name = get_string(in);
    const auto rank = get<std::uint32_t>(in);
    if (rank == 0 || rank > 8) throw ValidationError("checkpoint: bad tensor rank");
    Shape shape(rank);
    for (auto& d : shape) d = get<std::uint64_t>(in);
    const std::size_t count = shape_size(shape);
    if (count == 0 || count > (1ULL << 32)) {
      throw ValidationError("checkpoint: bad tensor shape for " + t.name);
    }
    std::vector<double> data(count);
    if (!in.read(reinterpret_cast<char*>(data.data()),
                 static_cast<std::streamsize>(count * sizeof(double)))) {
      throw ValidationError("checkpoint: truncated tensor " + t.name);
    }
    t.value = Tensor(std::move(shape), std::move(data));
    ts.push_back(std::move(t));
  }
  return ts;
}

}  // namespace

ModelCheckpoint capture_checkpoint(const SequenceClassifier& model,
                                   const OptimizerState* optimizer) {
  ModelCheckpoint ck;
  ck.model = model.config();
  ck.seed = model.config().seed;
  const auto params = model.parameters();
  for (const Parameter* p : params) ck.parameters.push_back({p->name, p->value});
  if (optimizer != nullptr) {
    ck.lr = optimizer->lr;
    ck.momentum = optimizer->momentum;
    for (std::size_t i = 0; i < optimizer->velocity.size() && i < params.size(); ++i) {
      ck.velocity.push_back({params[i]->name, optimizer->velocity[i]});
    }
  }
  return ck;
}

void load_parameters(SequenceClassifier& model, const std::vector<NamedTensor>& params) {
  auto dst = model.parameters();
  if (dst.size() != params.size()) {
    throw ValidationError("checkpoint has " + std::to_string(params.size()) +
                          " parameters, model expects " + std::to_string(dst.size()));
  }
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (dst[i]->name != params[i].name ||
        dst[i]->value.shape() != params[i].value.shape()) {
      throw ValidationError("checkpoint parameter " + params[i].name + " " +
                            shape_str(params[i].value.shape()) + " does not match model " +
                            dst[i]->name + " " + shape_str(dst[i]->value.shape()));
    }
    dst[i]->value = params[i].value;
  }
}

std::unique_ptr<SequenceClassifier> restore_model(const ModelCheckpoint& ckpt) {
  auto model = make_model(ckpt.model);
  load_parameters(*model, ckpt.parameters);
  return model;
}

void write_checkpoint(std::ostream& out, const ModelCheckpoint& ckpt) {
  json header;
  header["model"] = json::parse(ckpt.model.to_json());
  header["model_kind"] = model_kind_name(ckpt.model.kind);
  header["config_digest"] = ckpt.model.digest();
  header["iteration"] = ckpt.iteration;
  header["seed"] = ckpt.seed;
  header["rng_state"] = ckpt.rng_state;
  header["lr"] = ckpt.lr;
  header["momentum"] = ckpt.momentum;
  try {
    header["metadata"] = json::parse(ckpt.metadata);
  } catch (const json::parse_error&) {
    throw ValidationError("checkpoint metadata is not valid JSON");
  }

  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kCheckpointVersion);
  put_string(out, header.dump());
  put_tensors(out, ckpt.parameters);
  put_tensors(out, ckpt.velocity);
  // lr and momentum are also stored raw so they round-trip bit-exactly.
  put<double>(out, ckpt.lr);
  put<double>(out, ckpt.momentum);
}

ModelCheckpoint read_checkpoint(std::istream& in) {
  char magic[sizeof(kMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ValidationError("not a checkpoint file (bad magic)");
  }
  const auto version = get<std::uint32_t>(in);
  if (version != kCheckpointVersion) {
    throw ValidationError("unsupported checkpoint version " + std::to_string(version));
  }
  json header;
  try {
    header = json::parse(get_string(in));
  } catch (const json::parse_error&) {
    throw ValidationError("checkpoint header is not valid JSON");
  }
  ModelCheckpoint ck;
  try {
    ck.model = ModelConfig::from_json(header.at("model").dump());
    const std::string digest = header.at("config_digest").get<std::string>();
    if (digest != ck.model.digest()) {
      throw ValidationError("checkpoint config digest mismatch: stored " + digest +
                            ", computed " + ck.model.digest());
    }
    if (header.at("model_kind").get<std::string>() != model_kind_name(ck.model.kind)) {
      throw ValidationError("checkpoint model kind does not match its config");
    }
    ck.iteration = header.at("iteration").get<std::uint64_t>();
    ck.seed = header.at("seed").get<std::uint64_t>();
    ck.rng_state = header.at("rng_state").get<std::string>();
    ck.metadata = header.at("metadata").dump();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("checkpoint header: ") + e.what());
  }
  ck.parameters = get_tensors(in);
  ck.velocity = get_tensors(in);
  ck.lr = get<double>(in);
  ck.momentum = get<double>(in);
  return ck;
}

void save_checkpoint(const std::filesystem::path& path, const ModelCheckpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write checkpoint " + path.string());
  write_checkpoint(out, ckpt);
  if (!out) throw ValidationError("failed writing checkpoint " + path.string());
}

ModelCheckpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint " + path.string());
  return read_checkpoint(in);
}

}  // namespace wat
