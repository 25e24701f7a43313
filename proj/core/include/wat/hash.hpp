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
#include <random>
#include <string>
#include <string_view>

namespace wat {

/// 64-bit FNV-1a over the bytes of \p data, starting from \p seed mixed into
/// the offset basis. Stable across platforms and builds.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0);

/// splitmix64 finalizer; used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x);

/// Hex digest (16 chars) of an arbitrary canonical config string.
std::string digest_hex(std::string_view canonical);

/// Seed for an independent RNG stream identified by \p key.
std::uint64_t derive_seed(std::uint64_t master, std::string_view key);

using Rng = std::mt19937_64;

}  // namespace wat
