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

#include <string>
#include <string_view>
#include <vector>

namespace wat {

// Strips leading and trailing ASCII whitespace.
std::string trim(std::string_view s);

// Lowercases ASCII, drops ASCII punctuation, splits on whitespace.
// Non-ASCII bytes are kept as part of tokens.
std::vector<std::string> tokenize(std::string_view text);

}  // namespace wat
