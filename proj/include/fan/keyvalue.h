// Copyright 2026 The FAN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FAN_KEYVALUE_H_
#define FAN_KEYVALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fan {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Parses `key = value` lines. Blank lines and lines starting with '#' are
// skipped; keys and values are trimmed. Throws InputError naming the line
// on anything else.
KeyValues ParseKeyValues(std::string_view text);

// Last value for `key`, or nullptr.
const std::string* FindValue(const KeyValues& kv, std::string_view key);

std::string FormatKeyValues(const KeyValues& kv);

// Typed readers for configuration values. Each throws ConfigError naming
// `key` when `value` is malformed.
double ParseRealValue(std::string_view key, std::string_view value);
std::size_t ParseCountValue(std::string_view key, std::string_view value);
std::uint64_t ParseSeedValue(std::string_view key, std::string_view value);
bool ParseBoolValue(std::string_view key, std::string_view value);
// Comma-separated counts; empty text gives an empty list.
std::vector<std::size_t> ParseCountList(std::string_view key,
                                        std::string_view value);

}  // namespace fan

#endif  // FAN_KEYVALUE_H_
