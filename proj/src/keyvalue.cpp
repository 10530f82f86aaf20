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

#include "fan/keyvalue.h"

#include <charconv>

#include "fan/csv.h"
#include "fan/error.h"

namespace fan {

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

KeyValues ParseKeyValues(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = Trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("line " + std::to_string(line_no) +
                       ": expected 'key = value', got '" + std::string(line) +
                       "'");
    }
    const std::string_view key = Trim(line.substr(0, eq));
    if (key.empty()) {
      throw InputError("line " + std::to_string(line_no) + ": empty key");
    }
    kv.emplace_back(std::string(key), std::string(Trim(line.substr(eq + 1))));
  }
  return kv;
}

const std::string* FindValue(const KeyValues& kv, std::string_view key) {
  const std::string* found = nullptr;
  for (const auto& [k, v] : kv) {
    if (k == key) found = &v;
  }
  return found;
}

std::string FormatKeyValues(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

namespace {

Error BadValue(std::string_view key, std::string_view value,
               const char* expected) {
  return ConfigError("setting '" + std::string(key) + "': expected " +
                     expected + ", got '" + std::string(value) + "'");
}

template <typename T>
T ParseUnsigned(std::string_view key, std::string_view value,
                const char* expected) {
  value = Trim(value);
  T out{};
  const auto [end, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc{} || end != value.data() + value.size()) {
    throw BadValue(key, value, expected);
  }
  return out;
}

}  // namespace

double ParseRealValue(std::string_view key, std::string_view value) {
  double v = 0.0;
  if (!ParseDouble(value, v)) throw BadValue(key, value, "a finite number");
  return v;
}

std::size_t ParseCountValue(std::string_view key, std::string_view value) {
  return ParseUnsigned<std::size_t>(key, value, "a non-negative integer");
}

std::uint64_t ParseSeedValue(std::string_view key, std::string_view value) {
  return ParseUnsigned<std::uint64_t>(key, value, "an unsigned 64-bit seed");
}

bool ParseBoolValue(std::string_view key, std::string_view value) {
  value = Trim(value);
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw BadValue(key, value, "true or false");
}

std::vector<std::size_t> ParseCountList(std::string_view key,
                                        std::string_view value) {
  std::vector<std::size_t> out;
  value = Trim(value);
  while (!value.empty()) {
    const std::size_t comma = value.find(',');
    out.push_back(ParseCountValue(key, value.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
    if (Trim(value).empty()) throw BadValue(key, value, "a count after ','");
  }
  return out;
}

}  // namespace fan
