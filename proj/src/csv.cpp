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

#include "fan/csv.h"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fan/error.h"

namespace fan {

std::size_t Table::ColumnIndex(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ConfigError("column '" + std::string(name) + "' not found");
}

bool Table::HasColumn(std::string_view name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

Table ParseCsv(std::string_view text, const CsvOptions& options) {
  const char delim = options.delimiter;
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    // A bare blank line is skipped rather than read as one empty field.
    if (!(record.size() == 1 && record[0].empty())) {
      records.push_back(std::move(record));
    }
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    if (ch == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (ch == delim) {
      end_field();
    } else if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
      // CRLF: handled by the '\n'.
    } else if (ch == '\n') {
      end_record();
      ++line;
    } else {
      field.push_back(ch);
      field_started = true;
    }
  }
  if (in_quotes) {
    throw DataError("unterminated quoted field near line " +
                    std::to_string(line));
  }
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw DataError("CSV has no header row");
  Table table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw DataError("record " + std::to_string(r) + " has " +
                      std::to_string(records[r].size()) + " fields, header has " +
                      std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for '" + path + "'");
}

Table ReadCsv(const std::string& path, const CsvOptions& options) {
  return ParseCsv(ReadFile(path), options);
}

namespace {

void AppendField(std::string& out, const std::string& field, char delim) {
  const bool quote = field.find_first_of(std::string{delim, '"', '\n', '\r'}) !=
                     std::string::npos;
  if (!quote) {
    out += field;
    return;
  }
  out.push_back('"');
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
}

void AppendRecord(std::string& out, const std::vector<std::string>& fields,
                  char delim) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(delim);
    AppendField(out, fields[i], delim);
  }
  out.push_back('\n');
}

}  // namespace

std::string FormatCsv(const Table& table, const CsvOptions& options) {
  std::string out;
  AppendRecord(out, table.header, options.delimiter);
  for (const auto& row : table.rows) AppendRecord(out, row, options.delimiter);
  return out;
}

void WriteCsv(const Table& table, const std::string& path,
              const CsvOptions& options) {
  WriteFile(path, FormatCsv(table, options));
}

std::string FormatDouble(double value) {
  if (value == 0.0) return "0";  // folds -0
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InputError("cannot format number");
  return std::string(buf, end);
}

bool ParseDouble(std::string_view text, double& value) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(value);
}

}  // namespace fan
