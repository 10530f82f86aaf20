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

#ifndef FAN_CSV_H_
#define FAN_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace fan {

// A header row plus string cells, as read from or written to disk.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of the named column; throws ConfigError when absent.
  std::size_t ColumnIndex(std::string_view name) const;
  bool HasColumn(std::string_view name) const;
};

struct CsvOptions {
  char delimiter = ',';
};

// RFC 4180 parsing: quoted fields, doubled quotes, CRLF or LF records.
// Every record must have as many fields as the header (DataError otherwise).
Table ParseCsv(std::string_view text, const CsvOptions& options = {});
Table ReadCsv(const std::string& path, const CsvOptions& options = {});

// Quotes only fields that need it. LF line endings.
std::string FormatCsv(const Table& table, const CsvOptions& options = {});
void WriteCsv(const Table& table, const std::string& path,
              const CsvOptions& options = {});

// Reads a whole file; throws IoError.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

// Shortest text that parses back to exactly `value`.
std::string FormatDouble(double value);
// Strict numeric parse of a whole cell (surrounding blanks allowed).
bool ParseDouble(std::string_view text, double& value);

}  // namespace fan

#endif  // FAN_CSV_H_
