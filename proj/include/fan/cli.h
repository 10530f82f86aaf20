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

#ifndef FAN_CLI_H_
#define FAN_CLI_H_

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include "fan/audit.h"
#include "fan/data.h"
#include "fan/error.h"
#include "fan/fan.h"
#include "fan/keyvalue.h"

namespace fan {

inline constexpr std::string_view kVersion = "1.0.0";

// Everything a command needs. Built from defaults, then a `key = value`
// config file, then command-line flags, later sources winning.
struct RunConfig {
  std::string input;
  std::string protected_column;
  std::string output_dir;
  std::map<std::string, ColumnKind> column_kinds;  // key `column.NAME`
  ProtectedMode mode = ProtectedMode::kClassification;
  std::size_t bins = 4;
  std::size_t max_protected_levels = 10;
  double validation_fraction = 0.3;
  std::uint64_t seed = 0;
  double tau = kDefaultDebiasThreshold;
  AuditMode audit_mode = AuditMode::kPreDebias;  // label for `audit` reports
  AuditConfig audit;
  TrainingConfig training;

  // Throws ConfigError on unknown keys and malformed values. `version` and
  // `config_hash`, written into manifests, are accepted and ignored.
  void Set(std::string_view key, std::string_view value);
  void Apply(const KeyValues& kv);
  // Every setting, in a form Apply() reads back.
  KeyValues Describe() const;
  // Throws ConfigError.
  void Validate(bool needs_output) const;

  LoadOptions Loading() const;
  // Training and audit configs with the run seed filled in.
  TrainingConfig Training() const;
  AuditConfig Audit() const;
};

RunConfig LoadRunConfig(const std::string& path);

// Loads `config.input` and assigns the seeded train/validation split.
Dataset LoadRunDataset(const RunConfig& config, std::ostream& err);

// Exit codes: 0 success, 1 configuration, 2 data or file access, 3 training.
int ExitCodeFor(ErrorKind kind);

// Run directory layout.
inline constexpr std::string_view kDebiasedFile = "debiased.csv";
inline constexpr std::string_view kTraceFile = "trace.csv";
inline constexpr std::string_view kChartFile = "convergence.svg";
inline constexpr std::string_view kPreAuditFile = "audit_pre.txt";
inline constexpr std::string_view kPostAuditFile = "audit_post.txt";
inline constexpr std::string_view kManifestFile = "manifest.txt";
inline constexpr std::string_view kAuditFile = "audit_report.txt";
inline constexpr std::string_view kPartialSuffix = ".partial";

int CmdDebias(const RunConfig& config, bool dry_run, std::ostream& out,
              std::ostream& err);
int CmdAudit(const RunConfig& config, std::ostream& out, std::ostream& err);
int CmdReport(const std::string& pre_path, const std::string& post_path,
              double tau, std::ostream& out, std::ostream& err);

// Parses argv and dispatches to a command.
int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace fan

#endif  // FAN_CLI_H_
