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

#include "fan/cli.h"

#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <vector>

#include "fan/csv.h"
#include "fan/metrics.h"
#include "fan/rng.h"

namespace fan {

namespace {

constexpr std::string_view kColumnPrefix = "column.";

std::string KindName(ColumnKind kind) {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

}  // namespace

void RunConfig::Set(std::string_view key, std::string_view value) {
  if (key == "input") {
    input = value;
  } else if (key == "protected") {
    protected_column = value;
  } else if (key == "out") {
    output_dir = value;
  } else if (key.starts_with(kColumnPrefix)) {
    const std::string name(key.substr(kColumnPrefix.size()));
    if (name.empty()) throw ConfigError("column override without a name");
    if (value == "numeric") {
      column_kinds[name] = ColumnKind::kNumeric;
    } else if (value == "categorical") {
      column_kinds[name] = ColumnKind::kCategorical;
    } else {
      throw ConfigError("setting '" + std::string(key) +
                        "': expected numeric or categorical");
    }
  } else if (key == "regression_adversary") {
    mode = ParseBoolValue(key, value) ? ProtectedMode::kRegression
                                      : ProtectedMode::kClassification;
  } else if (key == "bins") {
    bins = ParseCountValue(key, value);
  } else if (key == "max_protected_levels") {
    max_protected_levels = ParseCountValue(key, value);
  } else if (key == "validation_fraction") {
    validation_fraction = ParseRealValue(key, value);
  } else if (key == "seed") {
    seed = ParseSeedValue(key, value);
  } else if (key == "tau") {
    tau = ParseRealValue(key, value);
  } else if (key == "audit_mode") {
    if (value == AuditModeName(AuditMode::kPreDebias)) {
      audit_mode = AuditMode::kPreDebias;
    } else if (value == AuditModeName(AuditMode::kPostDebias)) {
      audit_mode = AuditMode::kPostDebias;
    } else {
      throw ConfigError("setting 'audit_mode': expected pre_debias or post_debias");
    }
  } else if (key == "audit_runs") {
    audit.runs = ParseCountValue(key, value);
  } else if (key == "audit_max_epochs") {
    audit.max_epochs = ParseCountValue(key, value);
  } else if (key == "audit_patience") {
    audit.patience = ParseCountValue(key, value);
  } else if (key == "audit_learning_rate") {
    audit.learning_rate = ParseRealValue(key, value);
  } else if (key == "audit_hidden_activation") {
    audit.hidden = ParseActivation(value);
  } else if (key == "version" || key == "config_hash") {
    // Informational manifest entries.
  } else {
    training.Set(key, value);
  }
}

void RunConfig::Apply(const KeyValues& kv) {
  for (const auto& [k, v] : kv) Set(k, v);
}

KeyValues RunConfig::Describe() const {
  KeyValues kv{
      {"input", input},
      {"protected", protected_column},
      {"out", output_dir},
  };
  for (const auto& [name, kind] : column_kinds) {
    kv.emplace_back(std::string(kColumnPrefix) + name, KindName(kind));
  }
  kv.insert(kv.end(), {
      {"regression_adversary",
       mode == ProtectedMode::kRegression ? "true" : "false"},
      {"bins", std::to_string(bins)},
      {"max_protected_levels", std::to_string(max_protected_levels)},
      {"validation_fraction", FormatDouble(validation_fraction)},
      {"seed", std::to_string(seed)},
      {"tau", FormatDouble(tau)},
      {"audit_mode", std::string(AuditModeName(audit_mode))},
      {"audit_runs", std::to_string(audit.runs)},
      {"audit_max_epochs", std::to_string(audit.max_epochs)},
      {"audit_patience", std::to_string(audit.patience)},
      {"audit_learning_rate", FormatDouble(audit.learning_rate)},
      {"audit_hidden_activation", std::string(ActivationName(audit.hidden))},
  });
  for (auto& entry : Training().Describe()) {
    if (entry.first != "seed") kv.push_back(std::move(entry));
  }
  return kv;
}

void RunConfig::Validate(bool needs_output) const {
  if (input.empty()) throw ConfigError("no input file given (--input)");
  if (protected_column.empty()) {
    throw ConfigError("no protected column given (--protected)");
  }
  if (needs_output && output_dir.empty()) {
    throw ConfigError("no output directory given (--out)");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw ConfigError("validation_fraction must lie strictly between 0 and 1");
  }
  if (bins < 2) throw ConfigError("bins must be at least 2");
  if (!(tau >= 0.0)) throw ConfigError("tau must be non-negative");
  if (audit.runs == 0 || audit.max_epochs == 0) {
    throw ConfigError("audits need at least one run and one epoch");
  }
  if (!(audit.learning_rate > 0.0)) {
    throw ConfigError("audit_learning_rate must be positive");
  }
  if (audit.hidden == Activation::kSoftmax) {
    throw ConfigError("softmax is not a hidden-layer activation");
  }
  Training().Validate();
}

LoadOptions RunConfig::Loading() const {
  LoadOptions o;
  o.overrides = column_kinds;
  o.mode = mode;
  o.bins = bins;
  o.max_protected_levels = max_protected_levels;
  return o;
}

TrainingConfig RunConfig::Training() const {
  TrainingConfig t = training;
  t.seed = seed;
  t.trace_audit.learning_rate = audit.learning_rate;
  t.trace_audit.hidden = audit.hidden;
  return t;
}

AuditConfig RunConfig::Audit() const {
  AuditConfig a = audit;
  a.seed = seed;
  return a;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::string text;
  try {
    text = ReadFile(path);
  } catch (const Error& e) {
    throw ConfigError("cannot read config file: " + std::string(e.what()));
  }
  RunConfig config;
  try {
    config.Apply(ParseKeyValues(text));
  } catch (const Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return config;
}

Dataset LoadRunDataset(const RunConfig& config, std::ostream& err) {
  LoadReport report;
  Dataset d =
      LoadCsv(config.input, config.protected_column, config.Loading(), &report);
  d = SplitDataset(std::move(d), config.validation_fraction,
                   DeriveSeed(config.seed, SeedStream::kSplit), &report);
  for (const std::string& w : report.warnings) err << "warning: " << w << "\n";
  if (report.dropped_rows > 0) {
    err << "warning: dropped " << report.dropped_rows
        << " rows with a missing protected value\n";
  }
  return d;
}

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInput:
      return 1;
    case ErrorKind::kIo:
    case ErrorKind::kData:
    case ErrorKind::kShape:
    case ErrorKind::kAudit:
      return 2;
    case ErrorKind::kTraining:
      return 3;
  }
  return 1;
}

namespace {

namespace fs = std::filesystem;

std::string PathIn(const std::string& dir, std::string_view name) {
  return (fs::path(dir) / name).string();
}

void MakeOutputDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir + "'");
  }
}

std::string Manifest(const RunConfig& config) {
  KeyValues kv{{"version", std::string(kVersion)},
               {"config_hash", config.Training().ConfigHash()}};
  for (auto& entry : config.Describe()) kv.push_back(std::move(entry));
  return "# Run manifest; pass back with --config to reproduce this run.\n" +
         FormatKeyValues(kv);
}

int Report(const Error& e, std::ostream& err) {
  err << "error (" << ErrorKindName(e.kind()) << "): " << e.what() << "\n";
  return ExitCodeFor(e.kind());
}

Table DebiasedTable(const Matrix& y, const Dataset& d) {
  return Decode(y, d.schema, &d.protected_attr.raw);
}

}  // namespace

int CmdDebias(const RunConfig& config, bool dry_run, std::ostream& out,
              std::ostream& err) {
  try {
    config.Validate(true);
    const Dataset d = LoadRunDataset(config, err);
    MakeOutputDir(config.output_dir);
    WriteFile(PathIn(config.output_dir, kManifestFile), Manifest(config));
    out << "rows: " << d.rows() << "\nfeatures: " << d.x.cols()
        << "\nvalidation_rows: " << d.split.validation.size() << "\n";
    if (dry_run) {
      out << "dry run: configuration and schema are valid\n";
      return 0;
    }

    const AuditReport pre =
        FullTrainAudit(d, config.Audit(), AuditMode::kPreDebias);
    WriteFile(PathIn(config.output_dir, kPreAuditFile), SerializeReport(pre));

    TrainingResult result;
    try {
      result = Train(d, config.Training());
    } catch (const TrainingFailure& f) {
      const std::string partial(kPartialSuffix);
      if (!f.trace().epochs.empty()) {
        ExportTrace(f.trace(),
                    PathIn(config.output_dir, kTraceFile) + partial);
      }
      if (f.ratchet().has_snapshot()) {
        WriteCsv(DebiasedTable(Forward(f.ratchet().snapshot, d.x), d),
                 PathIn(config.output_dir, kDebiasedFile) + partial);
      }
      throw;
    }

    // The post audit sees exactly what was written: the decoded table,
    // encoded again with the original schema.
    const Table debiased = DebiasedTable(result.output.y, d);
    WriteCsv(debiased, PathIn(config.output_dir, kDebiasedFile));
    const Matrix reencoded = Encode(debiased, d.schema);
    const AuditReport post =
        FullTrainAudit(reencoded, d.protected_attr, d.split, config.Audit(),
                       AuditMode::kPostDebias);
    WriteFile(PathIn(config.output_dir, kPostAuditFile), SerializeReport(post));
    ExportTrace(result.trace, PathIn(config.output_dir, kTraceFile));
    RenderConvergenceChart(result.trace, PathIn(config.output_dir, kChartFile));
    out << "ratchet_epoch: " << result.ratchet.epoch
        << "\nepochs: " << result.trace.epochs.size()
        << "\nstop_reason: " << result.trace.stop_reason << "\n";
    out << FormatBiasSummary(BiasReport(pre, post, config.tau));
    return 0;
  } catch (const Error& e) {
    return Report(e, err);
  }
}

int CmdAudit(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    config.Validate(true);
    const Dataset d = LoadRunDataset(config, err);
    MakeOutputDir(config.output_dir);
    const AuditReport r = FullTrainAudit(d, config.Audit(), config.audit_mode);
    WriteFile(PathIn(config.output_dir, kAuditFile), SerializeReport(r));
    out << "d_bar: " << FormatDouble(r.d_bar)
        << "\nbaseline: " << FormatDouble(r.baseline)
        << "\nfingerprint: " << r.fingerprint << "\n";
    return 0;
  } catch (const Error& e) {
    return Report(e, err);
  }
}

int CmdReport(const std::string& pre_path, const std::string& post_path,
              double tau, std::ostream& out, std::ostream& err) {
  auto load = [](const std::string& path) {
    try {
      return ParseReport(ReadFile(path));
    } catch (const Error& e) {
      throw InputError(path + ": " + e.what());
    }
  };
  try {
    const AuditReport pre = load(pre_path);
    const AuditReport post = load(post_path);
    out << FormatBiasSummary(BiasReport(pre, post, tau));
    return 0;
  } catch (const Error& e) {
    Report(e, err);
    return 1;
  }
}

int CliMain(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Adversarial debiasing of tabular data"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  struct Common {
    std::string config_path;
    std::optional<std::string> input, protected_column, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> bins;
    bool regression = false;
    std::vector<std::string> sets;
  };
  Common debias_opts, audit_opts;
  bool dry_run = false;
  auto add_common = [](CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "key = value config file");
    cmd->add_option("--input", c.input, "input CSV file");
    cmd->add_option("--protected", c.protected_column,
                    "name of the protected column");
    cmd->add_option("--out", c.out_dir, "output directory");
    cmd->add_option("--seed", c.seed, "base random seed");
    cmd->add_option("--bins", c.bins,
                    "quantile bins for a continuous protected column");
    cmd->add_flag("--regression-adversary", c.regression,
                  "treat the protected column as continuous");
    cmd->add_option("--set", c.sets, "extra KEY=VALUE setting (repeatable)");
  };
  CLI::App* debias = app.add_subcommand("debias", "train and export debiased data");
  add_common(debias, debias_opts);
  debias->add_flag("--dry-run", dry_run,
                   "validate config and schema, write the manifest only");
  CLI::App* audit = app.add_subcommand("audit", "audit a dataset for bias");
  add_common(audit, audit_opts);
  std::string pre_path, post_path;
  std::optional<double> tau;
  CLI::App* report = app.add_subcommand("report", "compare two audit reports");
  report->add_option("pre", pre_path, "audit report before debiasing")->required();
  report->add_option("post", post_path, "audit report after debiasing")->required();
  report->add_option("--tau", tau, "debiasing threshold on d_bar - baseline");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  auto build = [&](const Common& c) {
    RunConfig config =
        c.config_path.empty() ? RunConfig{} : LoadRunConfig(c.config_path);
    if (c.input) config.input = *c.input;
    if (c.protected_column) config.protected_column = *c.protected_column;
    if (c.out_dir) config.output_dir = *c.out_dir;
    if (c.seed) config.seed = *c.seed;
    if (c.bins) config.bins = *c.bins;
    if (c.regression) config.mode = ProtectedMode::kRegression;
    for (const std::string& s : c.sets) {
      const std::size_t eq = s.find('=');
      if (eq == std::string::npos) {
        throw ConfigError("--set expects KEY=VALUE, got '" + s + "'");
      }
      config.Set(s.substr(0, eq), s.substr(eq + 1));
    }
    return config;
  };

  try {
    if (debias->parsed()) {
      return CmdDebias(build(debias_opts), dry_run, out, err);
    }
    if (audit->parsed()) return CmdAudit(build(audit_opts), out, err);
    return CmdReport(pre_path, post_path, tau.value_or(kDefaultDebiasThreshold),
                     out, err);
  } catch (const Error& e) {
    return Report(e, err);
  }
}

}  // namespace fan
