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

#include "fan/audit.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <cstring>
#include <exception>
#include <map>

#include "fan/csv.h"
#include "fan/error.h"
#include "fan/keyvalue.h"
#include "fan/rng.h"

namespace fan {

std::string_view AuditModeName(AuditMode mode) {
  return mode == AuditMode::kPreDebias ? "pre_debias" : "post_debias";
}

std::string DatasetFingerprint(const ProtectedTarget& target,
                               const Split& split) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(target.size());
  mix(static_cast<std::uint64_t>(target.mode));
  if (target.mode == ProtectedMode::kClassification) {
    mix(target.num_classes());
    for (int l : target.labels) mix(static_cast<std::uint64_t>(l));
  } else {
    for (double v : target.values) {
      std::uint64_t bits;
      std::memcpy(&bits, &v, sizeof bits);
      mix(bits);
    }
  }
  mix(split.validation.size());
  for (std::size_t i : split.validation) mix(i);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double MajorityBaseline(const ProtectedTarget& target, const Split& split) {
  if (split.validation.empty()) throw AuditError("validation split is empty");
  if (target.mode == ProtectedMode::kRegression) return 0.0;
  std::vector<std::size_t> counts(target.num_classes(), 0);
  for (std::size_t i : split.train) ++counts[target.labels[i]];
  const auto mode = static_cast<int>(
      std::max_element(counts.begin(), counts.end()) - counts.begin());
  std::size_t hits = 0;
  for (std::size_t i : split.validation) hits += target.labels[i] == mode;
  return static_cast<double>(hits) /
         static_cast<double>(split.validation.size());
}

NetworkParams AuditNetwork(std::size_t features, std::size_t outputs,
                           Activation hidden, std::uint64_t seed) {
  const std::size_t sizes[] = {features, features, outputs};
  const Activation acts[] = {hidden, outputs > 1 ? Activation::kSoftmax
                                                 : Activation::kIdentity};
  return InitParams(sizes, acts, seed);
}

std::uint64_t AuditRunSeed(std::uint64_t base, std::size_t run) {
  return DeriveSeed(base, SeedStream::kAudit, run);
}

namespace {

struct Problem {
  Matrix train_x;
  Matrix val_x;
  std::vector<int> train_labels;
  std::vector<int> val_labels;
  Matrix train_targets;  // regression: standardized values [n x 1]
  std::vector<double> val_values;
  double target_mean = 0.0;
  double target_scale = 1.0;
  bool regression = false;
  std::size_t outputs = 0;
};

Problem MakeProblem(const Matrix& features, const ProtectedTarget& target,
                    const Split& split) {
  Problem p;
  p.train_x = features.SelectRows(split.train);
  p.val_x = features.SelectRows(split.validation);
  p.regression = target.mode == ProtectedMode::kRegression;
  if (p.regression) {
    double mean = 0.0;
    for (std::size_t i : split.train) mean += target.values[i];
    mean /= static_cast<double>(split.train.size());
    double var = 0.0;
    for (std::size_t i : split.train) {
      var += (target.values[i] - mean) * (target.values[i] - mean);
    }
    var /= static_cast<double>(split.train.size());
    p.target_mean = mean;
    p.target_scale = var > 0.0 ? std::sqrt(var) : 1.0;
    p.train_targets = Matrix(split.train.size(), 1);
    for (std::size_t k = 0; k < split.train.size(); ++k) {
      p.train_targets(k, 0) =
          (target.values[split.train[k]] - mean) / p.target_scale;
    }
    for (std::size_t i : split.validation) p.val_values.push_back(target.values[i]);
    p.outputs = 1;
  } else {
    for (std::size_t i : split.train) p.train_labels.push_back(target.labels[i]);
    for (std::size_t i : split.validation) {
      p.val_labels.push_back(target.labels[i]);
    }
    p.outputs = target.num_classes();
  }
  return p;
}

double Accuracy(const Matrix& probs, const std::vector<int>& labels) {
  std::size_t hits = 0;
  for (std::size_t r = 0; r < probs.rows(); ++r) {
    auto row = probs.row(r);
    const auto pred = static_cast<int>(
        std::max_element(row.begin(), row.end()) - row.begin());
    hits += pred == labels[r];
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double RSquared(const Matrix& pred, const Problem& p) {
  double mean = 0.0;
  for (double v : p.val_values) mean += v;
  mean /= static_cast<double>(p.val_values.size());
  double sse = 0.0;
  double sst = 0.0;
  for (std::size_t r = 0; r < pred.rows(); ++r) {
    const double yhat = pred(r, 0) * p.target_scale + p.target_mean;
    sse += (yhat - p.val_values[r]) * (yhat - p.val_values[r]);
    sst += (p.val_values[r] - mean) * (p.val_values[r] - mean);
  }
  return sst > 0.0 ? 1.0 - sse / sst : 0.0;
}

AuditRun TrainRun(const Problem& p, const AuditConfig& config,
                  std::uint64_t seed) {
  AuditRun run;
  run.seed = seed;
  run.best_score = -std::numeric_limits<double>::infinity();
  NetworkParams net =
      AuditNetwork(p.train_x.cols(), p.outputs, config.hidden, seed);
  OptimizerState opt = OptimizerState::For(
      net, {OptimizerKind::kAdam, config.learning_rate});
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const ForwardCache cache = ForwardWithCache(net, p.train_x);
    const Matrix grad = p.regression
                            ? MseGrad(cache.output(), p.train_targets)
                            : CrossEntropyGrad(cache.output(), p.train_labels);
    OptimizerStep(net, Backward(net, cache, grad).grads, opt);

    const Matrix val = Forward(net, p.val_x);
    const double score =
        p.regression ? RSquared(val, p) : Accuracy(val, p.val_labels);
    run.epochs_run = epoch;
    if (score > run.best_score) {
      run.best_score = score;
      run.best_epoch = epoch;
    }
    if (config.patience > 0 && epoch - run.best_epoch >= config.patience &&
        epoch < config.max_epochs) {
      run.early_exit = true;
      break;
    }
  }
  return run;
}

}  // namespace

AuditReport FullTrainAudit(const Matrix& features, const ProtectedTarget& target,
                           const Split& split, const AuditConfig& config,
                           AuditMode mode) {
  if (config.runs == 0 || config.max_epochs == 0) {
    throw ConfigError("audit needs at least one run and one epoch");
  }
  if (features.rows() != target.size()) {
    throw ShapeError("audit: features and protected column differ in length");
  }
  if (split.validation.empty() || split.train.empty()) {
    throw AuditError("audit needs non-empty training and validation splits");
  }
  if (!features.AllFinite()) throw InputError("audit: non-finite features");
  if (target.mode == ProtectedMode::kClassification) {
    std::vector<bool> present(target.num_classes(), false);
    for (std::size_t i : split.validation) present[target.labels[i]] = true;
    if (std::count(present.begin(), present.end(), true) < 2) {
      throw AuditError("validation split contains a single protected class");
    }
  }

  const Problem problem = MakeProblem(features, target, split);
  AuditReport report;
  report.mode = mode;
  report.target = target.mode;
  report.num_classes = target.num_classes();
  report.validation_rows = split.validation.size();
  report.max_epochs = config.max_epochs;
  report.patience = config.patience;
  report.fingerprint = DatasetFingerprint(target, split);
  report.baseline = MajorityBaseline(target, split);
  if (target.mode == ProtectedMode::kClassification) {
    const double b = report.baseline;
    const double half = 1.96 * std::sqrt(b * (1.0 - b) /
                                         static_cast<double>(
                                             split.validation.size()));
    report.baseline_ci_low = std::max(0.0, b - half);
    report.baseline_ci_high = std::min(1.0, b + half);
  }

  report.runs.resize(config.runs);
  std::vector<std::exception_ptr> errors(config.runs);
  const auto runs = static_cast<std::int64_t>(config.runs);
#pragma omp parallel for schedule(dynamic) if (config.parallel_runs)
  for (std::int64_t r = 0; r < runs; ++r) {
    try {
      report.runs[r] = TrainRun(problem, config,
                                AuditRunSeed(config.seed, static_cast<std::size_t>(r)));
    } catch (...) {
      errors[r] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  report.d_bar = report.runs.front().best_score;
  for (const AuditRun& run : report.runs) {
    report.d_bar = std::max(report.d_bar, run.best_score);
  }
  return report;
}

AuditReport FullTrainAudit(const Dataset& dataset, const AuditConfig& config,
                           AuditMode mode) {
  return FullTrainAudit(dataset.x, dataset.protected_attr, dataset.split,
                        config, mode);
}

BiasSummary BiasReport(const AuditReport& pre, const AuditReport& post,
                       double tau) {
  if (pre.fingerprint != post.fingerprint) {
    throw AuditError("reports describe different datasets or splits (" +
                     pre.fingerprint + " vs " + post.fingerprint + ")");
  }
  if (pre.target != post.target) {
    throw AuditError("reports use different adversary modes");
  }
  BiasSummary s;
  s.pre_d_bar = pre.d_bar;
  s.post_d_bar = post.d_bar;
  s.baseline = post.baseline;
  s.baseline_ci_low = post.baseline_ci_low;
  s.baseline_ci_high = post.baseline_ci_high;
  s.gap_pre = pre.d_bar - pre.baseline;
  s.gap_post = post.d_bar - post.baseline;
  s.tau = tau;
  s.verdict = s.gap_post <= tau ? Verdict::kDebiased : Verdict::kNotDebiased;
  s.below_chance = post.d_bar < post.baseline;
  return s;
}

std::string FormatBiasSummary(const BiasSummary& s) {
  char buf[1024];
  std::snprintf(buf, sizeof buf,
                "pre_d_bar: %.4f\n"
                "post_d_bar: %.4f\n"
                "baseline: %.4f (95%% binomial interval %.4f-%.4f)\n"
                "gap_to_baseline_pre: %+.4f\n"
                "gap_to_baseline_post: %+.4f\n"
                "threshold: %.4f\n"
                "verdict: %s\n",
                s.pre_d_bar, s.post_d_bar, s.baseline, s.baseline_ci_low,
                s.baseline_ci_high, s.gap_pre, s.gap_post, s.tau,
                s.verdict == Verdict::kDebiased ? "debiased" : "not_debiased");
  std::string out = buf;
  if (s.below_chance) {
    out += "warning: post-debias adversary scores below the majority baseline\n";
  }
  return out;
}

std::string SerializeReport(const AuditReport& r) {
  KeyValues kv{
      {"format", "fan-audit-report-v1"},
      {"mode", std::string(AuditModeName(r.mode))},
      {"target", r.target == ProtectedMode::kClassification ? "classification"
                                                             : "regression"},
      {"d_bar", FormatDouble(r.d_bar)},
      {"baseline", FormatDouble(r.baseline)},
      {"baseline_ci_low", FormatDouble(r.baseline_ci_low)},
      {"baseline_ci_high", FormatDouble(r.baseline_ci_high)},
      {"num_classes", std::to_string(r.num_classes)},
      {"validation_rows", std::to_string(r.validation_rows)},
      {"max_epochs", std::to_string(r.max_epochs)},
      {"patience", std::to_string(r.patience)},
      {"fingerprint", r.fingerprint},
      {"runs", std::to_string(r.runs.size())},
  };
  for (std::size_t i = 0; i < r.runs.size(); ++i) {
    const std::string p = "run." + std::to_string(i) + ".";
    const AuditRun& run = r.runs[i];
    kv.emplace_back(p + "seed", std::to_string(run.seed));
    kv.emplace_back(p + "best_epoch", std::to_string(run.best_epoch));
    kv.emplace_back(p + "best_score", FormatDouble(run.best_score));
    kv.emplace_back(p + "epochs_run", std::to_string(run.epochs_run));
    kv.emplace_back(p + "early_exit", run.early_exit ? "true" : "false");
  }
  return FormatKeyValues(kv);
}

namespace {

const std::string& Require(const KeyValues& kv, const std::string& key) {
  const std::string* v = FindValue(kv, key);
  if (v == nullptr) throw InputError("report lacks key '" + key + "'");
  return *v;
}

double RequireDouble(const KeyValues& kv, const std::string& key) {
  double v;
  if (!ParseDouble(Require(kv, key), v)) {
    throw InputError("report key '" + key + "' is not a number");
  }
  return v;
}

std::uint64_t RequireUnsigned(const KeyValues& kv, const std::string& key) {
  const std::string& s = Require(kv, key);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("report key '" + key + "' is not a non-negative integer");
  }
  return v;
}

bool RequireBool(const KeyValues& kv, const std::string& key) {
  const std::string& s = Require(kv, key);
  if (s == "true") return true;
  if (s == "false") return false;
  throw InputError("report key '" + key + "' is not true/false");
}

}  // namespace

AuditReport ParseReport(std::string_view text) {
  const KeyValues kv = ParseKeyValues(text);
  if (Require(kv, "format") != "fan-audit-report-v1") {
    throw InputError("unknown report format '" + Require(kv, "format") + "'");
  }
  AuditReport r;
  const std::string& mode = Require(kv, "mode");
  if (mode == "pre_debias") {
    r.mode = AuditMode::kPreDebias;
  } else if (mode == "post_debias") {
    r.mode = AuditMode::kPostDebias;
  } else {
    throw InputError("report key 'mode' has unknown value '" + mode + "'");
  }
  const std::string& target = Require(kv, "target");
  if (target == "classification") {
    r.target = ProtectedMode::kClassification;
  } else if (target == "regression") {
    r.target = ProtectedMode::kRegression;
  } else {
    throw InputError("report key 'target' has unknown value '" + target + "'");
  }
  r.d_bar = RequireDouble(kv, "d_bar");
  r.baseline = RequireDouble(kv, "baseline");
  r.baseline_ci_low = RequireDouble(kv, "baseline_ci_low");
  r.baseline_ci_high = RequireDouble(kv, "baseline_ci_high");
  r.num_classes = RequireUnsigned(kv, "num_classes");
  r.validation_rows = RequireUnsigned(kv, "validation_rows");
  r.max_epochs = RequireUnsigned(kv, "max_epochs");
  r.patience = RequireUnsigned(kv, "patience");
  r.fingerprint = Require(kv, "fingerprint");
  const std::uint64_t runs = RequireUnsigned(kv, "runs");
  if (runs == 0 || runs > 1000) throw InputError("report run count invalid");
  for (std::uint64_t i = 0; i < runs; ++i) {
    const std::string p = "run." + std::to_string(i) + ".";
    AuditRun run;
    run.seed = RequireUnsigned(kv, p + "seed");
    run.best_epoch = RequireUnsigned(kv, p + "best_epoch");
    run.best_score = RequireDouble(kv, p + "best_score");
    run.epochs_run = RequireUnsigned(kv, p + "epochs_run");
    run.early_exit = RequireBool(kv, p + "early_exit");
    r.runs.push_back(run);
  }
  double best = r.runs.front().best_score;
  for (const auto& run : r.runs) best = std::max(best, run.best_score);
  if (best != r.d_bar) {
    throw InputError("report d_bar does not equal the best run score");
  }
  return r;
}

}  // namespace fan
