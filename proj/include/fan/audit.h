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

#ifndef FAN_AUDIT_H_
#define FAN_AUDIT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fan/data.h"
#include "fan/kernels.h"
#include "fan/matrix.h"
#include "fan/nn.h"

namespace fan {

// Measures how well a freshly trained adversary can recover the protected
// characteristic: a network with one hidden layer as wide as the data,
// trained full-batch from several random initializations. The score of a run
// is its best validation accuracy over all epochs (R^2 for a continuous
// target); the audit keeps the best run.
struct AuditConfig {
  std::size_t runs = 3;
  std::size_t max_epochs = 10000;
  // Stop a run after this many epochs without a new best; 0 disables.
  std::size_t patience = 2000;
  double learning_rate = 1e-3;
  Activation hidden = Activation::kTanh;
  std::uint64_t seed = 0;
  bool parallel_runs = true;
};

enum class AuditMode { kPreDebias, kPostDebias };

std::string_view AuditModeName(AuditMode mode);

struct AuditRun {
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;
  double best_score = 0.0;
  std::size_t epochs_run = 0;
  bool early_exit = false;

  friend bool operator==(const AuditRun&, const AuditRun&) = default;
};

struct AuditReport {
  AuditMode mode = AuditMode::kPreDebias;
  ProtectedMode target = ProtectedMode::kClassification;
  double d_bar = 0.0;     // max over runs of best_score
  double baseline = 0.0;  // majority accuracy; 0 for R^2
  double baseline_ci_low = 0.0;
  double baseline_ci_high = 0.0;
  std::size_t num_classes = 0;
  std::size_t validation_rows = 0;
  std::size_t max_epochs = 0;
  std::size_t patience = 0;
  std::string fingerprint;
  std::vector<AuditRun> runs;

  friend bool operator==(const AuditReport&, const AuditReport&) = default;
};

// Identifies the protected labels and the split, not the features, so the
// audits before and after debiasing share it.
std::string DatasetFingerprint(const ProtectedTarget& target,
                               const Split& split);

// Accuracy on the validation rows of always predicting the training mode
// (ties go to the lowest class index).
double MajorityBaseline(const ProtectedTarget& target, const Split& split);

// The audit adversary: features -> hidden (same width) -> classes.
NetworkParams AuditNetwork(std::size_t features, std::size_t outputs,
                           Activation hidden, std::uint64_t seed);

// Seed of audit run `run`; drawn from a stream no other component uses.
std::uint64_t AuditRunSeed(std::uint64_t base, std::size_t run);

AuditReport FullTrainAudit(const Matrix& features, const ProtectedTarget& target,
                           const Split& split, const AuditConfig& config,
                           AuditMode mode = AuditMode::kPreDebias);

// Convenience overload over a split dataset.
AuditReport FullTrainAudit(const Dataset& dataset, const AuditConfig& config,
                           AuditMode mode = AuditMode::kPreDebias);

enum class Verdict { kDebiased, kNotDebiased };

struct BiasSummary {
  double pre_d_bar = 0.0;
  double post_d_bar = 0.0;
  double baseline = 0.0;
  double baseline_ci_low = 0.0;
  double baseline_ci_high = 0.0;
  double gap_pre = 0.0;
  double gap_post = 0.0;
  double tau = 0.05;
  Verdict verdict = Verdict::kNotDebiased;
  bool below_chance = false;
};

inline constexpr double kDefaultDebiasThreshold = 0.05;

// Debiased iff post.d_bar - baseline <= tau. Throws AuditError when the
// reports describe different datasets or splits.
BiasSummary BiasReport(const AuditReport& pre, const AuditReport& post,
                       double tau = kDefaultDebiasThreshold);

std::string FormatBiasSummary(const BiasSummary& summary);

// Flat `key = value` text, one entry per line.
std::string SerializeReport(const AuditReport& report);
// Throws InputError with a line-numbered diagnostic on malformed input.
AuditReport ParseReport(std::string_view text);

}  // namespace fan

#endif  // FAN_AUDIT_H_
