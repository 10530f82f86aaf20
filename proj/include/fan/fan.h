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

#ifndef FAN_FAN_H_
#define FAN_FAN_H_

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fan/audit.h"
#include "fan/data.h"
#include "fan/error.h"
#include "fan/keyvalue.h"
#include "fan/matrix.h"
#include "fan/nn.h"

namespace fan {

// Multiplies the autoencoder learning rate by `factor` for `length` epochs
// starting at `first_epoch`. Used to inject divergence in tests.
struct LearningRateSpike {
  std::size_t first_epoch = 0;
  std::size_t length = 0;
  double factor = 1.0;
};

struct TrainingConfig {
  double c = 1.0;     // weight of the bias term in the autoencoder loss
  std::size_t k = 5;  // adversary steps per autoencoder step
  double autoencoder_lr = 1e-3;
  double adversary_lr = 1e-3;
  double weight_decay = 1e-4;
  double contractive_weight = 1e-4;

  std::size_t pool_size = 3;
  std::size_t pool_restart_period = 300;  // epochs between cold restarts

  std::size_t max_epochs = 5000;
  std::size_t patience = 500;
  double improvement_tolerance = 1e-5;  // relative

  // Epochs between fully-trained audits recorded in the trace; 0 disables.
  std::size_t audit_period = 500;
  AuditConfig trace_audit{.runs = 3, .max_epochs = 1000, .patience = 0};

  // Autoencoder hidden widths; empty means one layer of ceil(d / 2).
  std::vector<std::size_t> autoencoder_hidden;
  Activation autoencoder_activation = Activation::kTanh;
  Activation adversary_activation = Activation::kTanh;

  std::uint64_t seed = 0;
  // Epochs before the ratchet accepts snapshots; until then the pool is too
  // weak for L_A to be comparable with later epochs.
  std::size_t ratchet_warmup = 300;
  std::size_t max_recoveries = 3;
  bool parallel_pool = false;
  std::optional<LearningRateSpike> lr_spike;

  // Throws ConfigError.
  void Validate() const;
  // Stable key/value rendering of every setting; also the input to
  // ConfigHash(). Set() accepts exactly these keys.
  KeyValues Describe() const;
  // Throws ConfigError for an unknown key or a malformed value.
  void Set(std::string_view key, std::string_view value);
  std::string ConfigHash() const;
};

// Prediction target shared by every adversary: class labels, or z-scored
// values for a continuous protected attribute.
struct AdversaryTarget {
  ProtectedMode mode = ProtectedMode::kClassification;
  std::vector<int> labels;
  Matrix values;  // [n x 1]
  std::size_t outputs = 0;
  std::vector<double> prior;  // class frequencies; empty for regression
  // Loss of the best input-independent predictor: the entropy of the class
  // prior, or 1 for z-scored regression targets.
  double chance_loss = 0.0;

  static AdversaryTarget From(const ProtectedTarget& target);
};

// Adversary objective: cross entropy, or MSE against z-scored values.
double RacistLoss(const Matrix& r_hat, const AdversaryTarget& target);
Matrix RacistLossGrad(const Matrix& r_hat, const AdversaryTarget& target);

struct LossComponents {
  double mse = 0.0;
  double dhat = 0.0;  // bias penalty, already clamped at chance
  double reg = 0.0;
  double total = 0.0;
  double pool_loss = 0.0;  // mean adversary loss across the pool
};

// Bias penalty from the pool's predictions on y: chance loss minus the loss
// of the strongest member (the lowest adversary loss), floored at zero so a
// worse-than-chance adversary earns no reward. `strongest` receives the
// member's index.
double DhatFromPredictions(std::span<const Matrix> pool_predictions,
                           const AdversaryTarget& target,
                           double* mean_loss = nullptr,
                           std::size_t* strongest = nullptr);

// weight_decay * sum ||W||^2 + contractive_weight * mean_rows ||dh/dx||_F^2,
// h being the first hidden layer of the autoencoder.
double Regularizers(const NetworkParams& autoencoder, const Matrix& x,
                    const TrainingConfig& config);
GradientSet RegularizerGradient(const NetworkParams& autoencoder,
                                const Matrix& x, const TrainingConfig& config);

// L_A = mse(y, x) + c * dhat + R.
LossComponents AutoencoderLoss(const Matrix& x, const Matrix& y,
                               std::span<const Matrix> pool_predictions,
                               const AdversaryTarget& target,
                               const TrainingConfig& config,
                               const NetworkParams& autoencoder);

struct AdversaryMember {
  NetworkParams params;
  OptimizerState optimizer;
  std::size_t age = 0;  // training steps since the last cold start
  std::size_t generation = 0;
};

// Adversaries cold-restarted on a staggered schedule, so that at any time
// some member has trained on the current encoding for a long while.
class AdversaryPool {
 public:
  AdversaryPool(std::size_t inputs, const AdversaryTarget& target,
                const TrainingConfig& config);

  // Restarts every member whose turn falls on `epoch` (1-based).
  void RestartDue(std::size_t epoch);
  void Restart(std::size_t member);

  std::vector<Matrix> Predict(const Matrix& y) const;

  struct Estimate {
    double penalty = 0.0;
    double mean_loss = 0.0;
    double oldest_loss = 0.0;  // loss of the longest-trained member
    Matrix grad_y;             // d penalty / d y
  };
  Estimate Evaluate(const Matrix& y) const;

  // `steps` full-batch updates of every member on a frozen y.
  void Train(const Matrix& y, std::size_t steps);

  void SetLearningRate(double lr);

  const std::vector<AdversaryMember>& members() const { return members_; }
  std::size_t RestartOffset(std::size_t member) const;

 private:
  std::size_t inputs_;
  AdversaryTarget target_;
  TrainingConfig config_;
  double learning_rate_;
  std::vector<AdversaryMember> members_;
};

std::uint64_t PoolMemberSeed(std::uint64_t base, std::size_t member,
                             std::size_t generation);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double mse = 0.0;
  double d_current = 0.0;  // adversary loss of the longest-trained member
  double d_hat = 0.0;
  double l_a = 0.0;
  std::optional<double> ratchet_best;  // empty during the ratchet warm-up
  std::optional<double> d_bar;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainingTrace {
  std::vector<EpochRecord> epochs;
  std::optional<double> baseline;
  std::size_t recoveries = 0;
  std::string stop_reason;

  friend bool operator==(const TrainingTrace&, const TrainingTrace&) = default;
};

// Keeps the autoencoder with the lowest L_A seen.
struct RatchetState {
  double best_loss = std::numeric_limits<double>::infinity();
  NetworkParams snapshot;
  std::size_t epoch = 0;

  bool has_snapshot() const { return !snapshot.layers.empty(); }
  // Stores `params` if `loss` is strictly lower; returns whether it did.
  bool Offer(double loss, const NetworkParams& params, std::size_t epoch);
};

enum class StopDecision { kContinue, kStop };

// Stop at max_epochs, or once the ratchet-best L_A has not improved by more
// than the relative tolerance for `patience` consecutive epochs.
StopDecision StoppingCriterion(const TrainingTrace& trace,
                               const TrainingConfig& config);

struct DebiasedOutput {
  Matrix y;
  Table table;  // decoded, protected column omitted
  std::string config_hash;
  std::uint64_t seed = 0;
};

struct TrainingResult {
  DebiasedOutput output;
  TrainingTrace trace;
  RatchetState ratchet;
  NetworkParams final_autoencoder;  // state at the last epoch
};

// Raised when training cannot recover from divergence. Carries the last good
// ratchet snapshot and the trace so far.
class TrainingFailure : public Error {
 public:
  TrainingFailure(const std::string& message, RatchetState ratchet,
                  TrainingTrace trace)
      : Error(ErrorKind::kTraining, message),
        ratchet_(std::move(ratchet)),
        trace_(std::move(trace)) {}

  const RatchetState& ratchet() const { return ratchet_; }
  const TrainingTrace& trace() const { return trace_; }

 private:
  RatchetState ratchet_;
  TrainingTrace trace_;
};

NetworkParams MakeAutoencoder(std::size_t features,
                              const TrainingConfig& config);

// Alternates one autoencoder update on L_A with k updates of every adversary
// on the refreshed reconstruction, until StoppingCriterion says stop. The
// returned y comes from the ratchet snapshot. Periodic audits use the
// dataset's split.
TrainingResult Train(const Dataset& dataset, const TrainingConfig& config);

}  // namespace fan

#endif  // FAN_FAN_H_
