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

#include "fan/fan.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

#include "fan/csv.h"
#include "fan/rng.h"

namespace fan {

namespace {

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

void TrainingConfig::Validate() const {
  Require(c > 0.0 || c == 0.0, "c must be non-negative");
  Require(std::isfinite(c), "c must be finite");
  Require(k >= 1, "k must be at least 1");
  Require(autoencoder_lr >= 0.0 && adversary_lr >= 0.0,
          "learning rates must be non-negative");
  Require(weight_decay >= 0.0 && contractive_weight >= 0.0,
          "regularizer weights must be non-negative");
  Require(pool_size >= 1, "adversary pool needs at least one member");
  Require(pool_restart_period >= 1, "pool restart period must be positive");
  Require(max_epochs >= 1, "max_epochs must be positive");
  Require(patience >= 1, "patience must be positive");
  Require(improvement_tolerance >= 0.0, "tolerance must be non-negative");
  Require(autoencoder_activation != Activation::kSoftmax &&
              adversary_activation != Activation::kSoftmax,
          "softmax is not a hidden-layer activation");
  Require(audit_period == 0 ||
              (trace_audit.runs >= 1 && trace_audit.max_epochs >= 1),
          "trace audits need at least one run and one epoch");
  for (std::size_t h : autoencoder_hidden) {
    Require(h > 0, "autoencoder hidden widths must be positive");
  }
}

KeyValues TrainingConfig::Describe() const {
  std::string hidden;
  for (std::size_t i = 0; i < autoencoder_hidden.size(); ++i) {
    if (i > 0) hidden += ",";
    hidden += std::to_string(autoencoder_hidden[i]);
  }
  auto real = [](double v) { return FormatDouble(v); };
  auto count = [](std::size_t v) { return std::to_string(v); };
  KeyValues kv{
      {"c", real(c)},
      {"k", count(k)},
      {"autoencoder_lr", real(autoencoder_lr)},
      {"adversary_lr", real(adversary_lr)},
      {"weight_decay", real(weight_decay)},
      {"contractive_weight", real(contractive_weight)},
      {"pool_size", count(pool_size)},
      {"pool_restart_period", count(pool_restart_period)},
      {"max_epochs", count(max_epochs)},
      {"patience", count(patience)},
      {"improvement_tolerance", real(improvement_tolerance)},
      {"audit_period", count(audit_period)},
      {"trace_audit_runs", count(trace_audit.runs)},
      {"trace_audit_epochs", count(trace_audit.max_epochs)},
      {"trace_audit_patience", count(trace_audit.patience)},
      {"autoencoder_hidden", hidden},
      {"autoencoder_activation", std::string(ActivationName(autoencoder_activation))},
      {"adversary_activation", std::string(ActivationName(adversary_activation))},
      {"seed", std::to_string(seed)},
      {"ratchet_warmup", count(ratchet_warmup)},
      {"max_recoveries", count(max_recoveries)},
      {"parallel_pool", parallel_pool ? "true" : "false"},
  };
  if (lr_spike) {
    kv.emplace_back("lr_spike_first_epoch", count(lr_spike->first_epoch));
    kv.emplace_back("lr_spike_length", count(lr_spike->length));
    kv.emplace_back("lr_spike_factor", real(lr_spike->factor));
  }
  return kv;
}

void TrainingConfig::Set(std::string_view key, std::string_view value) {
  auto real = [&] { return ParseRealValue(key, value); };
  auto count = [&] { return ParseCountValue(key, value); };
  auto spike = [&]() -> LearningRateSpike& {
    if (!lr_spike) lr_spike = LearningRateSpike{};
    return *lr_spike;
  };
  if (key == "c") c = real();
  else if (key == "k") k = count();
  else if (key == "autoencoder_lr") autoencoder_lr = real();
  else if (key == "adversary_lr") adversary_lr = real();
  else if (key == "weight_decay") weight_decay = real();
  else if (key == "contractive_weight") contractive_weight = real();
  else if (key == "pool_size") pool_size = count();
  else if (key == "pool_restart_period") pool_restart_period = count();
  else if (key == "max_epochs") max_epochs = count();
  else if (key == "patience") patience = count();
  else if (key == "improvement_tolerance") improvement_tolerance = real();
  else if (key == "audit_period") audit_period = count();
  else if (key == "trace_audit_runs") trace_audit.runs = count();
  else if (key == "trace_audit_epochs") trace_audit.max_epochs = count();
  else if (key == "trace_audit_patience") trace_audit.patience = count();
  else if (key == "autoencoder_hidden") autoencoder_hidden = ParseCountList(key, value);
  else if (key == "autoencoder_activation") autoencoder_activation = ParseActivation(value);
  else if (key == "adversary_activation") adversary_activation = ParseActivation(value);
  else if (key == "seed") seed = ParseSeedValue(key, value);
  else if (key == "ratchet_warmup") ratchet_warmup = count();
  else if (key == "max_recoveries") max_recoveries = count();
  else if (key == "parallel_pool") parallel_pool = ParseBoolValue(key, value);
  else if (key == "lr_spike_first_epoch") spike().first_epoch = count();
  else if (key == "lr_spike_length") spike().length = count();
  else if (key == "lr_spike_factor") spike().factor = real();
  else throw ConfigError("unknown training setting '" + std::string(key) + "'");
}

std::string TrainingConfig::ConfigHash() const {
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : FormatKeyValues(Describe())) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

AdversaryTarget AdversaryTarget::From(const ProtectedTarget& target) {
  AdversaryTarget t;
  t.mode = target.mode;
  const std::size_t n = target.size();
  if (target.mode == ProtectedMode::kClassification) {
    t.labels = target.labels;
    t.outputs = target.num_classes();
    if (t.outputs < 2) throw DataError("protected attribute has one class");
    t.prior.assign(t.outputs, 0.0);
    for (int l : t.labels) t.prior[l] += 1.0;
    for (double& p : t.prior) {
      p /= static_cast<double>(n);
      if (p > 0) t.chance_loss -= p * std::log(p);
    }
  } else {
    double mean = 0.0;
    for (double v : target.values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : target.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    if (!(var > 0.0)) throw DataError("protected attribute is constant");
    const double sd = std::sqrt(var);
    t.values = Matrix(n, 1);
    for (std::size_t i = 0; i < n; ++i) {
      t.values(i, 0) = (target.values[i] - mean) / sd;
    }
    t.outputs = 1;
    t.chance_loss = 1.0;
  }
  return t;
}

double RacistLoss(const Matrix& r_hat, const AdversaryTarget& target) {
  return target.mode == ProtectedMode::kClassification
             ? CrossEntropy(r_hat, target.labels)
             : Mse(r_hat, target.values);
}

Matrix RacistLossGrad(const Matrix& r_hat, const AdversaryTarget& target) {
  return target.mode == ProtectedMode::kClassification
             ? CrossEntropyGrad(r_hat, target.labels)
             : MseGrad(r_hat, target.values);
}

double DhatFromPredictions(std::span<const Matrix> pool_predictions,
                           const AdversaryTarget& target, double* mean_loss,
                           std::size_t* strongest) {
  if (pool_predictions.empty()) throw ConfigError("adversary pool is empty");
  // The strongest member stands in for a fully trained adversary; the
  // staggered restarts keep at least one member well trained.
  double loss = 0.0;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_index = 0;
  for (std::size_t m = 0; m < pool_predictions.size(); ++m) {
    const double l = RacistLoss(pool_predictions[m], target);
    loss += l;
    if (l < best) {
      best = l;
      best_index = m;
    }
  }
  if (mean_loss != nullptr) {
    *mean_loss = loss / static_cast<double>(pool_predictions.size());
  }
  if (strongest != nullptr) *strongest = best_index;
  return std::max(0.0, target.chance_loss - best);
}

namespace {

// Slope s = f'(z) of the hidden activation and ds/dz, both as functions of
// the activated value h.
void ActivationSlopes(Activation act, double h, double& s, double& ds) {
  switch (act) {
    case Activation::kTanh:
      s = 1.0 - h * h;
      ds = -2.0 * h * s;
      return;
    case Activation::kSigmoid:
      s = h * (1.0 - h);
      ds = s * (1.0 - 2.0 * h);
      return;
    case Activation::kRelu:
      s = h > 0.0 ? 1.0 : 0.0;
      ds = 0.0;
      return;
    case Activation::kIdentity:
      s = 1.0;
      ds = 0.0;
      return;
    case Activation::kSoftmax:
      break;
  }
  throw ConfigError("contractive penalty needs an elementwise activation");
}

}  // namespace

double Regularizers(const NetworkParams& autoencoder, const Matrix& x,
                    const TrainingConfig& config) {
  double total = 0.0;
  if (config.weight_decay > 0.0) {
    double sq = 0.0;
    for (const Layer& l : autoencoder.layers) {
      for (double w : l.weight.values()) sq += w * w;
    }
    total += config.weight_decay * sq;
  }
  if (config.contractive_weight > 0.0 && x.rows() > 0) {
    const Layer& enc = autoencoder.layers.front();
    Matrix h(x.rows(), enc.outputs());
    kernels::Affine(x, enc.weight, enc.bias, h);
    kernels::Activate(enc.activation, h);
    std::vector<double> row_norm(enc.outputs(), 0.0);
    for (std::size_t i = 0; i < enc.outputs(); ++i) {
      for (double w : enc.weight.row(i)) row_norm[i] += w * w;
    }
    double acc = 0.0;
    for (std::size_t r = 0; r < h.rows(); ++r) {
      for (std::size_t i = 0; i < h.cols(); ++i) {
        double s, ds;
        ActivationSlopes(enc.activation, h(r, i), s, ds);
        acc += s * s * row_norm[i];
      }
    }
    total += config.contractive_weight * acc / static_cast<double>(x.rows());
  }
  return total;
}

GradientSet RegularizerGradient(const NetworkParams& autoencoder,
                                const Matrix& x, const TrainingConfig& config) {
  GradientSet g = GradientSet::ZerosLike(autoencoder);
  if (config.weight_decay > 0.0) {
    for (std::size_t l = 0; l < autoencoder.layers.size(); ++l) {
      auto w = autoencoder.layers[l].weight.values();
      auto gw = g.weight[l].values();
      for (std::size_t j = 0; j < w.size(); ++j) {
        gw[j] += 2.0 * config.weight_decay * w[j];
      }
    }
  }
  if (config.contractive_weight > 0.0 && x.rows() > 0) {
    const Layer& enc = autoencoder.layers.front();
    Matrix h(x.rows(), enc.outputs());
    kernels::Affine(x, enc.weight, enc.bias, h);
    kernels::Activate(enc.activation, h);
    std::vector<double> row_norm(enc.outputs(), 0.0);
    for (std::size_t i = 0; i < enc.outputs(); ++i) {
      for (double w : enc.weight.row(i)) row_norm[i] += w * w;
    }
    const double scale =
        config.contractive_weight / static_cast<double>(x.rows());
    // Per row and unit: term = s^2 * |w_i|^2, with
    //   d term / dz = 2 s ds |w_i|^2   (chain through the pre-activation)
    //   d term / dW_ij = s^2 * 2 W_ij  (direct dependence on the row norm)
    Matrix dz(h.rows(), h.cols());
    std::vector<double> s_sq_sum(enc.outputs(), 0.0);
    for (std::size_t r = 0; r < h.rows(); ++r) {
      for (std::size_t i = 0; i < h.cols(); ++i) {
        double s, ds;
        ActivationSlopes(enc.activation, h(r, i), s, ds);
        dz(r, i) = scale * 2.0 * s * ds * row_norm[i];
        s_sq_sum[i] += s * s;
      }
    }
    Matrix gw(enc.outputs(), enc.inputs());
    kernels::WeightGrad(dz, x, gw);
    std::vector<double> gb(enc.outputs());
    kernels::BiasGrad(dz, gb);
    for (std::size_t i = 0; i < enc.outputs(); ++i) {
      for (std::size_t j = 0; j < enc.inputs(); ++j) {
        g.weight[0](i, j) +=
            gw(i, j) + scale * s_sq_sum[i] * 2.0 * enc.weight(i, j);
      }
      g.bias[0][i] += gb[i];
    }
  }
  return g;
}

LossComponents AutoencoderLoss(const Matrix& x, const Matrix& y,
                               std::span<const Matrix> pool_predictions,
                               const AdversaryTarget& target,
                               const TrainingConfig& config,
                               const NetworkParams& autoencoder) {
  LossComponents lc;
  lc.mse = Mse(y, x);
  lc.dhat = DhatFromPredictions(pool_predictions, target, &lc.pool_loss);
  lc.reg = Regularizers(autoencoder, x, config);
  lc.total = lc.mse + config.c * lc.dhat + lc.reg;
  if (!std::isfinite(lc.total)) {
    throw TrainingError("autoencoder loss is not finite");
  }
  return lc;
}

std::uint64_t PoolMemberSeed(std::uint64_t base, std::size_t member,
                             std::size_t generation) {
  return DeriveSeed(base, SeedStream::kAdversaryPool,
                    (static_cast<std::uint64_t>(member) << 32) | generation);
}

AdversaryPool::AdversaryPool(std::size_t inputs, const AdversaryTarget& target,
                             const TrainingConfig& config)
    : inputs_(inputs),
      target_(target),
      config_(config),
      learning_rate_(config.adversary_lr) {
  if (config.pool_size == 0) throw ConfigError("adversary pool is empty");
  members_.resize(config.pool_size);
  for (std::size_t m = 0; m < members_.size(); ++m) {
    members_[m].generation = 0;
    Restart(m);
    members_[m].generation = 0;
  }
}

std::size_t AdversaryPool::RestartOffset(std::size_t member) const {
  return member * config_.pool_restart_period / members_.size();
}

void AdversaryPool::Restart(std::size_t member) {
  AdversaryMember& m = members_[member];
  const std::size_t sizes[] = {inputs_, inputs_, target_.outputs};
  const Activation acts[] = {config_.adversary_activation,
                             target_.outputs > 1 ? Activation::kSoftmax
                                                 : Activation::kIdentity};
  ++m.generation;
  m.params = InitParams(sizes, acts,
                        PoolMemberSeed(config_.seed, member, m.generation));
  m.optimizer = OptimizerState::For(
      m.params, {OptimizerKind::kAdam, learning_rate_});
  m.age = 0;
}

void AdversaryPool::RestartDue(std::size_t epoch) {
  const std::size_t period = config_.pool_restart_period;
  for (std::size_t m = 0; m < members_.size(); ++m) {
    if (epoch > 1 && (epoch + RestartOffset(m)) % period == 0) Restart(m);
  }
}

std::vector<Matrix> AdversaryPool::Predict(const Matrix& y) const {
  std::vector<Matrix> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(Forward(m.params, y));
  return out;
}

AdversaryPool::Estimate AdversaryPool::Evaluate(const Matrix& y) const {
  Estimate e;
  e.grad_y = Matrix(y.rows(), y.cols());
  std::vector<ForwardCache> caches;
  std::vector<Matrix> predictions;
  caches.reserve(members_.size());
  for (const auto& m : members_) {
    caches.push_back(ForwardWithCache(m.params, y));
    predictions.push_back(caches.back().output());
  }
  std::size_t strongest = 0;
  e.penalty =
      DhatFromPredictions(predictions, target_, &e.mean_loss, &strongest);
  std::size_t oldest = 0;
  for (std::size_t m = 1; m < members_.size(); ++m) {
    if (members_[m].age > members_[oldest].age) oldest = m;
  }
  e.oldest_loss = RacistLoss(predictions[oldest], target_);
  if (e.penalty > 0.0) {
    // penalty = chance - loss of the strongest member, so its gradient is
    // that member's adversary gradient, reversed.
    const Backprop bp =
        Backward(members_[strongest].params, caches[strongest],
                 RacistLossGrad(predictions[strongest], target_));
    auto dst = e.grad_y.values();
    auto src = bp.input_grad.values();
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = -src[j];
  }
  return e;
}

void AdversaryPool::Train(const Matrix& y, std::size_t steps) {
  const auto count = static_cast<std::int64_t>(members_.size());
  std::vector<std::exception_ptr> errors(members_.size());
#pragma omp parallel for schedule(static) if (config_.parallel_pool)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      AdversaryMember& m = members_[i];
      for (std::size_t s = 0; s < steps; ++s) {
        const ForwardCache cache = ForwardWithCache(m.params, y);
        const Backprop bp = Backward(m.params, cache,
                                     RacistLossGrad(cache.output(), target_));
        OptimizerStep(m.params, bp.grads, m.optimizer);
        ++m.age;
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void AdversaryPool::SetLearningRate(double lr) {
  learning_rate_ = lr;
  for (auto& m : members_) m.optimizer.settings.learning_rate = lr;
}

bool RatchetState::Offer(double loss, const NetworkParams& params,
                         std::size_t at_epoch) {
  if (!(loss < best_loss)) return false;
  best_loss = loss;
  snapshot = params;
  epoch = at_epoch;
  return true;
}

StopDecision StoppingCriterion(const TrainingTrace& trace,
                               const TrainingConfig& config) {
  if (trace.epochs.empty()) return StopDecision::kContinue;
  if (trace.epochs.back().epoch >= config.max_epochs) return StopDecision::kStop;
  // Epoch of the last improvement larger than the relative tolerance.
  std::optional<double> reference;
  std::size_t last_improvement = 0;
  for (const EpochRecord& r : trace.epochs) {
    if (!r.ratchet_best) continue;
    if (!reference || *r.ratchet_best < *reference - config.improvement_tolerance *
                                                         std::abs(*reference)) {
      reference = r.ratchet_best;
      last_improvement = r.epoch;
    }
  }
  if (reference && trace.epochs.back().epoch - last_improvement >= config.patience) {
    return StopDecision::kStop;
  }
  return StopDecision::kContinue;
}

NetworkParams MakeAutoencoder(std::size_t features,
                              const TrainingConfig& config) {
  std::vector<std::size_t> sizes{features};
  std::vector<Activation> acts;
  if (config.autoencoder_hidden.empty()) {
    sizes.push_back((features + 1) / 2);
    acts.push_back(config.autoencoder_activation);
  } else {
    for (std::size_t h : config.autoencoder_hidden) {
      sizes.push_back(h);
      acts.push_back(config.autoencoder_activation);
    }
  }
  sizes.push_back(features);
  acts.push_back(Activation::kIdentity);
  return InitParams(sizes, acts,
                    DeriveSeed(config.seed, SeedStream::kAutoencoder));
}

namespace {

bool IsDivergence(const Error& e) {
  return e.kind() == ErrorKind::kTraining || e.kind() == ErrorKind::kInput;
}

}  // namespace

TrainingResult Train(const Dataset& dataset, const TrainingConfig& config) {
  config.Validate();
  const Matrix& x = dataset.x;
  if (x.rows() == 0 || x.cols() == 0) throw DataError("empty dataset");
  const AdversaryTarget target = AdversaryTarget::From(dataset.protected_attr);

  NetworkParams autoencoder = MakeAutoencoder(x.cols(), config);
  double ae_lr = config.autoencoder_lr;
  double adv_lr = config.adversary_lr;
  OptimizerState ae_opt =
      OptimizerState::For(autoencoder, {OptimizerKind::kAdam, ae_lr});
  AdversaryPool pool(x.cols(), target, config);

  RatchetState ratchet;
  TrainingTrace trace;
  const bool auditing =
      config.audit_period > 0 && !dataset.split.validation.empty();
  if (auditing) {
    trace.baseline = MajorityBaseline(dataset.protected_attr, dataset.split);
  }
  AuditConfig audit_config = config.trace_audit;
  audit_config.seed = config.seed;

  auto fail = [&](const std::string& why) {
    trace.stop_reason = "diverged";
    throw TrainingFailure(why, ratchet, trace);
  };

  for (std::size_t epoch = 1;; ++epoch) {
    pool.RestartDue(epoch);

    double lr = ae_lr;
    if (config.lr_spike && epoch >= config.lr_spike->first_epoch &&
        epoch < config.lr_spike->first_epoch + config.lr_spike->length) {
      lr *= config.lr_spike->factor;
    }
    ae_opt.settings.learning_rate = lr;

    EpochRecord rec;
    rec.epoch = epoch;
    try {
      const ForwardCache cache = ForwardWithCache(autoencoder, x);
      const Matrix& y = cache.output();
      const AdversaryPool::Estimate est = pool.Evaluate(y);
      const double mse = Mse(y, x);
      const double reg = Regularizers(autoencoder, x, config);
      const double loss = mse + config.c * est.penalty + reg;
      if (!std::isfinite(loss)) throw TrainingError("non-finite L_A");

      if (epoch > config.ratchet_warmup || epoch == config.max_epochs) {
        ratchet.Offer(loss, autoencoder, epoch);
      }
      rec.mse = mse;
      rec.d_current = est.oldest_loss;
      rec.d_hat = est.penalty;
      rec.l_a = loss;
      if (ratchet.has_snapshot()) rec.ratchet_best = ratchet.best_loss;

      Matrix grad_y = MseGrad(y, x);
      if (config.c > 0.0 && est.penalty > 0.0) {
        auto g = grad_y.values();
        auto a = est.grad_y.values();
        for (std::size_t j = 0; j < g.size(); ++j) g[j] += config.c * a[j];
      }
      Backprop bp = Backward(autoencoder, cache, grad_y);
      bp.grads.Axpy(1.0, RegularizerGradient(autoencoder, x, config));
      OptimizerStep(autoencoder, bp.grads, ae_opt);

      const Matrix refreshed = Forward(autoencoder, x);
      pool.Train(refreshed, config.k);

      if (auditing && epoch % config.audit_period == 0) {
        rec.d_bar = FullTrainAudit(refreshed, dataset.protected_attr,
                                   dataset.split, audit_config,
                                   AuditMode::kPostDebias)
                        .d_bar;
      }
    } catch (const TrainingFailure&) {
      throw;
    } catch (const Error& e) {
      if (!IsDivergence(e)) throw;
      if (trace.recoveries >= config.max_recoveries) {
        fail(std::string("training diverged: ") + e.what());
      }
      ++trace.recoveries;
      if (ratchet.has_snapshot()) autoencoder = ratchet.snapshot;
      ae_lr *= 0.5;
      adv_lr *= 0.5;
      ae_opt = OptimizerState::For(autoencoder, {OptimizerKind::kAdam, ae_lr});
      pool.SetLearningRate(adv_lr);
      for (std::size_t m = 0; m < pool.members().size(); ++m) {
        if (!pool.members()[m].params.AllFinite()) pool.Restart(m);
      }
      if (trace.epochs.empty()) continue;
      // Record the epoch with the state carried over from the last one.
      rec = trace.epochs.back();
      rec.epoch = epoch;
      rec.d_bar.reset();
      if (ratchet.has_snapshot()) rec.ratchet_best = ratchet.best_loss;
    }
    trace.epochs.push_back(rec);
    if (StoppingCriterion(trace, config) == StopDecision::kStop) {
      trace.stop_reason =
          epoch >= config.max_epochs ? "max_epochs" : "patience";
      break;
    }
  }

  TrainingResult result;
  result.final_autoencoder = std::move(autoencoder);
  result.ratchet = std::move(ratchet);
  result.trace = std::move(trace);
  if (!result.ratchet.has_snapshot()) {
    throw TrainingFailure("no finite L_A was ever observed", result.ratchet,
                          result.trace);
  }
  result.output.y = Forward(result.ratchet.snapshot, x);
  result.output.table = Decode(result.output.y, dataset.schema);
  result.output.config_hash = config.ConfigHash();
  result.output.seed = config.seed;
  return result;
}

}  // namespace fan
