// Copyright 2026 The tempnorm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tempnorm/optimizer.h"

#include <algorithm>
#include <cmath>

namespace tempnorm {

std::string_view OptimizerKindName(OptimizerKind kind) {
  return kind == OptimizerKind::kSgd ? "sgd" : "adam";
}

std::optional<OptimizerKind> ParseOptimizerKind(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "adam") return OptimizerKind::kAdam;
  return std::nullopt;
}

double ClipGradients(std::vector<Matrix> *grads, double max_norm) {
  double sq = 0.0;
  for (const Matrix &g : *grads) sq += g.squaredNorm();
  double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw NumericError("non-finite gradient norm");
  if (max_norm > 0.0 && norm > max_norm) {
    double scale = max_norm / norm;
    for (Matrix &g : *grads) g *= scale;
  }
  return norm;
}

Optimizer::Optimizer(const OptimizerConfig &config,
                     const std::vector<Parameter> &params, int total_steps)
    : config_(config), total_steps_(std::max(total_steps, 1)) {
  if (config.kind == OptimizerKind::kAdam) {
    for (const Parameter &p : params) {
      m_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
      v_.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
    }
  }
}

double Optimizer::CurrentLearningRate() const {
  const double base = config_.learning_rate;
  if (config_.warmup_steps > 0 && step_ < config_.warmup_steps) {
    return base * (step_ + 1) / config_.warmup_steps;
  }
  const int decay_span = total_steps_ - config_.warmup_steps;
  if (decay_span <= 0) return base;
  double progress = static_cast<double>(step_ - config_.warmup_steps) / decay_span;
  progress = std::clamp(progress, 0.0, 1.0);
  return base * (1.0 - (1.0 - config_.final_lr_fraction) * progress);
}

double Optimizer::Step(std::vector<Parameter> *params, std::vector<Matrix> *grads) {
  double norm = ClipGradients(grads, config_.clip_norm);
  const double lr = CurrentLearningRate();
  ++step_;
  if (config_.kind == OptimizerKind::kSgd) {
    for (size_t i = 0; i < params->size(); ++i) {
      (*params)[i].value -= lr * (*grads)[i];
    }
    return norm;
  }
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, step_);
  const double c2 = 1.0 - std::pow(b2, step_);
  for (size_t i = 0; i < params->size(); ++i) {
    const Matrix &g = (*grads)[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g.cwiseProduct(g);
    (*params)[i].value.array() -=
        lr * (m_[i].array() / c1) /
        ((v_[i].array() / c2).sqrt() + config_.epsilon);
  }
  return norm;
}

}  // namespace tempnorm
