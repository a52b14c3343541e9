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

#ifndef TEMPNORM_OPTIMIZER_H_
#define TEMPNORM_OPTIMIZER_H_

#include <optional>
#include <string_view>
#include <vector>

#include "tempnorm/encoder.h"

namespace tempnorm {

enum class OptimizerKind { kSgd, kAdam };

std::string_view OptimizerKindName(OptimizerKind kind);
std::optional<OptimizerKind> ParseOptimizerKind(std::string_view name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kAdam;
  double learning_rate = 2e-3;
  // Global L2 norm bound on the gradient; 0 disables clipping.
  double clip_norm = 1.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Linear warmup steps followed by linear decay to `final_lr_fraction`.
  int warmup_steps = 0;
  double final_lr_fraction = 1.0;
};

// Scales `grads` in place so their global norm is at most `max_norm` and
// returns the norm before scaling. Throws NumericError on NaN or infinity.
double ClipGradients(std::vector<Matrix> *grads, double max_norm);

class Optimizer {
 public:
  Optimizer(const OptimizerConfig &config, const std::vector<Parameter> &params,
            int total_steps);

  // Clips, then applies one update. Returns the pre-clip gradient norm.
  double Step(std::vector<Parameter> *params, std::vector<Matrix> *grads);

  double CurrentLearningRate() const;

 private:
  OptimizerConfig config_;
  int total_steps_;
  int step_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

}  // namespace tempnorm

#endif  // TEMPNORM_OPTIMIZER_H_
