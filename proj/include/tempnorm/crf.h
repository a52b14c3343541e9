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

// Linear-chain CRF with a single shared transition matrix over fixed
// emission scores.

#ifndef TEMPNORM_CRF_H_
#define TEMPNORM_CRF_H_

#include <vector>

#include "tempnorm/encoder.h"

namespace tempnorm {

struct CrfExample {
  Matrix emissions;         // positions x labels
  std::vector<int> labels;  // gold label per position
};

// Score of a label path: emissions plus transitions between neighbours.
double PathScore(const Matrix &transitions, const Matrix &emissions,
                 const std::vector<int> &path);

// log p(labels | emissions). When `grad` is set, adds the gradient with
// respect to the transition matrix.
double CrfLogLikelihood(const Matrix &transitions, const Matrix &emissions,
                        const std::vector<int> &labels, Matrix *grad = nullptr);

// Highest-scoring path; ties resolve towards lower label indices.
std::vector<int> Viterbi(const Matrix &transitions, const Matrix &emissions);

struct CrfTrainOptions {
  int steps = 30;
  double initial_step = 1.0;
  double l2 = 0.0;
};

struct CrfTrainResult {
  Matrix transitions;
  // Mean log-likelihood before training and after each accepted step.
  std::vector<double> likelihood_trace;
};

// Full-batch gradient ascent on the mean log-likelihood from zero
// transitions. A backtracking step search only accepts improving steps, so
// the trace never decreases.
CrfTrainResult TrainCrf(const std::vector<CrfExample> &data, int num_labels,
                        const CrfTrainOptions &options = {});

}  // namespace tempnorm

#endif  // TEMPNORM_CRF_H_
