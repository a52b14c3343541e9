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

#include "tempnorm/crf.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tempnorm {
namespace {

void CheckShapes(const Matrix &transitions, const Matrix &emissions) {
  if (transitions.rows() != transitions.cols() ||
      transitions.rows() != emissions.cols()) {
    throw std::invalid_argument("CRF transition and emission shapes differ");
  }
}

struct ExpTransitions {
  Matrix exp;
  double shift = 0.0;
};

ExpTransitions Exponentiated(const Matrix &transitions) {
  ExpTransitions e;
  e.shift = transitions.size() ? transitions.maxCoeff() : 0.0;
  e.exp = (transitions.array() - e.shift).exp();
  return e;
}

// Scaled forward-backward in probability space; per-position normalizers
// keep the recursions in range.
double ScaledLogLikelihood(const ExpTransitions &e, const Matrix &transitions,
                           const Matrix &emissions, const std::vector<int> &labels,
                           Matrix *grad) {
  const int t = static_cast<int>(emissions.rows());
  const int l = static_cast<int>(emissions.cols());
  if (static_cast<int>(labels.size()) != t) {
    throw std::invalid_argument("CRF label count differs from positions");
  }
  if (t == 0) return 0.0;
  Matrix em(t, l);
  double log_z = 0.0;
  for (int i = 0; i < t; ++i) {
    double m = emissions.row(i).maxCoeff();
    em.row(i) = (emissions.row(i).array() - m).exp();
    log_z += m;
  }
  Matrix alpha(t, l), beta(t, l);
  Eigen::VectorXd scale(t);
  alpha.row(0) = em.row(0);
  for (int i = 0; i < t; ++i) {
    if (i > 0) {
      alpha.row(i) = (alpha.row(i - 1) * e.exp).cwiseProduct(em.row(i));
    }
    scale(i) = alpha.row(i).sum();
    alpha.row(i) /= scale(i);
    log_z += std::log(scale(i));
  }
  log_z += e.shift * (t - 1);
  const double ll = PathScore(transitions, emissions, labels) - log_z;
  if (!std::isfinite(ll)) throw NumericError("non-finite CRF likelihood");
  if (grad) {
    beta.row(t - 1).setOnes();
    for (int i = t - 2; i >= 0; --i) {
      RowVector next = em.row(i + 1).cwiseProduct(beta.row(i + 1));
      beta.row(i) = (e.exp * next.transpose()).transpose() / scale(i + 1);
    }
    for (int i = 1; i < t; ++i) {
      (*grad)(labels[i - 1], labels[i]) += 1.0;
      RowVector right = em.row(i).cwiseProduct(beta.row(i)) / scale(i);
      *grad -= ((alpha.row(i - 1).transpose() * right).array() * e.exp.array())
                   .matrix();
    }
  }
  return ll;
}

struct Objective {
  double value = 0.0;
  Matrix grad;
};

Objective Evaluate(const std::vector<CrfExample> &data, const Matrix &trans,
                   double l2, bool with_grad) {
  Objective obj;
  if (with_grad) obj.grad = Matrix::Zero(trans.rows(), trans.cols());
  ExpTransitions e = Exponentiated(trans);
  for (const CrfExample &ex : data) {
    CheckShapes(trans, ex.emissions);
    obj.value += ScaledLogLikelihood(e, trans, ex.emissions, ex.labels,
                                     with_grad ? &obj.grad : nullptr);
  }
  const double n = static_cast<double>(data.size());
  obj.value = obj.value / n - 0.5 * l2 * trans.squaredNorm();
  if (with_grad) obj.grad = obj.grad / n - l2 * trans;
  return obj;
}

}  // namespace

double PathScore(const Matrix &transitions, const Matrix &emissions,
                 const std::vector<int> &path) {
  double s = 0.0;
  for (size_t i = 0; i < path.size(); ++i) {
    s += emissions(i, path[i]);
    if (i > 0) s += transitions(path[i - 1], path[i]);
  }
  return s;
}

double CrfLogLikelihood(const Matrix &transitions, const Matrix &emissions,
                        const std::vector<int> &labels, Matrix *grad) {
  CheckShapes(transitions, emissions);
  return ScaledLogLikelihood(Exponentiated(transitions), transitions, emissions,
                             labels, grad);
}

std::vector<int> Viterbi(const Matrix &transitions, const Matrix &emissions) {
  CheckShapes(transitions, emissions);
  const int t = static_cast<int>(emissions.rows());
  const int l = static_cast<int>(emissions.cols());
  if (t == 0) return {};
  Matrix score(t, l);
  Eigen::MatrixXi back(t, l);
  score.row(0) = emissions.row(0);
  for (int i = 1; i < t; ++i) {
    for (int y = 0; y < l; ++y) {
      int best = 0;
      double best_score = score(i - 1, 0) + transitions(0, y);
      for (int p = 1; p < l; ++p) {
        double s = score(i - 1, p) + transitions(p, y);
        if (s > best_score) {
          best_score = s;
          best = p;
        }
      }
      score(i, y) = best_score + emissions(i, y);
      back(i, y) = best;
    }
  }
  std::vector<int> path(t);
  int best = 0;
  for (int y = 1; y < l; ++y) {
    if (score(t - 1, y) > score(t - 1, best)) best = y;
  }
  path[t - 1] = best;
  for (int i = t - 1; i > 0; --i) path[i - 1] = back(i, path[i]);
  return path;
}

CrfTrainResult TrainCrf(const std::vector<CrfExample> &data, int num_labels,
                        const CrfTrainOptions &options) {
  if (data.empty()) throw std::invalid_argument("no CRF training data");
  CrfTrainResult result;
  result.transitions = Matrix::Zero(num_labels, num_labels);
  Objective cur = Evaluate(data, result.transitions, options.l2, true);
  result.likelihood_trace.push_back(cur.value);
  double step = options.initial_step;
  for (int it = 0; it < options.steps; ++it) {
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      Matrix candidate = result.transitions + step * cur.grad;
      double value = -std::numeric_limits<double>::infinity();
      try {
        value = Evaluate(data, candidate, options.l2, false).value;
      } catch (const NumericError &) {
        // Overshoot into an underflowing region; shrink the step.
      }
      if (std::isfinite(value) && value >= cur.value) {
        result.transitions = std::move(candidate);
        cur = Evaluate(data, result.transitions, options.l2, true);
        accepted = true;
        step *= 1.5;
      } else {
        step *= 0.5;
      }
    }
    if (!accepted) break;
    result.likelihood_trace.push_back(cur.value);
  }
  return result;
}

}  // namespace tempnorm
