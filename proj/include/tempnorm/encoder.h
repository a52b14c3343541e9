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

// A small pre-LN transformer encoder with a linear output head, forward and
// backward passes written out by hand.

#ifndef TEMPNORM_ENCODER_H_
#define TEMPNORM_ENCODER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tempnorm {

// Raised when training or inference produces NaN or infinite values.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModelConfig {
  int layers = 2;
  int hidden = 64;
  int heads = 4;
  int ff_dim = 128;
  int max_seq = 64;
  int vocab_size = 0;
  uint64_t seed = 1;

  void Validate() const;
  friend bool operator==(const ModelConfig &, const ModelConfig &) = default;
};

using Matrix = Eigen::MatrixXd;
using RowVector = Eigen::RowVectorXd;

struct Parameter {
  std::string name;
  Matrix value;
};

class Encoder {
 public:
  struct Input {
    std::vector<int> ids;
    // Per-position segment index into the segment embedding table; 0 for
    // ordinary text.
    std::vector<int> segments;
  };

  // Activations kept from the forward pass for the backward pass.
  struct State;

  Encoder() = default;
  Encoder(const ModelConfig &config, int num_outputs, int num_segments);

  const ModelConfig &config() const { return config_; }
  int num_outputs() const { return num_outputs_; }
  int num_segments() const { return num_segments_; }

  std::vector<Parameter> &params() { return params_; }
  const std::vector<Parameter> &params() const { return params_; }

  // Zero-filled gradient buffers shaped like params().
  std::vector<Matrix> ZeroGradients() const;

  void Forward(const Input &input, State *state) const;

  // Output scores for the listed positions, one row each.
  Matrix Logits(const State &state, const std::vector<int> &positions) const;

  // Accumulates parameter gradients for d(loss)/d(logits) at `positions`.
  void Backward(const State &state, const std::vector<int> &positions,
                const Matrix &dlogits, std::vector<Matrix> *grads) const;

 private:
  int Index(int layer, int slot) const { return 2 + layer * 16 + slot; }
  int FinalIndex() const { return 2 + config_.layers * 16; }

  ModelConfig config_;
  int num_outputs_ = 0;
  int num_segments_ = 0;
  std::vector<Parameter> params_;
  Matrix positions_;
};

struct Encoder::State {
  struct LayerNormCache {
    Matrix xhat;
    Eigen::VectorXd rstd;
  };
  struct Layer {
    Matrix x_in;
    LayerNormCache ln1;
    Matrix a, q, k, v;
    std::vector<Matrix> probs;
    Matrix attn;
    Matrix x_mid;
    LayerNormCache ln2;
    Matrix b, pre, act;
  };
  std::vector<int> ids;
  std::vector<int> segments;
  std::vector<Layer> layers;
  Matrix x_out;
  LayerNormCache lnf;
  Matrix final;
};

// Numerically stable softmax of a row vector.
RowVector Softmax(const RowVector &logits);

// Fixed sinusoidal position code for position `pos`.
RowVector PositionCode(int pos, int hidden);

}  // namespace tempnorm

#endif  // TEMPNORM_ENCODER_H_
