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

#include "tempnorm/encoder.h"

#include <cmath>
#include <random>

namespace tempnorm {
namespace {

constexpr double kLayerNormEps = 1e-5;
constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)

// Per-layer parameter slots.
enum {
  kLn1G, kLn1B, kWq, kBq, kWk, kBk, kWv, kBv, kWo, kBo,
  kLn2G, kLn2B, kW1, kB1, kW2, kB2,
};

Matrix Gaussian(int rows, int cols, double stddev, std::mt19937_64 &rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = dist(rng);
  }
  return m;
}

Matrix LayerNorm(const Matrix &x, const Matrix &gain, const Matrix &bias,
                 Encoder::State::LayerNormCache *cache) {
  const int n = static_cast<int>(x.cols());
  Eigen::VectorXd mean = x.rowwise().mean();
  Matrix centered = x.colwise() - mean;
  Eigen::VectorXd var = centered.array().square().rowwise().sum() / n;
  cache->rstd = (var.array() + kLayerNormEps).rsqrt();
  cache->xhat = centered.array().colwise() * cache->rstd.array();
  Matrix y = cache->xhat.array().rowwise() * gain.row(0).array();
  return y.rowwise() + bias.row(0);
}

Matrix LayerNormBackward(const Matrix &dy, const Matrix &gain,
                         const Encoder::State::LayerNormCache &cache,
                         Matrix *dgain, Matrix *dbias) {
  const double n = static_cast<double>(dy.cols());
  *dgain += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
  *dbias += dy.colwise().sum();
  Matrix dxhat = dy.array().rowwise() * gain.row(0).array();
  Eigen::VectorXd mean_d = dxhat.rowwise().sum() / n;
  Eigen::VectorXd mean_dx =
      (dxhat.array() * cache.xhat.array()).rowwise().sum() / n;
  Matrix dx = dxhat.colwise() - mean_d;
  dx -= (cache.xhat.array().colwise() * mean_dx.array()).matrix();
  return dx.array().colwise() * cache.rstd.array();
}

double Gelu(double x) {
  return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + 0.044715 * x * x * x)));
}

double GeluGrad(double x) {
  double t = std::tanh(kGeluC * (x + 0.044715 * x * x * x));
  return 0.5 * (1.0 + t) +
         0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * 0.044715 * x * x);
}

}  // namespace

void ModelConfig::Validate() const {
  if (layers < 1 || hidden < 1 || heads < 1 || ff_dim < 1 || max_seq < 4) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  if (hidden % heads != 0) {
    throw std::invalid_argument("hidden size must be divisible by heads");
  }
  if (vocab_size < 1) throw std::invalid_argument("vocabulary is empty");
}

RowVector Softmax(const RowVector &logits) {
  RowVector e = (logits.array() - logits.maxCoeff()).exp();
  return e / e.sum();
}

RowVector PositionCode(int pos, int hidden) {
  RowVector code(hidden);
  for (int i = 0; i < hidden; ++i) {
    double rate = std::pow(10000.0, -static_cast<double>(i / 2 * 2) / hidden);
    code(i) = i % 2 == 0 ? std::sin(pos * rate) : std::cos(pos * rate);
  }
  return code;
}

Encoder::Encoder(const ModelConfig &config, int num_outputs, int num_segments)
    : config_(config), num_outputs_(num_outputs), num_segments_(num_segments) {
  config.Validate();
  const int h = config.hidden;
  const int f = config.ff_dim;
  std::mt19937_64 rng(config.seed);
  auto add = [&](std::string name, Matrix value) {
    params_.push_back({std::move(name), std::move(value)});
  };
  const double wh = 1.0 / std::sqrt(static_cast<double>(h));
  const double wf = 1.0 / std::sqrt(static_cast<double>(f));
  add("embed.tokens", Gaussian(config.vocab_size, h, 0.5, rng));
  add("embed.segments", Gaussian(num_segments + 1, h, 0.5, rng));
  for (int l = 0; l < config.layers; ++l) {
    std::string p = "layer" + std::to_string(l) + ".";
    add(p + "ln1.gain", Matrix::Ones(1, h));
    add(p + "ln1.bias", Matrix::Zero(1, h));
    for (const char *w : {"q", "k", "v", "o"}) {
      add(p + "attn.w" + w, Gaussian(h, h, wh, rng));
      add(p + "attn.b" + w, Matrix::Zero(1, h));
    }
    add(p + "ln2.gain", Matrix::Ones(1, h));
    add(p + "ln2.bias", Matrix::Zero(1, h));
    add(p + "ff.w1", Gaussian(h, f, wh, rng));
    add(p + "ff.b1", Matrix::Zero(1, f));
    add(p + "ff.w2", Gaussian(f, h, wf, rng));
    add(p + "ff.b2", Matrix::Zero(1, h));
  }
  add("final.ln.gain", Matrix::Ones(1, h));
  add("final.ln.bias", Matrix::Zero(1, h));
  add("head.w", Gaussian(h, num_outputs, 0.02, rng));
  add("head.b", Matrix::Zero(1, num_outputs));
  positions_.resize(config.max_seq, h);
  for (int i = 0; i < config.max_seq; ++i) positions_.row(i) = PositionCode(i, h);
}

std::vector<Matrix> Encoder::ZeroGradients() const {
  std::vector<Matrix> grads;
  grads.reserve(params_.size());
  for (const Parameter &p : params_) {
    grads.push_back(Matrix::Zero(p.value.rows(), p.value.cols()));
  }
  return grads;
}

void Encoder::Forward(const Input &input, State *state) const {
  const int t = static_cast<int>(input.ids.size());
  const int h = config_.hidden;
  if (t == 0) throw std::invalid_argument("empty input sequence");
  if (t > config_.max_seq) {
    throw std::invalid_argument("sequence of length " + std::to_string(t) +
                                " exceeds max_seq " +
                                std::to_string(config_.max_seq));
  }
  if (input.segments.size() != input.ids.size()) {
    throw std::invalid_argument("segment and id lengths differ");
  }
  state->ids = input.ids;
  state->segments = input.segments;
  state->layers.resize(config_.layers);

  const Matrix &tokens = params_[0].value;
  const Matrix &segs = params_[1].value;
  Matrix x(t, h);
  for (int i = 0; i < t; ++i) {
    int id = input.ids[i];
    int seg = input.segments[i];
    if (id < 0 || id >= tokens.rows() || seg < 0 || seg >= segs.rows()) {
      throw std::out_of_range("token or segment id out of range");
    }
    x.row(i) = tokens.row(id) + segs.row(seg) + positions_.row(i);
  }

  const int heads = config_.heads;
  const int d = h / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int l = 0; l < config_.layers; ++l) {
    State::Layer &c = state->layers[l];
    auto w = [&](int slot) -> const Matrix & { return params_[Index(l, slot)].value; };
    c.x_in = x;
    c.a = LayerNorm(x, w(kLn1G), w(kLn1B), &c.ln1);
    c.q = (c.a * w(kWq)).rowwise() + w(kBq).row(0);
    c.k = (c.a * w(kWk)).rowwise() + w(kBk).row(0);
    c.v = (c.a * w(kWv)).rowwise() + w(kBv).row(0);
    c.probs.resize(heads);
    c.attn.resize(t, h);
    for (int hd = 0; hd < heads; ++hd) {
      Matrix s = c.q.middleCols(hd * d, d) * c.k.middleCols(hd * d, d).transpose() * scale;
      Eigen::VectorXd mx = s.rowwise().maxCoeff();
      Matrix e = (s.colwise() - mx).array().exp();
      Eigen::VectorXd sum = e.rowwise().sum();
      c.probs[hd] = e.array().colwise() / sum.array();
      c.attn.middleCols(hd * d, d) = c.probs[hd] * c.v.middleCols(hd * d, d);
    }
    x = x + ((c.attn * w(kWo)).rowwise() + w(kBo).row(0));
    c.x_mid = x;
    c.b = LayerNorm(x, w(kLn2G), w(kLn2B), &c.ln2);
    c.pre = (c.b * w(kW1)).rowwise() + w(kB1).row(0);
    c.act = c.pre.unaryExpr(&Gelu);
    x = x + ((c.act * w(kW2)).rowwise() + w(kB2).row(0));
  }
  state->x_out = x;
  const int fi = FinalIndex();
  state->final = LayerNorm(x, params_[fi].value, params_[fi + 1].value, &state->lnf);
}

Matrix Encoder::Logits(const State &state, const std::vector<int> &positions) const {
  const int fi = FinalIndex();
  const Matrix &w = params_[fi + 2].value;
  const Matrix &b = params_[fi + 3].value;
  Matrix rows(positions.size(), config_.hidden);
  for (size_t i = 0; i < positions.size(); ++i) {
    rows.row(i) = state.final.row(positions[i]);
  }
  return (rows * w).rowwise() + b.row(0);
}

void Encoder::Backward(const State &state, const std::vector<int> &positions,
                       const Matrix &dlogits, std::vector<Matrix> *grads) const {
  std::vector<Matrix> &g = *grads;
  const int t = static_cast<int>(state.ids.size());
  const int h = config_.hidden;
  const int fi = FinalIndex();
  const Matrix &head_w = params_[fi + 2].value;

  Matrix dfinal = Matrix::Zero(t, h);
  for (size_t i = 0; i < positions.size(); ++i) {
    const int pos = positions[i];
    g[fi + 2] += state.final.row(pos).transpose() * dlogits.row(i);
    g[fi + 3] += dlogits.row(i);
    dfinal.row(pos) += dlogits.row(i) * head_w.transpose();
  }
  Matrix dx = LayerNormBackward(dfinal, params_[fi].value, state.lnf, &g[fi],
                                &g[fi + 1]);

  const int heads = config_.heads;
  const int d = h / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int l = config_.layers - 1; l >= 0; --l) {
    const State::Layer &c = state.layers[l];
    auto w = [&](int slot) -> const Matrix & { return params_[Index(l, slot)].value; };
    auto gw = [&](int slot) -> Matrix & { return g[Index(l, slot)]; };

    // Feed-forward block.
    gw(kW2) += c.act.transpose() * dx;
    gw(kB2) += dx.colwise().sum();
    Matrix dact = dx * w(kW2).transpose();
    Matrix dpre = dact.array() * c.pre.unaryExpr(&GeluGrad).array();
    gw(kW1) += c.b.transpose() * dpre;
    gw(kB1) += dpre.colwise().sum();
    Matrix db = dpre * w(kW1).transpose();
    dx += LayerNormBackward(db, w(kLn2G), c.ln2, &gw(kLn2G), &gw(kLn2B));

    // Attention block.
    gw(kWo) += c.attn.transpose() * dx;
    gw(kBo) += dx.colwise().sum();
    Matrix dattn = dx * w(kWo).transpose();
    Matrix dq(t, h), dk(t, h), dv(t, h);
    for (int hd = 0; hd < heads; ++hd) {
      const Matrix &p = c.probs[hd];
      Matrix dout = dattn.middleCols(hd * d, d);
      dv.middleCols(hd * d, d) = p.transpose() * dout;
      Matrix dp = dout * c.v.middleCols(hd * d, d).transpose();
      Eigen::VectorXd row_dot = (dp.array() * p.array()).rowwise().sum();
      Matrix ds = (p.array() * (dp.colwise() - row_dot).array()) * scale;
      dq.middleCols(hd * d, d) = ds * c.k.middleCols(hd * d, d);
      dk.middleCols(hd * d, d) = ds.transpose() * c.q.middleCols(hd * d, d);
    }
    gw(kWq) += c.a.transpose() * dq;
    gw(kBq) += dq.colwise().sum();
    gw(kWk) += c.a.transpose() * dk;
    gw(kBk) += dk.colwise().sum();
    gw(kWv) += c.a.transpose() * dv;
    gw(kBv) += dv.colwise().sum();
    Matrix da = dq * w(kWq).transpose() + dk * w(kWk).transpose() +
                dv * w(kWv).transpose();
    dx += LayerNormBackward(da, w(kLn1G), c.ln1, &gw(kLn1G), &gw(kLn1B));
  }

  for (int i = 0; i < t; ++i) {
    g[0].row(state.ids[i]) += dx.row(i);
    g[1].row(state.segments[i]) += dx.row(i);
  }
}

}  // namespace tempnorm
