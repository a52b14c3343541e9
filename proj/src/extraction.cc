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

#include "tempnorm/extraction.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace tempnorm {
namespace {

std::vector<int> ScoredPositions(const TaggerExample &ex) {
  std::vector<int> pos;
  for (size_t i = 0; i < ex.labels.size(); ++i) {
    if (ex.labels[i] >= 0) pos.push_back(static_cast<int>(i));
  }
  return pos;
}

}  // namespace

TaggerModel MakeTagger(const ModelConfig &config, ModelVocabulary vocab) {
  TaggerModel model;
  ModelConfig c = config;
  c.vocab_size = static_cast<int>(vocab.size());
  model.vocab = std::move(vocab);
  model.encoder = Encoder(c, kNumBioLabels, 0);
  return model;
}

std::vector<TaggerExample> TaggerExamples(const Document &doc,
                                          const ModelVocabulary &vocab,
                                          int max_seq, bool with_labels) {
  const int budget = max_seq - 2;
  if (budget < 1) throw std::invalid_argument("max_seq too small for tagging");
  std::vector<BioTag> gold;
  if (with_labels) gold = ToBio(doc);
  const int cls = vocab.Id(kClsToken);
  const int sep = vocab.Id(kSepToken);
  std::vector<TaggerExample> out;
  const int n = static_cast<int>(doc.tokens.size());
  for (int begin = 0; begin < n; begin += budget) {
    const int end = std::min(n, begin + budget);
    TaggerExample ex;
    ex.first_token = begin;
    ex.token_ids.push_back(cls);
    ex.labels.push_back(-1);
    for (int i = begin; i < end; ++i) {
      ex.token_ids.push_back(vocab.WordId(doc.tokens[i]));
      ex.labels.push_back(with_labels ? BioLabelIndex(gold[i]) : 0);
    }
    ex.token_ids.push_back(sep);
    ex.labels.push_back(-1);
    out.push_back(std::move(ex));
  }
  return out;
}

double TaggerLossAndGradient(const Encoder &encoder, const TaggerExample &ex,
                             double normalizer, std::vector<Matrix> *grads) {
  std::vector<int> positions = ScoredPositions(ex);
  if (positions.empty()) return 0.0;
  Encoder::State state;
  std::vector<int> segments(ex.token_ids.size(), 0);
  encoder.Forward({ex.token_ids, segments}, &state);
  Matrix logits = encoder.Logits(state, positions);
  Matrix dlogits(logits.rows(), logits.cols());
  double loss = 0.0;
  for (int r = 0; r < logits.rows(); ++r) {
    RowVector p = Softmax(logits.row(r));
    const int gold = ex.labels[positions[r]];
    loss -= std::log(std::max(p(gold), 1e-300));
    p(gold) -= 1.0;
    dlogits.row(r) = p / normalizer;
  }
  if (grads) encoder.Backward(state, positions, dlogits, grads);
  return loss;
}

std::vector<double> TrainTagger(TaggerModel *model, const std::vector<Document> &docs,
                                const TaggerTrainOptions &options) {
  std::vector<TaggerExample> data;
  for (const Document &doc : docs) {
    for (TaggerExample &ex :
         TaggerExamples(doc, model->vocab, model->encoder.config().max_seq, true)) {
      data.push_back(std::move(ex));
    }
  }
  if (data.empty()) throw DataError("no tagger training examples");
  Encoder &enc = model->encoder;
  Optimizer opt(options.optimizer, enc.params(), options.steps);
  std::mt19937_64 rng(options.seed);
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  size_t cursor = 0;
  std::vector<Matrix> grads = enc.ZeroGradients();
  std::vector<double> trace;
  double recent = 0.0;
  int recent_n = 0;
  for (int step = 0; step < options.steps; ++step) {
    std::vector<const TaggerExample *> batch;
    double tokens = 0.0;
    for (int b = 0; b < options.batch_size; ++b) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      batch.push_back(&data[order[cursor++]]);
      tokens += static_cast<double>(ScoredPositions(*batch.back()).size());
    }
    for (Matrix &g : grads) g.setZero();
    double loss = 0.0;
    for (const TaggerExample *ex : batch) {
      loss += TaggerLossAndGradient(enc, *ex, tokens, &grads);
    }
    loss /= tokens;
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite tagger loss at step " + std::to_string(step));
    }
    try {
      opt.Step(&enc.params(), &grads);
    } catch (const NumericError &) {
      throw NumericError("non-finite tagger gradient at step " + std::to_string(step));
    }
    trace.push_back(loss);
    recent += loss;
    ++recent_n;
    if (options.log_every > 0 && options.on_log && (step + 1) % options.log_every == 0) {
      options.on_log(step + 1, recent / recent_n);
      recent = 0.0;
      recent_n = 0;
    }
  }
  return trace;
}

std::vector<BioTag> PredictBio(const TaggerModel &model, const Document &doc) {
  std::vector<BioTag> tags(doc.tokens.size());
  for (const TaggerExample &ex :
       TaggerExamples(doc, model.vocab, model.encoder.config().max_seq, false)) {
    std::vector<int> positions = ScoredPositions(ex);
    Encoder::State state;
    std::vector<int> segments(ex.token_ids.size(), 0);
    model.encoder.Forward({ex.token_ids, segments}, &state);
    Matrix logits = model.encoder.Logits(state, positions);
    for (int r = 0; r < logits.rows(); ++r) {
      int best = 0;
      for (int l = 1; l < logits.cols(); ++l) {
        if (logits(r, l) > logits(r, best)) best = l;
      }
      tags[ex.first_token + positions[r] - 1] = BioTagFromIndex(best);
    }
  }
  return tags;
}

std::vector<TimexAnnotation> Tag(const TaggerModel &model, const Document &doc) {
  if (doc.tokens.empty()) return {};
  return FromBio(PredictBio(model, doc), doc.tokens);
}

std::vector<TimexAnnotation> GoldBoundaries(const Document &doc) {
  std::vector<TimexAnnotation> out = doc.annotations;
  for (TimexAnnotation &a : out) a.value.clear();
  std::sort(out.begin(), out.end(), [](const TimexAnnotation &a, const TimexAnnotation &b) {
    return a.start < b.start;
  });
  return out;
}

}  // namespace tempnorm
