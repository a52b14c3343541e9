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

#include "tempnorm/mlm.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace tempnorm {
namespace {

constexpr std::string_view kSpecials[] = {
    kPadToken, kUnkToken, kClsToken, kSepToken, kMaskToken, kTimexOpen,
    kTimexClose};

std::string Prefixed(std::string_view prefix, std::string_view body) {
  std::string out(prefix);
  out += body;
  return out;
}

// A run of positions that must stay in one window.
struct Unit {
  std::vector<int> ids;
  std::vector<int> segments;
  std::vector<TokenClass> classes;
  int value_offset = -1;
  int annotation = -1;
};

void PushText(Unit *u, int id, TokenClass cls) {
  u->ids.push_back(id);
  u->segments.push_back(0);
  u->classes.push_back(cls);
}

}  // namespace

std::string_view ValueModeName(ValueMode mode) {
  return mode == ValueMode::kSlots ? "slots" : "chars";
}

std::optional<ValueMode> ParseValueMode(std::string_view name) {
  if (name == "slots") return ValueMode::kSlots;
  if (name == "chars") return ValueMode::kChars;
  return std::nullopt;
}

// ----- ModelVocabulary -----

ModelVocabulary ModelVocabulary::Build(const std::vector<Document> &docs,
                                       int min_count) {
  std::vector<std::string> tokens;
  for (std::string_view s : kSpecials) tokens.emplace_back(s);
  for (int t = 0; t < kNumTimexTypes; ++t) {
    tokens.push_back(Prefixed("t:", TimexTypeName(static_cast<TimexType>(t))));
  }
  for (const std::string &s : SlotVocabulary::Baseline().tokens()) {
    tokens.push_back(Prefixed("s:", s));
  }
  for (char c = 32; c < 127; ++c) tokens.push_back(Prefixed("c:", std::string(1, c)));
  std::map<std::string, int> counts;
  for (const Document &doc : docs) {
    for (const std::string &w : doc.tokens) ++counts[w];
  }
  for (const auto &[word, count] : counts) {
    if (count >= min_count) tokens.push_back(Prefixed("w:", word));
  }
  return FromTokens(std::move(tokens));
}

ModelVocabulary ModelVocabulary::FromTokens(std::vector<std::string> tokens) {
  ModelVocabulary v;
  v.tokens_ = std::move(tokens);
  v.Index();
  return v;
}

void ModelVocabulary::Index() {
  ids_.clear();
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (!ids_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw DataError("duplicate vocabulary entry '" + tokens_[i] + "'");
    }
  }
  unk_ = Id(kUnkToken);
  mask_ = Id(kMaskToken);
}

std::optional<int> ModelVocabulary::Find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

int ModelVocabulary::Id(std::string_view token) const {
  auto id = Find(token);
  if (!id) throw DataError("vocabulary lacks '" + std::string(token) + "'");
  return *id;
}

int ModelVocabulary::WordId(std::string_view word) const {
  return Find(Prefixed("w:", word)).value_or(unk_);
}

int ModelVocabulary::SlotId(std::string_view value) const {
  return Id(Prefixed("s:", value));
}

int ModelVocabulary::CharId(char c) const {
  return Id(Prefixed("c:", std::string(1, c)));
}

int ModelVocabulary::TypeId(TimexType type) const {
  return Id(Prefixed("t:", TimexTypeName(type)));
}

std::vector<int> ModelVocabulary::ValueIds(ValueMode mode) const {
  std::vector<int> ids;
  for (size_t i = 0; i < tokens_.size(); ++i) {
    const std::string &t = tokens_[i];
    if (t.rfind("s:", 0) == 0) {
      if (mode == ValueMode::kSlots || t == Prefixed("s:", kPadToken)) {
        ids.push_back(static_cast<int>(i));
      }
    } else if (mode == ValueMode::kChars && t.rfind("c:", 0) == 0) {
      ids.push_back(static_cast<int>(i));
    }
  }
  return ids;
}

// ----- Value layout -----

std::optional<std::vector<int>> ValueTokens(std::string_view cir,
                                            const ModelVocabulary &vocab,
                                            ValueMode mode, int value_len) {
  std::vector<int> ids;
  if (mode == ValueMode::kSlots) {
    EncodedCir enc;
    try {
      enc = EncodeCir(cir);
    } catch (const UnencodableCir &) {
      return std::nullopt;
    }
    for (const std::string &v : enc.slots.values) {
      auto id = vocab.Find(Prefixed("s:", v));
      if (!id) return std::nullopt;
      ids.push_back(*id);
    }
    return ids;
  }
  if (cir.empty() || static_cast<int>(cir.size()) > value_len) return std::nullopt;
  for (char c : cir) {
    auto id = vocab.Find(Prefixed("c:", std::string(1, c)));
    if (!id) return std::nullopt;
    ids.push_back(*id);
  }
  ids.resize(value_len, vocab.SlotId(kPadToken));
  return ids;
}

std::string ValueString(const std::vector<int> &ids, const ModelVocabulary &vocab,
                        ValueMode mode) {
  if (mode == ValueMode::kSlots) {
    SlotSequence slots;
    for (int i = 0; i < kNumSlots && i < static_cast<int>(ids.size()); ++i) {
      const std::string &t = vocab.token(ids[i]);
      slots.values[i] = t.rfind("s:", 0) == 0 ? t.substr(2) : std::string(kPadToken);
    }
    return DecodeSlots(slots).cir;
  }
  std::string out;
  for (int id : ids) {
    const std::string &t = vocab.token(id);
    if (t.rfind("c:", 0) != 0) break;
    out += t.substr(2);
  }
  return out;
}

// ----- Linearization -----

std::vector<TrainingExample> Linearize(const Document &doc,
                                       const ModelVocabulary &vocab,
                                       const LinearizeOptions &options,
                                       LinearizeStats *stats) {
  LinearizeStats local;
  LinearizeStats &st = stats ? *stats : local;
  const int budget = options.max_seq - 2;

  std::vector<int> order(doc.annotations.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return doc.annotations[a].start < doc.annotations[b].start;
  });

  std::vector<Unit> units;
  size_t next = 0;
  const int n = static_cast<int>(doc.tokens.size());
  for (int i = 0; i < n;) {
    if (next < order.size() && doc.annotations[order[next]].start == i) {
      const int a = order[next++];
      const TimexAnnotation &ann = doc.annotations[a];
      std::optional<std::vector<int>> value;
      if (options.mask_values) {
        value = std::vector<int>(options.value_len, vocab.mask());
      } else {
        value = ValueTokens(ann.value, vocab, options.mode, options.value_len);
      }
      const int span = ann.end - ann.start;
      const int len = 3 + options.value_len + span;
      if (value && len <= budget) {
        Unit u;
        u.annotation = a;
        PushText(&u, vocab.Id(kTimexOpen), TokenClass::kStructural);
        PushText(&u, vocab.TypeId(ann.type), TokenClass::kType);
        u.value_offset = static_cast<int>(u.ids.size());
        for (int s = 0; s < options.value_len; ++s) {
          u.ids.push_back((*value)[s]);
          u.segments.push_back(s + 1);
          u.classes.push_back(TokenClass::kValue);
        }
        for (int t = ann.start; t < ann.end; ++t) {
          PushText(&u, vocab.WordId(doc.tokens[t]), TokenClass::kAnnotated);
        }
        PushText(&u, vocab.Id(kTimexClose), TokenClass::kStructural);
        units.push_back(std::move(u));
        i = ann.end;
        continue;
      }
      if (!value) {
        ++st.skipped_annotations;
      } else {
        ++st.oversized_annotations;
      }
      // Fall through: the span is emitted as plain text.
    }
    Unit u;
    PushText(&u, vocab.WordId(doc.tokens[i]), TokenClass::kOther);
    units.push_back(std::move(u));
    ++i;
  }

  std::vector<TrainingExample> out;
  TrainingExample cur;
  auto open = [&]() {
    cur = TrainingExample();
    cur.token_ids.push_back(vocab.Id(kClsToken));
    cur.segments.push_back(0);
    cur.classes.push_back(TokenClass::kStructural);
  };
  auto close = [&]() {
    cur.token_ids.push_back(vocab.Id(kSepToken));
    cur.segments.push_back(0);
    cur.classes.push_back(TokenClass::kStructural);
    if (options.mask_values) {
      for (int start : cur.value_starts) {
        for (int s = 0; s < options.value_len; ++s) {
          cur.mask_positions.push_back(start + s);
        }
      }
    }
    out.push_back(std::move(cur));
  };
  if (units.empty()) return out;
  open();
  for (const Unit &u : units) {
    if (static_cast<int>(cur.token_ids.size()) - 1 + static_cast<int>(u.ids.size()) >
        budget) {
      close();
      open();
    }
    const int base = static_cast<int>(cur.token_ids.size());
    if (u.annotation >= 0) {
      cur.value_starts.push_back(base + u.value_offset);
      cur.annotation_ids.push_back(u.annotation);
    }
    cur.token_ids.insert(cur.token_ids.end(), u.ids.begin(), u.ids.end());
    cur.segments.insert(cur.segments.end(), u.segments.begin(), u.segments.end());
    cur.classes.insert(cur.classes.end(), u.classes.begin(), u.classes.end());
  }
  close();
  return out;
}

// ----- Masking -----

void MaskingPolicy::Validate() const {
  for (double p : {p_value_slots, p_annotated_tokens, p_types, p_other_text}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("masking probabilities must lie in [0, 1]");
    }
  }
}

int CurriculumK(int step, int total_steps, int max_masks) {
  if (total_steps <= 0) return max_masks;
  // 1 + floor(10 t / (T / 2)) for the 11-slot case, in integer arithmetic.
  int64_t k = 1 + (int64_t{2} * (max_masks - 1) * step) / total_steps;
  return static_cast<int>(std::min<int64_t>(k, max_masks));
}

TrainingExample ApplyMasking(const TrainingExample &ex,
                             const MaskingPolicy &policy, int schedule_k,
                             int mask_id, std::mt19937_64 &rng) {
  TrainingExample out = ex;
  out.mask_positions.clear();
  out.gold_ids.clear();
  const int n = static_cast<int>(ex.token_ids.size());
  std::vector<char> eligible(n, 0);
  for (int start : ex.value_starts) {
    int len = 0;
    while (start + len < n && ex.classes[start + len] == TokenClass::kValue &&
           ex.segments[start + len] == len + 1) {
      ++len;
    }
    int k = std::clamp(schedule_k, 1, kNumSlots);
    int count = len == kNumSlots
                    ? k
                    : (k >= kNumSlots ? len
                                      : std::min(len, (k * len + kNumSlots - 1) /
                                                          kNumSlots));
    std::vector<int> idx(len);
    std::iota(idx.begin(), idx.end(), 0);
    for (int i = 0; i < count; ++i) {
      std::uniform_int_distribution<int> pick(i, len - 1);
      std::swap(idx[i], idx[pick(rng)]);
      eligible[start + idx[i]] = 1;
    }
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    double p = 0.0;
    switch (ex.classes[i]) {
      case TokenClass::kValue: p = eligible[i] ? policy.p_value_slots : 0.0; break;
      case TokenClass::kAnnotated: p = policy.p_annotated_tokens; break;
      case TokenClass::kType: p = policy.p_types; break;
      case TokenClass::kOther: p = policy.p_other_text; break;
      case TokenClass::kStructural: continue;
    }
    if (ex.classes[i] == TokenClass::kValue && !eligible[i]) continue;
    if (unit(rng) < p) {
      out.mask_positions.push_back(i);
      out.gold_ids.push_back(ex.token_ids[i]);
      out.token_ids[i] = mask_id;
    }
  }
  return out;
}

// ----- Model and training -----

LinearizeOptions MlmModel::linearize_options(bool mask_values) const {
  LinearizeOptions o;
  o.mode = mode;
  o.value_len = value_len;
  o.max_seq = encoder.config().max_seq;
  o.mask_values = mask_values;
  return o;
}

MlmModel MakeMlmModel(const ModelConfig &config, ModelVocabulary vocab,
                      ValueMode mode, int value_len) {
  MlmModel model;
  ModelConfig c = config;
  c.vocab_size = static_cast<int>(vocab.size());
  model.vocab = std::move(vocab);
  model.mode = mode;
  model.value_len = mode == ValueMode::kSlots ? kNumSlots : value_len;
  if (model.value_len < 1) throw std::invalid_argument("value_len must be positive");
  model.encoder = Encoder(c, c.vocab_size, model.value_len);
  return model;
}

double MaskedLossAndGradient(const Encoder &encoder, const TrainingExample &ex,
                             double normalizer, std::vector<Matrix> *grads) {
  if (ex.mask_positions.empty()) return 0.0;
  Encoder::State state;
  encoder.Forward({ex.token_ids, ex.segments}, &state);
  Matrix logits = encoder.Logits(state, ex.mask_positions);
  Matrix dlogits(logits.rows(), logits.cols());
  double loss = 0.0;
  for (int r = 0; r < logits.rows(); ++r) {
    RowVector p = Softmax(logits.row(r));
    const int gold = ex.gold_ids[r];
    loss -= std::log(std::max(p(gold), 1e-300));
    p(gold) -= 1.0;
    dlogits.row(r) = p / normalizer;
  }
  if (grads) encoder.Backward(state, ex.mask_positions, dlogits, grads);
  return loss;
}

TrainResult TrainMlm(MlmModel *model, const std::vector<TrainingExample> &data,
                     const TrainOptions &options) {
  if (data.empty()) throw DataError("no training examples");
  options.policy.Validate();
  Encoder &enc = model->encoder;
  Optimizer opt(options.optimizer, enc.params(), options.steps);
  std::mt19937_64 rng(options.seed);
  std::vector<int> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  size_t cursor = 0;
  const int mask_id = model->vocab.mask();

  TrainResult result;
  std::vector<Matrix> grads = enc.ZeroGradients();
  double recent = 0.0;
  int recent_n = 0;
  for (int step = 0; step < options.steps; ++step) {
    const int k = options.curriculum ? CurriculumK(step, options.steps) : kNumSlots;
    std::vector<TrainingExample> batch;
    size_t masks = 0;
    for (int b = 0; b < options.batch_size; ++b) {
      if (cursor == order.size()) {
        std::shuffle(order.begin(), order.end(), rng);
        cursor = 0;
      }
      batch.push_back(ApplyMasking(data[order[cursor++]], options.policy, k,
                                   mask_id, rng));
      masks += batch.back().mask_positions.size();
    }
    if (masks == 0) {
      ++result.skipped_batches;
      result.loss_trace.push_back(result.loss_trace.empty() ? 0.0
                                                            : result.loss_trace.back());
      continue;
    }
    for (Matrix &g : grads) g.setZero();
    double loss = 0.0;
    for (const TrainingExample &ex : batch) {
      loss += MaskedLossAndGradient(enc, ex, static_cast<double>(masks), &grads);
    }
    loss /= static_cast<double>(masks);
    if (!std::isfinite(loss)) {
      throw NumericError("non-finite loss at step " + std::to_string(step));
    }
    try {
      opt.Step(&enc.params(), &grads);
    } catch (const NumericError &) {
      throw NumericError("non-finite gradient at step " + std::to_string(step));
    }
    result.loss_trace.push_back(loss);
    recent += loss;
    ++recent_n;
    if (options.log_every > 0 && options.on_log &&
        (step + 1) % options.log_every == 0) {
      options.on_log(step + 1, recent / recent_n);
      recent = 0.0;
      recent_n = 0;
    }
  }
  return result;
}

Matrix PredictLogits(const Encoder &encoder, const TrainingExample &ex) {
  if (ex.mask_positions.empty()) return Matrix(0, encoder.num_outputs());
  Encoder::State state;
  encoder.Forward({ex.token_ids, ex.segments}, &state);
  return encoder.Logits(state, ex.mask_positions);
}

}  // namespace tempnorm
