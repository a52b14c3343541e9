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

#include "tempnorm/decoding.h"

#include <algorithm>
#include <unordered_map>

namespace tempnorm {
namespace {

// Large negative emission that pins a position to a known label.
constexpr double kForbidden = -1e9;

int ValueLength(const TrainingExample &ex, int start) {
  int len = 0;
  const int n = static_cast<int>(ex.token_ids.size());
  while (start + len < n && ex.classes[start + len] == TokenClass::kValue &&
         ex.segments[start + len] == len + 1) {
    ++len;
  }
  return len;
}

Matrix ForwardLogits(const Encoder &encoder, const std::vector<int> &ids,
                     const std::vector<int> &segments,
                     const std::vector<int> &positions, DecodeStats *stats) {
  Encoder::State state;
  encoder.Forward({ids, segments}, &state);
  if (stats) ++stats->forward_passes;
  return encoder.Logits(state, positions);
}

}  // namespace

std::string_view DecodeStrategyName(DecodeStrategy strategy) {
  switch (strategy) {
    case DecodeStrategy::kSequential: return "sequential";
    case DecodeStrategy::kSimultaneous: return "simultaneous";
    default: return "viterbi";
  }
}

std::optional<DecodeStrategy> ParseDecodeStrategy(std::string_view name) {
  for (DecodeStrategy s : {DecodeStrategy::kSequential, DecodeStrategy::kSimultaneous,
                           DecodeStrategy::kViterbi}) {
    if (DecodeStrategyName(s) == name) return s;
  }
  return std::nullopt;
}

int ArgmaxId(const RowVector &scores, const std::vector<int> &candidates) {
  int best = -1;
  double best_score = 0.0;
  auto consider = [&](int id) {
    if (best < 0 || scores(id) > best_score) {
      best = id;
      best_score = scores(id);
    }
  };
  if (candidates.empty()) {
    for (int id = 0; id < scores.size(); ++id) consider(id);
  } else {
    for (int id : candidates) consider(id);
  }
  return best;
}

std::vector<std::vector<int>> DecodeValues(const MlmModel &model,
                                           const TrainingExample &ex,
                                           const DecodeOptions &options,
                                           DecodeStats *stats) {
  const int mask = model.vocab.mask();
  const std::vector<int> candidates =
      options.restricted ? model.vocab.ValueIds(model.mode) : std::vector<int>{};
  std::vector<int> ids = ex.token_ids;

  // Masked value positions grouped by value index.
  int max_len = 0;
  for (int start : ex.value_starts) max_len = std::max(max_len, ValueLength(ex, start));
  std::vector<std::vector<int>> by_slot(max_len);
  for (int start : ex.value_starts) {
    const int len = ValueLength(ex, start);
    for (int s = 0; s < len; ++s) {
      if (ids[start + s] == mask) by_slot[s].push_back(start + s);
    }
  }
  std::vector<int> all;
  for (const auto &v : by_slot) all.insert(all.end(), v.begin(), v.end());
  std::sort(all.begin(), all.end());

  auto collect = [&]() {
    std::vector<std::vector<int>> out;
    for (int start : ex.value_starts) {
      const int len = ValueLength(ex, start);
      out.emplace_back(ids.begin() + start, ids.begin() + start + len);
    }
    return out;
  };
  if (all.empty()) return collect();

  switch (options.strategy) {
    case DecodeStrategy::kSequential:
      for (const std::vector<int> &positions : by_slot) {
        if (positions.empty()) continue;
        Matrix logits = ForwardLogits(model.encoder, ids, ex.segments, positions, stats);
        for (size_t i = 0; i < positions.size(); ++i) {
          ids[positions[i]] = ArgmaxId(logits.row(i), candidates);
        }
      }
      break;
    case DecodeStrategy::kSimultaneous: {
      Matrix logits = ForwardLogits(model.encoder, ids, ex.segments, all, stats);
      for (size_t i = 0; i < all.size(); ++i) {
        ids[all[i]] = ArgmaxId(logits.row(i), candidates);
      }
      break;
    }
    case DecodeStrategy::kViterbi: {
      if (!options.crf) throw std::invalid_argument("viterbi decoding needs a CRF");
      const CrfModel &crf = *options.crf;
      std::unordered_map<int, int> label_of;
      for (size_t i = 0; i < crf.labels.size(); ++i) {
        label_of[crf.labels[i]] = static_cast<int>(i);
      }
      Matrix logits = ForwardLogits(model.encoder, ids, ex.segments, all, stats);
      std::unordered_map<int, int> row_of;
      for (size_t i = 0; i < all.size(); ++i) row_of[all[i]] = static_cast<int>(i);
      for (int start : ex.value_starts) {
        const int len = ValueLength(ex, start);
        Matrix emissions(len, crf.labels.size());
        for (int s = 0; s < len; ++s) {
          auto row = row_of.find(start + s);
          if (row != row_of.end()) {
            for (size_t l = 0; l < crf.labels.size(); ++l) {
              emissions(s, l) = logits(row->second, crf.labels[l]);
            }
          } else {
            emissions.row(s).setConstant(kForbidden);
            auto known = label_of.find(ids[start + s]);
            if (known != label_of.end()) emissions(s, known->second) = 0.0;
          }
        }
        std::vector<int> path = Viterbi(crf.transitions, emissions);
        for (int s = 0; s < len; ++s) {
          if (row_of.count(start + s)) ids[start + s] = crf.labels[path[s]];
        }
      }
      break;
    }
  }
  return collect();
}

std::vector<CrfExample> CollectCrfData(const MlmModel &model,
                                       const std::vector<TrainingExample> &gold,
                                       const std::vector<int> &labels) {
  std::unordered_map<int, int> label_of;
  for (size_t i = 0; i < labels.size(); ++i) label_of[labels[i]] = static_cast<int>(i);
  std::vector<CrfExample> data;
  for (const TrainingExample &ex : gold) {
    if (ex.value_starts.empty()) continue;
    std::vector<int> ids = ex.token_ids;
    std::vector<int> positions;
    for (int start : ex.value_starts) {
      for (int s = 0; s < ValueLength(ex, start); ++s) {
        positions.push_back(start + s);
        ids[start + s] = model.vocab.mask();
      }
    }
    Matrix logits = ForwardLogits(model.encoder, ids, ex.segments, positions, nullptr);
    int row = 0;
    for (int start : ex.value_starts) {
      const int len = ValueLength(ex, start);
      CrfExample c;
      c.emissions.resize(len, labels.size());
      bool ok = true;
      for (int s = 0; s < len; ++s, ++row) {
        for (size_t l = 0; l < labels.size(); ++l) {
          c.emissions(s, l) = logits(row, labels[l]);
        }
        auto it = label_of.find(ex.token_ids[start + s]);
        if (it == label_of.end()) {
          ok = false;
        } else {
          c.labels.push_back(it->second);
        }
      }
      if (ok) data.push_back(std::move(c));
    }
  }
  return data;
}

CrfModel TrainCrfModel(const MlmModel &model,
                       const std::vector<TrainingExample> &gold,
                       const CrfTrainOptions &options, std::vector<double> *trace) {
  CrfModel crf;
  crf.labels = model.vocab.ValueIds(model.mode);
  std::vector<CrfExample> data = CollectCrfData(model, gold, crf.labels);
  if (data.empty()) throw DataError("no annotations for CRF training");
  CrfTrainResult fit = TrainCrf(data, static_cast<int>(crf.labels.size()), options);
  crf.transitions = std::move(fit.transitions);
  if (trace) *trace = std::move(fit.likelihood_trace);
  return crf;
}

std::vector<std::optional<std::string>> NormalizeDocument(
    const MlmModel &model, const Document &doc, const DecodeOptions &options,
    DecodeStats *stats) {
  std::vector<std::optional<std::string>> out(doc.annotations.size());
  for (const TrainingExample &ex :
       Linearize(doc, model.vocab, model.linearize_options(true))) {
    if (ex.value_starts.empty()) continue;
    std::vector<std::vector<int>> values = DecodeValues(model, ex, options, stats);
    for (size_t i = 0; i < values.size(); ++i) {
      try {
        std::string cir = ValueString(values[i], model.vocab, model.mode);
        if (!cir.empty()) out[ex.annotation_ids[i]] = std::move(cir);
      } catch (const DataError &) {
        // All-[PAD] prediction: leave the value unset.
      }
    }
  }
  return out;
}

}  // namespace tempnorm
