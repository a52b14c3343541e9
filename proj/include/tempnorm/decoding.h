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

// Turning masked value positions into value tokens: sequential,
// simultaneous and CRF/Viterbi decoding.

#ifndef TEMPNORM_DECODING_H_
#define TEMPNORM_DECODING_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempnorm/crf.h"
#include "tempnorm/mlm.h"

namespace tempnorm {

enum class DecodeStrategy { kSequential, kSimultaneous, kViterbi };

std::string_view DecodeStrategyName(DecodeStrategy strategy);
std::optional<DecodeStrategy> ParseDecodeStrategy(std::string_view name);

// Transition scores over value tokens; labels[i] is the model token id of
// label i.
struct CrfModel {
  Matrix transitions;
  std::vector<int> labels;
};

struct DecodeOptions {
  DecodeStrategy strategy = DecodeStrategy::kSequential;
  // Restrict value predictions to value tokens (slot tokens, or characters
  // in character mode).
  bool restricted = true;
  const CrfModel *crf = nullptr;
};

struct DecodeStats {
  int forward_passes = 0;
};

// Index of the highest score among `candidates` (all ids when empty);
// ties go to the lowest id.
int ArgmaxId(const RowVector &scores, const std::vector<int> &candidates);

// For each annotation of `ex`, in value_starts order, the value token ids
// after filling its masked value positions. Unmasked positions keep their
// input token.
std::vector<std::vector<int>> DecodeValues(const MlmModel &model,
                                           const TrainingExample &ex,
                                           const DecodeOptions &options,
                                           DecodeStats *stats = nullptr);

// Emissions (value positions x labels) from one pass with every value
// position masked, paired with the gold labels of `gold`, for CRF training.
std::vector<CrfExample> CollectCrfData(const MlmModel &model,
                                       const std::vector<TrainingExample> &gold,
                                       const std::vector<int> &labels);

CrfModel TrainCrfModel(const MlmModel &model,
                       const std::vector<TrainingExample> &gold,
                       const CrfTrainOptions &options,
                       std::vector<double> *trace = nullptr);

// Predicted CIR per annotation of `doc` (spans and types must be set);
// nullopt where no value could be produced.
std::vector<std::optional<std::string>> NormalizeDocument(
    const MlmModel &model, const Document &doc, const DecodeOptions &options,
    DecodeStats *stats = nullptr);

}  // namespace tempnorm

#endif  // TEMPNORM_DECODING_H_
