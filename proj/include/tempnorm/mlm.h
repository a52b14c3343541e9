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

// Masked-language-model normalizer: inline linearization of annotated text
// with value slots, masking with a slot curriculum, and training.

#ifndef TEMPNORM_MLM_H_
#define TEMPNORM_MLM_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tempnorm/document.h"
#include "tempnorm/encoder.h"
#include "tempnorm/optimizer.h"
#include "tempnorm/slot_codec.h"

namespace tempnorm {

inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kMaskToken = "[MASK]";
inline constexpr std::string_view kTimexOpen = "<TIMEX3>";
inline constexpr std::string_view kTimexClose = "</TIMEX3>";

// How an annotation's value is laid out in the model input.
enum class ValueMode {
  kSlots,  // 11 slot tokens
  kChars,  // one token per character, padded to a fixed length
};

std::string_view ValueModeName(ValueMode mode);
std::optional<ValueMode> ParseValueMode(std::string_view name);

// Token inventory of the encoder. Entries carry a class prefix: "w:" for
// words, "s:" for slot values, "c:" for value characters and "t:" for
// TIMEX3 types. Special tokens are unprefixed.
class ModelVocabulary {
 public:
  ModelVocabulary() = default;

  // Specials, types, the slot baseline, printable ASCII characters and every
  // word of `docs` occurring at least `min_count` times.
  static ModelVocabulary Build(const std::vector<Document> &docs,
                               int min_count = 1);
  static ModelVocabulary FromTokens(std::vector<std::string> tokens);

  size_t size() const { return tokens_.size(); }
  const std::vector<std::string> &tokens() const { return tokens_; }
  const std::string &token(int id) const { return tokens_.at(id); }
  std::optional<int> Find(std::string_view token) const;
  // Id of a required token; throws DataError when absent.
  int Id(std::string_view token) const;

  int WordId(std::string_view word) const;
  int SlotId(std::string_view value) const;
  int CharId(char c) const;
  int TypeId(TimexType type) const;
  int unk() const { return unk_; }
  int mask() const { return mask_; }

  // Ids that may fill a value position in the given mode, ascending.
  std::vector<int> ValueIds(ValueMode mode) const;

 private:
  void Index();

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
  int unk_ = -1;
  int mask_ = -1;
};

enum class TokenClass : uint8_t {
  kStructural,  // CLS, SEP, TIMEX3 brackets; never masked
  kOther,       // text outside annotations
  kAnnotated,   // surface tokens inside an annotation
  kType,        // the TIMEX3 type token
  kValue,       // value positions
};

// One encoder input window. Spans of value positions are listed per
// annotation; mask_positions and gold_ids are filled by ApplyMasking or by
// inference-time linearization.
struct TrainingExample {
  std::vector<int> token_ids;
  std::vector<int> segments;
  std::vector<TokenClass> classes;
  std::vector<int> value_starts;
  std::vector<int> annotation_ids;
  std::vector<int> mask_positions;
  std::vector<int> gold_ids;
};

struct LinearizeOptions {
  ValueMode mode = ValueMode::kSlots;
  // Value positions per annotation: 11 for slots, the character budget for
  // character mode.
  int value_len = kNumSlots;
  int max_seq = 64;
  // Inference: every value position holds [MASK] and no gold is needed.
  bool mask_values = false;
};

struct LinearizeStats {
  int skipped_annotations = 0;  // value not encodable; span kept as text
  int oversized_annotations = 0;
};

// Value token ids for `cir`, or nullopt when it cannot be represented.
std::optional<std::vector<int>> ValueTokens(std::string_view cir,
                                            const ModelVocabulary &vocab,
                                            ValueMode mode, int value_len);

// Inverse of ValueTokens: the CIR string a predicted value spells.
std::string ValueString(const std::vector<int> &ids,
                        const ModelVocabulary &vocab, ValueMode mode);

std::vector<TrainingExample> Linearize(const Document &doc,
                                       const ModelVocabulary &vocab,
                                       const LinearizeOptions &options,
                                       LinearizeStats *stats = nullptr);

struct MaskingPolicy {
  double p_value_slots = 0.70;
  double p_annotated_tokens = 0.15;
  double p_types = 0.10;
  double p_other_text = 0.05;

  void Validate() const;
};

// Masks a copy of `ex`. In each annotation exactly
// min(schedule_k, value_len) value positions are eligible, chosen uniformly;
// character mode scales schedule_k to the longer value span.
TrainingExample ApplyMasking(const TrainingExample &ex,
                             const MaskingPolicy &policy, int schedule_k,
                             int mask_id, std::mt19937_64 &rng);

// Number of eligible value slots at `step` of `total_steps`: rises linearly
// from 1 to `max_masks` over the first half and stays there.
int CurriculumK(int step, int total_steps, int max_masks = kNumSlots);

struct MlmModel {
  ModelVocabulary vocab;
  Encoder encoder;
  ValueMode mode = ValueMode::kSlots;
  int value_len = kNumSlots;

  LinearizeOptions linearize_options(bool mask_values) const;
};

// Fresh model over `vocab`; value_len is forced to 11 in slot mode.
MlmModel MakeMlmModel(const ModelConfig &config, ModelVocabulary vocab,
                      ValueMode mode, int value_len);

struct TrainOptions {
  int steps = 2000;
  int batch_size = 16;
  OptimizerConfig optimizer;
  MaskingPolicy policy;
  bool curriculum = true;
  uint64_t seed = 1;
  // Called every `log_every` steps with (step, mean recent loss).
  int log_every = 0;
  std::function<void(int, double)> on_log;
};

struct TrainResult {
  std::vector<double> loss_trace;  // mean masked cross-entropy per step
  int skipped_batches = 0;
};

// Softmax cross-entropy over masked positions; adds gradients to `grads`
// scaled by 1/normalizer and returns the summed loss.
double MaskedLossAndGradient(const Encoder &encoder, const TrainingExample &ex,
                             double normalizer, std::vector<Matrix> *grads);

TrainResult TrainMlm(MlmModel *model, const std::vector<TrainingExample> &data,
                     const TrainOptions &options);

// Full-vocabulary scores, one row per entry of ex.mask_positions.
Matrix PredictLogits(const Encoder &encoder, const TrainingExample &ex);

}  // namespace tempnorm

#endif  // TEMPNORM_MLM_H_
