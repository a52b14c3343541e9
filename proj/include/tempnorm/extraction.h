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

// Temporal expression extraction as BIO token classification over the
// same encoder used for normalization.

#ifndef TEMPNORM_EXTRACTION_H_
#define TEMPNORM_EXTRACTION_H_

#include <vector>

#include "tempnorm/document.h"
#include "tempnorm/mlm.h"
#include "tempnorm/timeml.h"

namespace tempnorm {

struct TaggerModel {
  ModelVocabulary vocab;
  Encoder encoder;  // kNumBioLabels outputs, no segments
};

TaggerModel MakeTagger(const ModelConfig &config, ModelVocabulary vocab);

// One window of a document: [CLS] tokens [SEP] with a label per position.
// Structural positions carry label -1 and are not scored.
struct TaggerExample {
  std::vector<int> token_ids;
  std::vector<int> labels;
  int first_token = 0;  // document index of the first word
};

// Consecutive windows of at most max_seq - 2 words. Labels come from the
// gold annotations when `with_labels` is set.
std::vector<TaggerExample> TaggerExamples(const Document &doc,
                                          const ModelVocabulary &vocab,
                                          int max_seq, bool with_labels);

// Summed token cross-entropy; gradients are scaled by 1 / normalizer.
double TaggerLossAndGradient(const Encoder &encoder, const TaggerExample &ex,
                             double normalizer, std::vector<Matrix> *grads);

struct TaggerTrainOptions {
  int steps = 600;
  int batch_size = 8;
  OptimizerConfig optimizer;
  uint64_t seed = 1;
  int log_every = 0;
  std::function<void(int, double)> on_log;
};

// Mean per-token loss per step.
std::vector<double> TrainTagger(TaggerModel *model, const std::vector<Document> &docs,
                                const TaggerTrainOptions &options);

// Predicted labels for every token of `doc`; ties go to the lowest label.
std::vector<BioTag> PredictBio(const TaggerModel &model, const Document &doc);

// Sorted, non-overlapping annotations with empty values.
std::vector<TimexAnnotation> Tag(const TaggerModel &model, const Document &doc);

// The gold spans and types of `doc` with values removed.
std::vector<TimexAnnotation> GoldBoundaries(const Document &doc);

}  // namespace tempnorm

#endif  // TEMPNORM_EXTRACTION_H_
