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

// End-to-end tagging: extract spans, normalize each to a CIR, anchor the
// CIR against the document creation time, then score.

#ifndef TEMPNORM_PIPELINE_H_
#define TEMPNORM_PIPELINE_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tempnorm/config.h"
#include "tempnorm/evaluation.h"

namespace tempnorm {

using LogFn = std::function<void(const std::string &)>;

// Training entry points driven by a config. `log` receives progress lines.
MlmModel TrainNormalizer(const std::vector<Document> &docs, const PipelineConfig &config,
                         const LogFn &log = nullptr);
TaggerModel TrainTaggerModel(const std::vector<Document> &docs, const PipelineConfig &config,
                             const LogFn &log = nullptr);
CrfModel TrainCrfForNormalizer(const MlmModel &model, const std::vector<Document> &docs,
                               const PipelineConfig &config);

// Models used by a run; which ones are needed depends on the config.
struct PipelineModels {
  const TaggerModel *tagger = nullptr;
  const MlmModel *normalizer = nullptr;
  const CrfModel *crf = nullptr;
};

struct StageError {
  std::string document;
  std::string stage;  // "extract", "normalize" or "anchor"
  std::string message;
};

struct PipelineResult {
  // Input documents with predicted spans and anchored values. Annotations
  // whose normalization or anchoring failed keep an empty value.
  std::vector<Document> predictions;
  // Input documents with their gold CIRs anchored the same way.
  std::vector<Document> references;
  std::vector<StageError> errors;
  int gold_annotations = 0;
  int predicted_annotations = 0;
  int normalized = 0;
  int anchored = 0;
  int forward_passes = 0;
  EvalReport report;
  std::map<std::string, EvalReport> by_language;
  GroupedAverages averages;
};

// Anchors every CIR of `doc` in order: the reference is the creation time
// and the full dates of earlier expressions are passed as previous dates.
// Failures leave the value empty and are reported through `on_error`.
Document AnchorDocument(const Document &doc, const PipelineConfig &config,
                        const std::function<void(const std::string &)> &on_error);

// Runs every document through the configured stages. A failing stage is
// recorded with the document id and the document continues or is skipped;
// the run never aborts on data errors.
PipelineResult RunPipeline(const std::vector<Document> &docs, const PipelineConfig &config,
                           const PipelineModels &models,
                           const std::map<std::string, std::vector<std::string>> &groups = {});

// Deterministic report: settings and seeds, counts, errors and scores.
nlohmann::ordered_json PipelineReportJson(const PipelineResult &result,
                                          const PipelineConfig &config);

}  // namespace tempnorm

#endif  // TEMPNORM_PIPELINE_H_
