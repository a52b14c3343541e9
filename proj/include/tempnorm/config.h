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

// Run configuration: one TOML file plus TEMPNORM_<SECTION>_<KEY>
// environment overrides, e.g. TEMPNORM_TRAIN_STEPS=500.

#ifndef TEMPNORM_CONFIG_H_
#define TEMPNORM_CONFIG_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tempnorm/anchoring.h"
#include "tempnorm/crf.h"
#include "tempnorm/decoding.h"
#include "tempnorm/extraction.h"
#include "tempnorm/mlm.h"

namespace tempnorm {

// Where annotation spans come from.
enum class ExtractionMode { kModel, kGold };
// Where CIRs come from: the trained normalizer, or the gold values (a
// closed-loop check of linearization, decoding and anchoring).
enum class NormalizerSource { kModel, kOracle };

std::string_view ExtractionModeName(ExtractionMode mode);
std::optional<ExtractionMode> ParseExtractionMode(std::string_view name);
std::string_view NormalizerSourceName(NormalizerSource source);
std::optional<NormalizerSource> ParseNormalizerSource(std::string_view name);

struct PipelineConfig {
  // [model]: the normalizer.
  ModelConfig model;
  ValueMode mode = ValueMode::kSlots;
  int value_len = kNumSlots;
  int min_count = 1;
  // [train]
  TrainOptions train;
  // [tagger]
  ModelConfig tagger_model;
  TaggerTrainOptions tagger_train;
  // [crf]
  CrfTrainOptions crf;
  // [paths]
  std::string data;        // documents to process and score against
  std::string train_data;  // training documents; defaults to `data`
  std::string normalizer_path;
  std::string tagger_path;
  std::string crf_path;
  std::string report_path;
  std::string output_path;
  std::string groups_path;
  // [pipeline]
  ExtractionMode extraction = ExtractionMode::kModel;
  NormalizerSource normalizer_source = NormalizerSource::kModel;
  DecodeStrategy decode = DecodeStrategy::kSequential;
  bool restricted = true;
  bool train_first = false;
  // [anchoring]
  TenseHint tense = TenseHint::kUnknown;
  AnchorOptions anchor;

  PipelineConfig();
  void Validate() const;
};

// Raised for unknown keys, wrong value types and out-of-range values.
class ConfigError : public DataError {
 public:
  using DataError::DataError;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string &)>;

// Process environment lookup.
std::optional<std::string> GetEnv(const std::string &name);

// Parses TOML text over the defaults, then applies environment overrides.
PipelineConfig ParseConfig(std::string_view toml, const EnvLookup &env = GetEnv);
PipelineConfig LoadConfig(const std::string &path, const EnvLookup &env = GetEnv);
// Defaults plus environment overrides.
PipelineConfig DefaultConfig(const EnvLookup &env = GetEnv);

// Every setting as "section.key" -> canonical string, in a fixed order.
std::vector<std::pair<std::string, std::string>> ConfigEntries(const PipelineConfig &config);

// Seeds and settings that determine a run, for reports.
nlohmann::ordered_json ConfigToJson(const PipelineConfig &config);

}  // namespace tempnorm

#endif  // TEMPNORM_CONFIG_H_
