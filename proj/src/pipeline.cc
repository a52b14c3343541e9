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

#include "tempnorm/pipeline.h"

#include <sstream>

#include "tempnorm/slot_codec.h"
#include "tempnorm/weak_data.h"

namespace tempnorm {
namespace {

std::vector<TrainingExample> TrainingData(const std::vector<Document> &docs,
                                          const MlmModel &model, LinearizeStats *stats) {
  std::vector<TrainingExample> data;
  for (const Document &d : docs) {
    for (TrainingExample &ex : Linearize(d, model.vocab, model.linearize_options(false), stats)) {
      data.push_back(std::move(ex));
    }
  }
  return data;
}

// A full calendar day, optionally with a time, usable as an anchor.
std::optional<CalendarDate> FullDate(const std::string &value) {
  if (value.size() < 10 || value[4] != '-' || value[7] != '-') return std::nullopt;
  return TryParseDate(value);
}

// Value for `span` in oracle mode: the gold CIR of the identical gold span,
// passed through the slot encoding and back.
std::string OracleCir(const Document &gold, const TimexAnnotation &span) {
  for (const TimexAnnotation &a : gold.annotations) {
    if (a.start == span.start && a.end == span.end) {
      return DecodeSlots(EncodeCir(a.value).slots).cir;
    }
  }
  throw DataError("no gold value for span " + std::to_string(span.start) + ".." +
                  std::to_string(span.end));
}

}  // namespace

MlmModel TrainNormalizer(const std::vector<Document> &docs, const PipelineConfig &config,
                         const LogFn &log) {
  config.Validate();
  MlmModel model = MakeMlmModel(config.model, ModelVocabulary::Build(docs, config.min_count),
                                config.mode, config.value_len);
  LinearizeStats stats;
  std::vector<TrainingExample> data = TrainingData(docs, model, &stats);
  if (data.empty()) throw DataError("no normalizer training examples");
  if (log) {
    std::ostringstream os;
    os << "normalizer: " << data.size() << " windows, vocabulary " << model.vocab.size()
       << ", skipped " << stats.skipped_annotations << " unencodable and "
       << stats.oversized_annotations << " oversized annotations";
    log(os.str());
  }
  TrainOptions options = config.train;
  if (log && options.log_every <= 0) options.log_every = std::max(1, options.steps / 20);
  if (log) {
    options.on_log = [&log](int step, double loss) {
      std::ostringstream os;
      os << "step " << step << " loss " << loss;
      log(os.str());
    };
  }
  TrainResult r = TrainMlm(&model, data, options);
  if (log && r.skipped_batches > 0) {
    log("skipped " + std::to_string(r.skipped_batches) + " batches without masks");
  }
  return model;
}

TaggerModel TrainTaggerModel(const std::vector<Document> &docs, const PipelineConfig &config,
                             const LogFn &log) {
  config.Validate();
  TaggerModel model =
      MakeTagger(config.tagger_model, ModelVocabulary::Build(docs, config.min_count));
  TaggerTrainOptions options = config.tagger_train;
  if (log) {
    options.log_every = std::max(1, options.steps / 10);
    options.on_log = [&log](int step, double loss) {
      std::ostringstream os;
      os << "tagger step " << step << " loss " << loss;
      log(os.str());
    };
  }
  TrainTagger(&model, docs, options);
  return model;
}

CrfModel TrainCrfForNormalizer(const MlmModel &model, const std::vector<Document> &docs,
                               const PipelineConfig &config) {
  std::vector<TrainingExample> gold = TrainingData(docs, model, nullptr);
  if (gold.empty()) throw DataError("no CRF training examples");
  return TrainCrfModel(model, gold, config.crf);
}

Document AnchorDocument(const Document &doc, const PipelineConfig &config,
                        const std::function<void(const std::string &)> &on_error) {
  Document out = doc;
  std::vector<CalendarDate> previous;
  for (TimexAnnotation &a : out.annotations) {
    if (a.value.empty()) continue;
    const std::string cir = a.value;
    a.value.clear();
    try {
      if (!doc.dct) throw AnchorError("document has no creation time");
      AnchorContext ctx;
      ctx.reference = *doc.dct;
      ctx.previous_dates = previous;
      ctx.tense = config.tense;
      std::string value = Anchor(cir, ctx, config.anchor);
      if (!IsExplicitCir(value)) {
        throw AnchorError("anchored value " + value + " is not fully specified");
      }
      if (std::optional<CalendarDate> d = FullDate(value)) previous.push_back(*d);
      a.value = std::move(value);
    } catch (const DataError &e) {
      on_error(cir + ": " + e.what());
    } catch (const std::invalid_argument &e) {
      on_error(cir + ": " + e.what());
    }
  }
  return out;
}

PipelineResult RunPipeline(const std::vector<Document> &docs, const PipelineConfig &config,
                           const PipelineModels &models,
                           const std::map<std::string, std::vector<std::string>> &groups) {
  config.Validate();
  if (config.extraction == ExtractionMode::kModel && !models.tagger) {
    throw std::invalid_argument("model extraction needs a tagger");
  }
  if (config.normalizer_source == NormalizerSource::kModel && !models.normalizer) {
    throw std::invalid_argument("model normalization needs a normalizer");
  }
  if (config.normalizer_source == NormalizerSource::kModel &&
      config.decode == DecodeStrategy::kViterbi && !models.crf) {
    throw std::invalid_argument("viterbi decoding needs a CRF");
  }
  PipelineResult result;
  DecodeOptions decode;
  decode.strategy = config.decode;
  decode.restricted = config.restricted;
  decode.crf = models.crf;

  for (const Document &gold : docs) {
    auto fail = [&](const char *stage, const std::string &message) {
      result.errors.push_back({gold.id, stage, message});
    };
    result.gold_annotations += static_cast<int>(gold.annotations.size());
    result.references.push_back(
        AnchorDocument(gold, config, [&](const std::string &m) { fail("reference", m); }));

    Document pred = gold;
    pred.annotations.clear();
    try {
      pred.annotations = config.extraction == ExtractionMode::kGold ? GoldBoundaries(gold)
                                                                    : Tag(*models.tagger, gold);
    } catch (const DataError &e) {
      fail("extract", e.what());
    } catch (const NumericError &e) {
      fail("extract", e.what());
    }
    result.predicted_annotations += static_cast<int>(pred.annotations.size());

    if (config.normalizer_source == NormalizerSource::kOracle) {
      for (TimexAnnotation &a : pred.annotations) {
        try {
          a.value = OracleCir(gold, a);
        } catch (const DataError &e) {
          fail("normalize", e.what());
        }
      }
    } else if (!pred.annotations.empty()) {
      try {
        DecodeStats stats;
        std::vector<std::optional<std::string>> cirs =
            NormalizeDocument(*models.normalizer, pred, decode, &stats);
        result.forward_passes += stats.forward_passes;
        for (size_t i = 0; i < cirs.size(); ++i) {
          if (cirs[i]) {
            pred.annotations[i].value = *cirs[i];
          } else {
            fail("normalize", "no value for span " + std::to_string(pred.annotations[i].start) +
                                  ".." + std::to_string(pred.annotations[i].end));
          }
        }
      } catch (const DataError &e) {
        fail("normalize", e.what());
      } catch (const NumericError &e) {
        fail("normalize", e.what());
      }
    }
    for (const TimexAnnotation &a : pred.annotations) result.normalized += !a.value.empty();

    pred = AnchorDocument(pred, config, [&](const std::string &m) { fail("anchor", m); });
    for (const TimexAnnotation &a : pred.annotations) result.anchored += !a.value.empty();
    result.predictions.push_back(std::move(pred));
  }

  result.report = Evaluate(result.references, result.predictions);
  result.by_language = EvaluateByLanguage(result.references, result.predictions);
  if (!result.by_language.empty()) result.averages = Aggregate(result.by_language, groups);
  return result;
}

nlohmann::ordered_json PipelineReportJson(const PipelineResult &result,
                                          const PipelineConfig &config) {
  nlohmann::ordered_json j;
  j["config"] = ConfigToJson(config);
  // Destinations do not influence the result.
  j["config"]["paths"].erase("report");
  j["config"]["paths"].erase("output");
  nlohmann::ordered_json counts;
  counts["documents"] = result.predictions.size();
  counts["gold_annotations"] = result.gold_annotations;
  counts["predicted_annotations"] = result.predicted_annotations;
  counts["normalized"] = result.normalized;
  counts["anchored"] = result.anchored;
  counts["forward_passes"] = result.forward_passes;
  counts["errors"] = result.errors.size();
  j["counts"] = counts;
  nlohmann::ordered_json by_stage = nlohmann::ordered_json::object();
  for (const StageError &e : result.errors) {
    by_stage[e.stage] = by_stage.value(e.stage, 0) + 1;
  }
  j["errors_by_stage"] = by_stage;
  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (const StageError &e : result.errors) {
    errors.push_back({{"document", e.document}, {"stage", e.stage}, {"message", e.message}});
  }
  j["errors"] = errors;
  j["metrics"] = ReportToJson(result.report);
  nlohmann::ordered_json langs = nlohmann::ordered_json::object();
  for (const auto &[lang, rep] : result.by_language) langs[lang] = ReportToJson(rep);
  j["languages"] = langs;
  j["averages"] = AveragesToJson(result.averages);
  return j;
}

}  // namespace tempnorm
