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

#include "doctest.h"
#include "tempnorm/slot_codec.h"
#include "tempnorm/timeml.h"
#include "tempnorm/weak_data.h"

namespace tempnorm {
namespace {

std::vector<Document> Synthetic(int docs, Style style = Style::kNews) {
  SynthOptions o;
  o.docs = docs;
  o.style = style;
  o.seed = 11;
  return GenerateCorpus(SyntheticGrammar::Default(), o);
}

PipelineConfig Small() {
  PipelineConfig c = DefaultConfig([](const std::string &) { return std::nullopt; });
  c.model.layers = 1;
  c.model.hidden = 16;
  c.model.heads = 2;
  c.model.ff_dim = 24;
  c.train.steps = 30;
  c.train.batch_size = 4;
  c.train.optimizer.warmup_steps = 0;
  c.tagger_model.hidden = 16;
  c.tagger_train.steps = 20;
  c.crf.steps = 3;
  return c;
}

TEST_CASE("gold boundaries with oracle values score 100") {
  PipelineConfig c = Small();
  c.extraction = ExtractionMode::kGold;
  c.normalizer_source = NormalizerSource::kOracle;
  std::vector<Document> docs = Synthetic(60);
  PipelineResult r = RunPipeline(docs, c, {});
  CHECK(r.errors.empty());
  for (Metric m : kAllMetrics) CHECK(r.report.Get(m).f1 == doctest::Approx(100.0));
  CHECK(r.anchored == r.gold_annotations);
  // Every output value is fully specified.
  for (const Document &d : r.predictions) {
    for (const TimexAnnotation &a : d.annotations) {
      std::optional<CirClass> cls = ClassifyCir(a.value);
      REQUIRE(cls);
      CHECK(IsFullySpecified(*cls));
    }
  }
  CHECK(r.by_language.size() == 2);
}

TEST_CASE("anchoring uses the creation time and earlier dates") {
  Document doc = ParseInline(
      "<TIMEX3 type=\"DATE\" value=\"UNDEF-last-day\">yesterday</TIMEX3> and "
      "<TIMEX3 type=\"DATE\" value=\"UNDEF-year-05\">May</TIMEX3>");
  doc.dct = ParseDate("2022-05-01");
  std::vector<std::string> errors;
  Document out = AnchorDocument(doc, Small(), [&](const std::string &m) { errors.push_back(m); });
  CHECK(errors.empty());
  CHECK(out.annotations[0].value == "2022-04-30");
  CHECK(out.annotations[1].value == "2022-05");
}

TEST_CASE("stage failures are isolated per document") {
  PipelineConfig c = Small();
  c.extraction = ExtractionMode::kGold;
  c.normalizer_source = NormalizerSource::kOracle;
  std::vector<Document> docs = Synthetic(4);
  docs[1].dct.reset();
  PipelineResult r = RunPipeline(docs, c, {});
  REQUIRE_FALSE(r.errors.empty());
  for (const StageError &e : r.errors) {
    CHECK(e.document == docs[1].id);
    CHECK((e.stage == "anchor" || e.stage == "reference"));
  }
  CHECK(r.predictions.size() == 4);
  CHECK(r.anchored == r.gold_annotations - static_cast<int>(docs[1].annotations.size()));
  nlohmann::ordered_json j = PipelineReportJson(r, c);
  CHECK(j["counts"]["errors"] == r.errors.size());
  CHECK(j["errors"][0]["document"] == docs[1].id);
}

TEST_CASE("missing models are usage errors") {
  PipelineConfig c = Small();
  CHECK_THROWS_AS(RunPipeline(Synthetic(2), c, {}), std::invalid_argument);
  c.extraction = ExtractionMode::kGold;
  CHECK_THROWS_AS(RunPipeline(Synthetic(2), c, {}), std::invalid_argument);
}

TEST_CASE("trained models run end to end and reports are reproducible") {
  std::vector<Document> docs = Synthetic(30, Style::kNarrative);
  PipelineConfig c = Small();
  MlmModel norm = TrainNormalizer(docs, c);
  TaggerModel tagger = TrainTaggerModel(docs, c);
  CrfModel crf = TrainCrfForNormalizer(norm, docs, c);
  PipelineModels models{&tagger, &norm, &crf};

  auto report = [&](DecodeStrategy s) {
    PipelineConfig run = c;
    run.decode = s;
    return PipelineReportJson(RunPipeline(docs, run, models), run);
  };
  nlohmann::ordered_json seq = report(DecodeStrategy::kSequential);
  CHECK(seq.dump() == report(DecodeStrategy::kSequential).dump());
  CHECK(seq["counts"]["documents"] == 30);

  // Decoding changes normalization only; extraction scores are unchanged.
  nlohmann::ordered_json vit = report(DecodeStrategy::kViterbi);
  nlohmann::ordered_json sim = report(DecodeStrategy::kSimultaneous);
  for (const char *m : {"strict", "relaxed", "type"}) {
    CHECK(vit["metrics"][m] == sim["metrics"][m]);
    CHECK(seq["metrics"][m] == sim["metrics"][m]);
  }
  CHECK(sim["counts"]["forward_passes"] <= seq["counts"]["forward_passes"]);
}

}  // namespace
}  // namespace tempnorm
