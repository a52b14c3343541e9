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

#include <random>

#include "doctest.h"
#include "support/gradient_check.h"
#include "tempnorm/timeml.h"

namespace tempnorm {
namespace {

Document Sample() {
  return ParseInline(
      "Sales fell <TIMEX3 type=\"DATE\" value=\"UNDEF-last-day\">yesterday</TIMEX3> "
      "and will recover <TIMEX3 type=\"DURATION\" value=\"P3W\">in three weeks"
      "</TIMEX3> .");
}

ModelConfig Micro() {
  ModelConfig c;
  c.layers = 1;
  c.hidden = 16;
  c.heads = 2;
  c.ff_dim = 24;
  c.max_seq = 16;
  c.seed = 2;
  return c;
}

TEST_CASE("examples carry BIO labels and window long documents") {
  Document doc = Sample();
  ModelVocabulary v = ModelVocabulary::Build({doc});
  auto ex = TaggerExamples(doc, v, 16, true);
  REQUIRE(ex.size() == 1);
  CHECK(ex[0].labels.front() == -1);
  CHECK(ex[0].labels.back() == -1);
  CHECK(ex[0].labels[3] == BioLabelIndex(BioTag::B(TimexType::kDate)));
  CHECK(ex[0].labels[7] == BioLabelIndex(BioTag::B(TimexType::kDuration)));
  CHECK(ex[0].labels[8] == BioLabelIndex(BioTag::I(TimexType::kDuration)));
  auto small = TaggerExamples(doc, v, 6, true);
  CHECK(small.size() == 3);
  CHECK(small[1].first_token == 4);
  CHECK(TaggerExamples(Document{}, v, 6, true).empty());
  CHECK_THROWS_AS(TaggerExamples(doc, v, 2, true), std::invalid_argument);
}

TEST_CASE("tagger gradient matches central differences") {
  Document doc = Sample();
  ModelConfig c = Micro();
  c.layers = 2;
  c.hidden = 8;
  c.ff_dim = 12;
  TaggerModel model = MakeTagger(c, ModelVocabulary::Build({doc}));
  TaggerExample ex = TaggerExamples(doc, model.vocab, 16, true)[0];
  std::vector<Matrix> grads = model.encoder.ZeroGradients();
  TaggerLossAndGradient(model.encoder, ex, 1.0, &grads);
  double worst = 0.0;
  for (size_t p = 0; p < model.encoder.params().size(); ++p) {
    Matrix &w = model.encoder.params()[p].value;
    Matrix numeric(w.rows(), w.cols());
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double orig = w.data()[i];
      w.data()[i] = orig + 1e-5;
      const double up = TaggerLossAndGradient(model.encoder, ex, 1.0, nullptr);
      w.data()[i] = orig - 1e-5;
      const double down = TaggerLossAndGradient(model.encoder, ex, 1.0, nullptr);
      w.data()[i] = orig;
      numeric.data()[i] = (up - down) / 2e-5;
    }
    worst = std::max(worst, testing::RelativeError(grads[p], numeric));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("tagger memorizes a single document") {
  Document doc = Sample();
  TaggerModel model = MakeTagger(Micro(), ModelVocabulary::Build({doc}));
  TaggerTrainOptions opt;
  opt.steps = 120;
  opt.batch_size = 1;
  opt.optimizer.learning_rate = 1e-2;
  std::vector<double> trace = TrainTagger(&model, {doc}, opt);
  CHECK(trace.back() < trace.front());
  CHECK(PredictBio(model, doc) == ToBio(doc));
  std::vector<TimexAnnotation> tagged = Tag(model, doc);
  CHECK(tagged == GoldBoundaries(doc));
}

TEST_CASE("training is deterministic") {
  Document doc = Sample();
  auto run = [&]() {
    TaggerModel model = MakeTagger(Micro(), ModelVocabulary::Build({doc}));
    TaggerTrainOptions opt;
    opt.steps = 5;
    return TrainTagger(&model, {doc}, opt);
  };
  CHECK(run() == run());
  TaggerModel model = MakeTagger(Micro(), ModelVocabulary::Build({doc}));
  CHECK_THROWS_AS(TrainTagger(&model, {}, {}), DataError);
}

TEST_CASE("tag output is sorted, disjoint and in bounds") {
  Document doc = Sample();
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    ModelConfig c = Micro();
    c.seed = seed;
    TaggerModel model = MakeTagger(c, ModelVocabulary::Build({doc}));
    std::vector<TimexAnnotation> out = Tag(model, doc);
    int prev_end = 0;
    for (const TimexAnnotation &a : out) {
      CHECK(a.start >= prev_end);
      CHECK(a.start < a.end);
      CHECK(a.end <= static_cast<int>(doc.tokens.size()));
      CHECK(a.value.empty());
      prev_end = a.end;
    }
  }
  TaggerModel model = MakeTagger(Micro(), ModelVocabulary::Build({doc}));
  CHECK(Tag(model, Document{}).empty());
}

TEST_CASE("gold boundaries strip values") {
  Document doc = Sample();
  std::vector<TimexAnnotation> gold = GoldBoundaries(doc);
  REQUIRE(gold.size() == 2);
  CHECK(gold[0].start == doc.annotations[0].start);
  CHECK(gold[1].end == doc.annotations[1].end);
  CHECK(gold[1].type == TimexType::kDuration);
  CHECK(gold[0].value.empty());
  CHECK(GoldBoundaries(Document{}).empty());
}

}  // namespace
}  // namespace tempnorm
