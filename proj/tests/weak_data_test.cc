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

#include "tempnorm/weak_data.h"

#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "tempnorm/anchoring.h"
#include "tempnorm/slot_codec.h"
#include "tempnorm/timeml.h"

namespace tempnorm {
namespace {

std::vector<Document> Corpus(Style style, int docs, int languages = 2,
                             uint64_t seed = 7) {
  SynthOptions o;
  o.style = style;
  o.docs = docs;
  o.seed = seed;
  return GenerateCorpus(SyntheticGrammar::Default(languages), o);
}

TEST_CASE("style presets") {
  CHECK(DomainMix::ForStyle(Style::kNews).explicit_fraction == doctest::Approx(0.671));
  CHECK(DomainMix::ForStyle(Style::kNarrative).relative_fraction ==
        doctest::Approx(0.558));
  CHECK(ParseStyle("news") == Style::kNews);
  CHECK(ParseStyle(StyleName(Style::kNarrative)) == Style::kNarrative);
  CHECK_FALSE(ParseStyle("poetry"));
  CHECK_THROWS_AS((DomainMix{0.6, 0.6}.Validate()), std::invalid_argument);
}

TEST_CASE("news mix in the German-like language") {
  std::vector<Document> docs = Corpus(Style::kNews, 2000);
  std::vector<Document> de;
  for (const Document &d : docs) {
    if (d.lang == "de") de.push_back(d);
  }
  CHECK(de.size() == 1000);
  CHECK(std::abs(CountMix(de).explicit_fraction() - 0.671) <= 0.02);
  CHECK(std::abs(CountMix(docs).explicit_fraction() - 0.671) <= 0.02);
}

TEST_CASE("narrative mix in the English-like language") {
  std::vector<Document> docs = Corpus(Style::kNarrative, 2000);
  std::vector<Document> en;
  for (const Document &d : docs) {
    if (d.lang == "en") en.push_back(d);
  }
  MixCounts m = CountMix(en);
  CHECK(std::abs(1.0 - m.explicit_fraction() - 0.558) <= 0.02);
}

TEST_CASE("presets are distinguishable") {
  ChiSquareResult r = ChiSquare(CountMix(Corpus(Style::kNews, 1000)),
                                CountMix(Corpus(Style::kNarrative, 1000, 2, 8)));
  CHECK(r.p_value < 0.01);
  ChiSquareResult same = ChiSquare({50, 50}, {50, 50});
  CHECK(same.statistic == doctest::Approx(0.0));
  CHECK(same.p_value == doctest::Approx(1.0));
}

TEST_CASE("chi-square against a hand computed table") {
  // Table [[30, 10], [10, 30]]: every expected count is 20, so the statistic
  // is 4 * 100 / 20 = 20 and p = erfc(sqrt(10)).
  ChiSquareResult r = ChiSquare({30, 10}, {10, 30});
  CHECK(r.statistic == doctest::Approx(20.0));
  CHECK(r.p_value == doctest::Approx(7.744e-6).epsilon(1e-3));
}

TEST_CASE("every generated value is encodable, round-trips and anchors") {
  for (Style style : {Style::kNews, Style::kNarrative}) {
    std::vector<Document> docs = Corpus(style, 400, 3);
    std::set<std::string> classes;
    for (const Document &d : docs) {
      CHECK_NOTHROW(ValidateDocument(d));
      REQUIRE(d.dct);
      for (const TimexAnnotation &a : d.annotations) {
        EncodedCir e = EncodeCir(a.value);
        CHECK(DecodeSlots(e.slots).cir == a.value);
        classes.insert(std::string(CirClassName(e.cir_class)));
        AnchorContext ctx;
        ctx.reference = *d.dct;
        CHECK_NOTHROW(Anchor(a.value, ctx));
      }
    }
    CHECK(classes.size() == 6);
  }
}

TEST_CASE("surface forms map to a single value") {
  std::map<std::string, std::set<std::string>> values;
  for (const Document &d : Corpus(Style::kNews, 1500)) {
    for (const TimexAnnotation &a : d.annotations) {
      std::string surface;
      for (int i = a.start; i < a.end; ++i) surface += d.tokens[i] + " ";
      values[surface].insert(a.value);
    }
  }
  for (const auto &[surface, set] : values) {
    INFO(surface);
    CHECK(set.size() == 1);
  }
}

TEST_CASE("deterministic under the seed") {
  CHECK(Corpus(Style::kNews, 50) == Corpus(Style::kNews, 50));
  CHECK(Corpus(Style::kNews, 50) != Corpus(Style::kNews, 50, 2, 8));
  std::vector<Document> one = Corpus(Style::kNarrative, 1);
  REQUIRE(one.size() == 1);
  CHECK_FALSE(one[0].annotations.empty());
  CHECK_NOTHROW(ValidateDocument(one[0]));
}

TEST_CASE("languages cycle and derived languages have their own words") {
  std::vector<Document> docs = Corpus(Style::kNews, 8, 4);
  CHECK(docs[0].lang == "en");
  CHECK(docs[1].lang == "de");
  CHECK(docs[2].lang == "en2");
  CHECK(docs[3].lang == "de3");
  CHECK(docs[4].lang == "en");
  SyntheticGrammar g = SyntheticGrammar::Default(4);
  CHECK(g.languages[2].months[0] != g.languages[0].months[0]);
  CHECK(g.languages[2].frames.size() == g.languages[0].frames.size());
}

TEST_CASE("invalid inputs") {
  SyntheticGrammar g = SyntheticGrammar::Default(1);
  g.languages[0].news_templates.clear();
  CHECK_THROWS_AS(GenerateCorpus(g, {}), std::invalid_argument);
  SynthOptions o;
  o.docs = 0;
  CHECK_THROWS_AS(GenerateCorpus(SyntheticGrammar::Default(), o), std::invalid_argument);
  CHECK_THROWS_AS(SyntheticGrammar::Default(0), std::invalid_argument);
  SyntheticGrammar broken = SyntheticGrammar::Default(1);
  broken.languages[0].frames.push_back({"x", "not a value", TimexType::kDate});
  CHECK_THROWS_AS(broken.Validate(), std::invalid_argument);
}

TEST_CASE("explicit classification") {
  CHECK(IsExplicitCir("2019-03-12"));
  CHECK(IsExplicitCir("P3D"));
  CHECK(IsExplicitCir("PAST_REF"));
  CHECK_FALSE(IsExplicitCir("UNDEF-last-day"));
  CHECK_FALSE(IsExplicitCir("UNDEF-year-05"));
  CHECK_FALSE(IsExplicitCir("garbage"));
}

}  // namespace
}  // namespace tempnorm
