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

// Synthetic weakly-labelled corpora: template sentences in small
// pseudo-languages with generated temporal expressions and exact CIRs.

#ifndef TEMPNORM_WEAK_DATA_H_
#define TEMPNORM_WEAK_DATA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempnorm/document.h"

namespace tempnorm {

enum class Style { kNews, kNarrative };

std::string_view StyleName(Style style);
std::optional<Style> ParseStyle(std::string_view name);

// Share of explicit (already anchored) and relative expressions.
struct DomainMix {
  double explicit_fraction = 0.5;
  double relative_fraction = 0.5;

  static DomainMix ForStyle(Style style);
  void Validate() const;
};

// A temporal expression pattern. Placeholders in `surface` and `cir`:
// {D} day of month, {M} month, {Y} year, {N} count, {W} weekday,
// {S} season, {HM} clock time. Surface words are space separated.
struct TimexFrame {
  std::string surface;
  std::string cir;
  TimexType type = TimexType::kDate;
};

struct LanguageGrammar {
  std::string code;
  // Sentence patterns with one "{TE}" hole.
  std::vector<std::string> news_templates;
  std::vector<std::string> narrative_templates;
  std::vector<TimexFrame> frames;
  std::vector<std::string> months;    // 12 names, January first
  std::vector<std::string> weekdays;  // 7 names, Monday first
  std::vector<std::string> seasons;   // spring, summer, autumn, winter
  // Day-of-month surface form, "%d" replaced by the number.
  std::string day_format = "%d";
};

struct SyntheticGrammar {
  std::vector<LanguageGrammar> languages;

  // The English-like and German-like grammars, followed by derived
  // pseudo-languages when `count` exceeds two.
  static SyntheticGrammar Default(int count = 2);
  void Validate() const;
};

struct SynthOptions {
  Style style = Style::kNews;
  int docs = 100;
  uint64_t seed = 1;
  std::optional<DomainMix> mix;  // defaults to the style preset
  int min_sentences = 2;
  int max_sentences = 4;
  int first_year = 1990;
  int last_year = 2029;
};

// Deterministic under the seed. Documents cycle through the languages and
// carry a creation time between 2000 and 2024.
std::vector<Document> GenerateCorpus(const SyntheticGrammar &grammar,
                                     const SynthOptions &options);

// Explicit means the CIR is already a TimeML value (reference words,
// explicit dates, durations).
bool IsExplicitCir(std::string_view cir);

struct MixCounts {
  int explicit_count = 0;
  int relative_count = 0;
  double explicit_fraction() const;
};

MixCounts CountMix(const std::vector<Document> &docs);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Pearson test of independence on the 2x2 explicit/relative table.
ChiSquareResult ChiSquare(const MixCounts &a, const MixCounts &b);

}  // namespace tempnorm

#endif  // TEMPNORM_WEAK_DATA_H_
