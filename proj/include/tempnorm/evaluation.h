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

// TempEval-style scoring of extracted and normalized temporal expressions.
//
// strict:  exact span match.
// relaxed: token overlap, matched one-to-one greedily in gold order; among
//          the free overlapping predictions the earliest start wins.
// type:    relaxed match with equal type.
// value:   relaxed match with equal value after trimming and uppercasing.

#ifndef TEMPNORM_EVALUATION_H_
#define TEMPNORM_EVALUATION_H_

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tempnorm/document.h"

namespace tempnorm {

enum class Metric { kStrict, kRelaxed, kType, kValue };

inline constexpr Metric kAllMetrics[] = {Metric::kStrict, Metric::kRelaxed,
                                         Metric::kType, Metric::kValue};

std::string_view MetricName(Metric metric);

// Percentages in [0, 100]; f1 is 0 when precision + recall is 0.
struct Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

Score ScoreFromCounts(int matched, int gold, int pred);

struct EvalReport {
  int gold = 0;
  int pred = 0;
  // Matched counts per metric, indexed by Metric.
  int matched[4] = {0, 0, 0, 0};

  int Matched(Metric m) const { return matched[static_cast<int>(m)]; }
  Score Get(Metric m) const { return ScoreFromCounts(Matched(m), gold, pred); }
  void Add(const EvalReport &other);
};

// Gold/pred index pairs of one document.
struct DocumentMatches {
  std::vector<std::pair<int, int>> strict;
  std::vector<std::pair<int, int>> relaxed;
};

DocumentMatches MatchAnnotations(const std::vector<TimexAnnotation> &gold,
                                 const std::vector<TimexAnnotation> &pred);

std::string CanonicalValue(std::string_view value);

EvalReport EvaluateDocument(const Document &gold, const Document &pred);

// Micro-averaged over documents. Documents are paired by id; every id must
// occur once on each side with the same token count.
EvalReport Evaluate(const std::vector<Document> &gold,
                    const std::vector<Document> &pred);

// One report per language tag of the gold documents.
std::map<std::string, EvalReport> EvaluateByLanguage(
    const std::vector<Document> &gold, const std::vector<Document> &pred);

// Unweighted means of the per-language scores.
struct MetricAverages {
  Score scores[4];

  const Score &Get(Metric m) const { return scores[static_cast<int>(m)]; }
};

struct GroupedAverages {
  std::map<std::string, MetricAverages> groups;
  MetricAverages overall;
};

// Group names map to language lists. Every group must be non-empty and
// every listed language must have a report.
GroupedAverages Aggregate(const std::map<std::string, EvalReport> &by_language,
                          const std::map<std::string, std::vector<std::string>> &groups);

std::map<std::string, std::vector<std::string>> ParseGroups(std::string_view toml);
std::map<std::string, std::vector<std::string>> ReadGroupsFile(const std::string &path);

nlohmann::ordered_json ReportToJson(const EvalReport &report);
nlohmann::ordered_json AveragesToJson(const GroupedAverages &averages);

}  // namespace tempnorm

#endif  // TEMPNORM_EVALUATION_H_
