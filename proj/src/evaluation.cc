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

#include "tempnorm/evaluation.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include "toml.hpp"

namespace tempnorm {
namespace {

// Indices of `anns` ordered by start, then end.
std::vector<int> StartOrder(const std::vector<TimexAnnotation> &anns) {
  std::vector<int> order(anns.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (anns[a].start != anns[b].start) return anns[a].start < anns[b].start;
    return anns[a].end < anns[b].end;
  });
  return order;
}

bool Overlaps(const TimexAnnotation &a, const TimexAnnotation &b) {
  return a.start < b.end && b.start < a.end;
}

double Mean(const std::vector<double> &xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

MetricAverages Average(const std::vector<const EvalReport *> &reports) {
  MetricAverages out;
  for (Metric m : kAllMetrics) {
    std::vector<double> p, r, f;
    for (const EvalReport *rep : reports) {
      Score s = rep->Get(m);
      p.push_back(s.precision);
      r.push_back(s.recall);
      f.push_back(s.f1);
    }
    out.scores[static_cast<int>(m)] = {Mean(p), Mean(r), Mean(f)};
  }
  return out;
}

nlohmann::ordered_json ScoreJson(const Score &s) {
  nlohmann::ordered_json j;
  j["precision"] = s.precision;
  j["recall"] = s.recall;
  j["f1"] = s.f1;
  return j;
}

nlohmann::ordered_json AverageJson(const MetricAverages &a) {
  nlohmann::ordered_json j;
  for (Metric m : kAllMetrics) j[std::string(MetricName(m))] = ScoreJson(a.Get(m));
  return j;
}

}  // namespace

std::string_view MetricName(Metric metric) {
  switch (metric) {
    case Metric::kStrict: return "strict";
    case Metric::kRelaxed: return "relaxed";
    case Metric::kType: return "type";
    case Metric::kValue: return "value";
  }
  return "unknown";
}

Score ScoreFromCounts(int matched, int gold, int pred) {
  Score s;
  s.precision = pred > 0 ? 100.0 * matched / pred : 0.0;
  s.recall = gold > 0 ? 100.0 * matched / gold : 0.0;
  const double sum = s.precision + s.recall;
  s.f1 = sum > 0.0 ? 2.0 * s.precision * s.recall / sum : 0.0;
  return s;
}

void EvalReport::Add(const EvalReport &other) {
  gold += other.gold;
  pred += other.pred;
  for (int m = 0; m < 4; ++m) matched[m] += other.matched[m];
}

DocumentMatches MatchAnnotations(const std::vector<TimexAnnotation> &gold,
                                 const std::vector<TimexAnnotation> &pred) {
  DocumentMatches out;
  const std::vector<int> gold_order = StartOrder(gold);
  const std::vector<int> pred_order = StartOrder(pred);
  std::vector<bool> strict_used(pred.size(), false);
  std::vector<bool> relaxed_used(pred.size(), false);
  for (int g : gold_order) {
    for (int p : pred_order) {
      if (!strict_used[p] && gold[g].start == pred[p].start && gold[g].end == pred[p].end) {
        strict_used[p] = true;
        out.strict.emplace_back(g, p);
        break;
      }
    }
    for (int p : pred_order) {
      if (!relaxed_used[p] && Overlaps(gold[g], pred[p])) {
        relaxed_used[p] = true;
        out.relaxed.emplace_back(g, p);
        break;
      }
    }
  }
  return out;
}

std::string CanonicalValue(std::string_view value) {
  size_t b = 0;
  size_t e = value.size();
  while (b < e && std::isspace(static_cast<unsigned char>(value[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(value[e - 1]))) --e;
  std::string out(value.substr(b, e - b));
  for (char &c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

EvalReport EvaluateDocument(const Document &gold, const Document &pred) {
  if (gold.id != pred.id) {
    throw DataError("document id mismatch: " + gold.id + " vs " + pred.id);
  }
  if (gold.tokens.size() != pred.tokens.size()) {
    throw DataError("token count mismatch in document " + gold.id);
  }
  EvalReport r;
  r.gold = static_cast<int>(gold.annotations.size());
  r.pred = static_cast<int>(pred.annotations.size());
  DocumentMatches m = MatchAnnotations(gold.annotations, pred.annotations);
  r.matched[static_cast<int>(Metric::kStrict)] = static_cast<int>(m.strict.size());
  r.matched[static_cast<int>(Metric::kRelaxed)] = static_cast<int>(m.relaxed.size());
  for (const auto &[g, p] : m.relaxed) {
    const TimexAnnotation &ga = gold.annotations[g];
    const TimexAnnotation &pa = pred.annotations[p];
    if (ga.type == pa.type) ++r.matched[static_cast<int>(Metric::kType)];
    const std::string pv = CanonicalValue(pa.value);
    if (!pv.empty() && pv == CanonicalValue(ga.value)) {
      ++r.matched[static_cast<int>(Metric::kValue)];
    }
  }
  return r;
}

namespace {

std::map<std::string, const Document *> IndexById(const std::vector<Document> &docs,
                                                  const char *side) {
  std::map<std::string, const Document *> index;
  for (const Document &d : docs) {
    if (!index.emplace(d.id, &d).second) {
      throw DataError(std::string("duplicate document id in ") + side + ": " + d.id);
    }
  }
  return index;
}

template <typename Fn>
void ForEachPair(const std::vector<Document> &gold, const std::vector<Document> &pred,
                 Fn fn) {
  IndexById(gold, "gold");
  std::map<std::string, const Document *> preds = IndexById(pred, "prediction");
  if (gold.size() != pred.size()) {
    throw DataError("gold and prediction document counts differ");
  }
  for (const Document &g : gold) {
    auto it = preds.find(g.id);
    if (it == preds.end()) throw DataError("no prediction for document " + g.id);
    fn(g, *it->second);
  }
}

}  // namespace

EvalReport Evaluate(const std::vector<Document> &gold, const std::vector<Document> &pred) {
  EvalReport total;
  ForEachPair(gold, pred, [&](const Document &g, const Document &p) {
    total.Add(EvaluateDocument(g, p));
  });
  return total;
}

std::map<std::string, EvalReport> EvaluateByLanguage(const std::vector<Document> &gold,
                                                     const std::vector<Document> &pred) {
  std::map<std::string, EvalReport> out;
  ForEachPair(gold, pred, [&](const Document &g, const Document &p) {
    out[g.lang].Add(EvaluateDocument(g, p));
  });
  return out;
}

GroupedAverages Aggregate(const std::map<std::string, EvalReport> &by_language,
                          const std::map<std::string, std::vector<std::string>> &groups) {
  if (by_language.empty()) throw DataError("no per-language reports to aggregate");
  GroupedAverages out;
  for (const auto &[name, langs] : groups) {
    if (langs.empty()) throw DataError("empty language group: " + name);
    std::vector<const EvalReport *> members;
    for (const std::string &lang : langs) {
      auto it = by_language.find(lang);
      if (it == by_language.end()) {
        throw DataError("group " + name + " names unknown language " + lang);
      }
      members.push_back(&it->second);
    }
    out.groups[name] = Average(members);
  }
  std::vector<const EvalReport *> all;
  for (const auto &[lang, rep] : by_language) all.push_back(&rep);
  out.overall = Average(all);
  return out;
}

std::map<std::string, std::vector<std::string>> ParseGroups(std::string_view text) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error &e) {
    throw DataError(std::string("groups file: ") + std::string(e.description()));
  }
  std::map<std::string, std::vector<std::string>> groups;
  for (const auto &[key, node] : table) {
    const toml::array *arr = node.as_array();
    if (!arr) throw DataError("group " + std::string(key.str()) + " is not a list");
    std::vector<std::string> &langs = groups[std::string(key.str())];
    for (const toml::node &item : *arr) {
      std::optional<std::string> s = item.value<std::string>();
      if (!s) throw DataError("group " + std::string(key.str()) + " has a non-string entry");
      langs.push_back(*s);
    }
  }
  return groups;
}

std::map<std::string, std::vector<std::string>> ReadGroupsFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open groups file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return ParseGroups(os.str());
}

nlohmann::ordered_json ReportToJson(const EvalReport &report) {
  nlohmann::ordered_json j;
  j["gold"] = report.gold;
  j["pred"] = report.pred;
  for (Metric m : kAllMetrics) {
    nlohmann::ordered_json s = ScoreJson(report.Get(m));
    s["matched"] = report.Matched(m);
    j[std::string(MetricName(m))] = s;
  }
  return j;
}

nlohmann::ordered_json AveragesToJson(const GroupedAverages &averages) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json groups = nlohmann::ordered_json::object();
  for (const auto &[name, avg] : averages.groups) groups[name] = AverageJson(avg);
  j["groups"] = groups;
  j["overall"] = AverageJson(averages.overall);
  return j;
}

}  // namespace tempnorm
