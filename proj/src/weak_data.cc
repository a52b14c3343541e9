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
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "tempnorm/slot_codec.h"

namespace tempnorm {
namespace {

constexpr const char *kEnglishMonths[] = {
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december"};
constexpr const char *kEnglishWeekdays[] = {
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};
constexpr const char *kSeasonCodes[] = {"SP", "SU", "FA", "WI"};

// Fractional part of the golden ratio; its multiples are equidistributed.
constexpr double kWeyl = 0.6180339887498949;

TimexFrame DateFrame(std::string s, std::string c) {
  return {std::move(s), std::move(c), TimexType::kDate};
}
TimexFrame TimeFrame(std::string s, std::string c) {
  return {std::move(s), std::move(c), TimexType::kTime};
}
TimexFrame DurationFrame(std::string s, std::string c) {
  return {std::move(s), std::move(c), TimexType::kDuration};
}
TimexFrame SetFrame(std::string s, std::string c) {
  return {std::move(s), std::move(c), TimexType::kSet};
}

std::string Easter(int offset) {
  return "UNDEF-year-00-00 funcDateCalc(EasterSunday(YEAR, " + std::to_string(offset) +
         "))";
}

std::string Weekday(const char *month_day, int weekday, int n) {
  return std::string("UNDEF-year-00-00 funcDateCalc(WeekdayRelativeTo(YEAR-") +
         month_day + ", " + std::to_string(weekday) + ", " + std::to_string(n) +
         ", true))";
}

LanguageGrammar English() {
  LanguageGrammar g;
  g.code = "en";
  g.months = {"January", "February", "March", "April", "May", "June", "July",
              "August", "September", "October", "November", "December"};
  g.weekdays = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday",
                "Saturday", "Sunday"};
  g.seasons = {"spring", "summer", "autumn", "winter"};
  g.news_templates = {
      "The ministry announced {TE} that fuel prices will rise .",
      "Officials said the talks resumed {TE} .",
      "Shares fell sharply {TE} , analysts said .",
      "The report was published {TE} by the central bank .",
      "{TE} , the council approved the new budget .",
      "Protesters gathered outside parliament {TE} .",
      "The company expects profits to recover {TE} .",
      "According to the agency , exports grew {TE} .",
  };
  g.narrative_templates = {
      "She walked home alone {TE} .",
      "We visited our grandmother {TE} .",
      "{TE} , the old man told us a story about the sea .",
      "I found the letter in the attic {TE} .",
      "They painted the kitchen blue {TE} .",
      "My brother learned to swim {TE} .",
      "The dog ran across the field {TE} .",
      "He promised to write to her {TE} .",
  };
  g.frames = {
      DateFrame("now", "PRESENT_REF"),
      DateFrame("currently", "PRESENT_REF"),
      DateFrame("recently", "PAST_REF"),
      DateFrame("in the past", "PAST_REF"),
      DateFrame("in the future", "FUTURE_REF"),
      DateFrame("{D} {M} {Y}", "{Y}-{M}-{D}"),
      DateFrame("{M} {D} , {Y}", "{Y}-{M}-{D}"),
      DateFrame("{M} {Y}", "{Y}-{M}"),
      DateFrame("{Y}", "{Y}"),
      DateFrame("{S} {Y}", "{Y}-{S}"),
      TimeFrame("{D} {M} {Y} at {HM}", "{Y}-{M}-{D}T{HM}"),
      DurationFrame("{N} days", "P{N}D"),
      DurationFrame("{N} weeks", "P{N}W"),
      DurationFrame("{N} months", "P{N}M"),
      DurationFrame("{N} years", "P{N}Y"),
      DurationFrame("{N} hours", "PT{N}H"),
      DurationFrame("several days", "PXD"),
      SetFrame("every day", "P1D"),
      SetFrame("every week", "P1W"),
      SetFrame("every year", "P1Y"),
      DateFrame("yesterday", "UNDEF-last-day"),
      DateFrame("today", "UNDEF-this-day"),
      DateFrame("tomorrow", "UNDEF-next-day"),
      DateFrame("next week", "UNDEF-next-week"),
      DateFrame("last week", "UNDEF-last-week"),
      DateFrame("this week", "UNDEF-this-week"),
      DateFrame("next month", "UNDEF-next-month"),
      DateFrame("last month", "UNDEF-last-month"),
      DateFrame("next year", "UNDEF-next-year"),
      DateFrame("last year", "UNDEF-last-year"),
      DateFrame("this weekend", "UNDEF-this-weekend"),
      DateFrame("{N} days ago", "UNDEF-this-day-MINUS-{N}"),
      DateFrame("in {N} days", "UNDEF-this-day-PLUS-{N}"),
      DateFrame("{N} weeks ago", "UNDEF-this-week-MINUS-{N}"),
      DateFrame("in {N} weeks", "UNDEF-this-week-PLUS-{N}"),
      DateFrame("{N} months ago", "UNDEF-this-month-MINUS-{N}"),
      DateFrame("{N} years ago", "UNDEF-this-year-MINUS-{N}"),
      DateFrame("last {W}", "UNDEF-last-{W}"),
      DateFrame("next {W}", "UNDEF-next-{W}"),
      DateFrame("on {W}", "UNDEF-this-{W}"),
      DateFrame("last {M}", "UNDEF-last-{MN}"),
      TimeFrame("tomorrow morning", "UNDEF-next-dayTMO"),
      TimeFrame("yesterday evening", "UNDEF-last-dayTEV"),
      DateFrame("{M}", "UNDEF-year-{M}"),
      DateFrame("{M} {D}", "UNDEF-year-{M}-{D}"),
      DateFrame("in {S}", "UNDEF-year-{S}"),
      DateFrame("Easter", Easter(0)),
      DateFrame("Good Friday", Easter(-2)),
      DateFrame("Easter Monday", Easter(1)),
      DateFrame("Ascension Day", Easter(39)),
      DateFrame("Whit Monday", Easter(50)),
      DateFrame("Mother 's Day", Weekday("05-01", 1, 2)),
      DateFrame("Thanksgiving", Weekday("11-01", 5, 4)),
      DateFrame("Easter {Y}", "{Y}-00-00 funcDateCalc(EasterSunday(YEAR, 0))"),
  };
  return g;
}

LanguageGrammar German() {
  LanguageGrammar g;
  g.code = "de";
  g.months = {"Januar", "Februar", "Maerz", "April", "Mai", "Juni", "Juli",
              "August", "September", "Oktober", "November", "Dezember"};
  g.weekdays = {"Montag", "Dienstag", "Mittwoch", "Donnerstag", "Freitag",
                "Samstag", "Sonntag"};
  g.seasons = {"Fruehling", "Sommer", "Herbst", "Winter"};
  g.day_format = "%d.";
  g.news_templates = {
      "Das Ministerium kuendigte {TE} hoehere Benzinpreise an .",
      "Die Verhandlungen wurden {TE} wieder aufgenommen , hiess es .",
      "Die Aktien fielen {TE} deutlich , sagten Analysten .",
      "Der Bericht wurde {TE} von der Zentralbank veroeffentlicht .",
      "{TE} hat der Rat den neuen Haushalt beschlossen .",
      "Demonstranten versammelten sich {TE} vor dem Parlament .",
      "Das Unternehmen erwartet {TE} eine Erholung der Gewinne .",
      "Laut der Behoerde stiegen die Exporte {TE} .",
  };
  g.narrative_templates = {
      "Sie ging {TE} allein nach Hause .",
      "Wir besuchten {TE} unsere Grossmutter .",
      "{TE} erzaehlte uns der alte Mann eine Geschichte vom Meer .",
      "Ich fand den Brief {TE} auf dem Dachboden .",
      "Sie strichen die Kueche {TE} blau .",
      "Mein Bruder lernte {TE} schwimmen .",
      "Der Hund rannte {TE} ueber das Feld .",
      "Er versprach , ihr {TE} zu schreiben .",
  };
  g.frames = {
      DateFrame("jetzt", "PRESENT_REF"),
      DateFrame("derzeit", "PRESENT_REF"),
      DateFrame("kuerzlich", "PAST_REF"),
      DateFrame("frueher", "PAST_REF"),
      DateFrame("in Zukunft", "FUTURE_REF"),
      DateFrame("{D} {M} {Y}", "{Y}-{M}-{D}"),
      DateFrame("am {D} {M} {Y}", "{Y}-{M}-{D}"),
      DateFrame("{M} {Y}", "{Y}-{M}"),
      DateFrame("{Y}", "{Y}"),
      DateFrame("{S} {Y}", "{Y}-{S}"),
      TimeFrame("{D} {M} {Y} um {HM} Uhr", "{Y}-{M}-{D}T{HM}"),
      DurationFrame("{N} Tage", "P{N}D"),
      DurationFrame("{N} Wochen", "P{N}W"),
      DurationFrame("{N} Monate", "P{N}M"),
      DurationFrame("{N} Jahre", "P{N}Y"),
      DurationFrame("{N} Stunden", "PT{N}H"),
      DurationFrame("einige Tage", "PXD"),
      SetFrame("jeden Tag", "P1D"),
      SetFrame("jede Woche", "P1W"),
      SetFrame("jedes Jahr", "P1Y"),
      DateFrame("gestern", "UNDEF-last-day"),
      DateFrame("heute", "UNDEF-this-day"),
      DateFrame("morgen", "UNDEF-next-day"),
      DateFrame("naechste Woche", "UNDEF-next-week"),
      DateFrame("letzte Woche", "UNDEF-last-week"),
      DateFrame("diese Woche", "UNDEF-this-week"),
      DateFrame("naechsten Monat", "UNDEF-next-month"),
      DateFrame("letzten Monat", "UNDEF-last-month"),
      DateFrame("naechstes Jahr", "UNDEF-next-year"),
      DateFrame("letztes Jahr", "UNDEF-last-year"),
      DateFrame("dieses Wochenende", "UNDEF-this-weekend"),
      DateFrame("vor {N} Tagen", "UNDEF-this-day-MINUS-{N}"),
      DateFrame("in {N} Tagen", "UNDEF-this-day-PLUS-{N}"),
      DateFrame("vor {N} Wochen", "UNDEF-this-week-MINUS-{N}"),
      DateFrame("in {N} Wochen", "UNDEF-this-week-PLUS-{N}"),
      DateFrame("vor {N} Monaten", "UNDEF-this-month-MINUS-{N}"),
      DateFrame("vor {N} Jahren", "UNDEF-this-year-MINUS-{N}"),
      DateFrame("letzten {W}", "UNDEF-last-{W}"),
      DateFrame("naechsten {W}", "UNDEF-next-{W}"),
      DateFrame("am {W}", "UNDEF-this-{W}"),
      DateFrame("letzten {M}", "UNDEF-last-{MN}"),
      TimeFrame("morgen frueh", "UNDEF-next-dayTMO"),
      TimeFrame("gestern Abend", "UNDEF-last-dayTEV"),
      DateFrame("im {M}", "UNDEF-year-{M}"),
      DateFrame("am {D} {M}", "UNDEF-year-{M}-{D}"),
      DateFrame("im {S}", "UNDEF-year-{S}"),
      DateFrame("Ostern", Easter(0)),
      DateFrame("Karfreitag", Easter(-2)),
      DateFrame("Ostermontag", Easter(1)),
      DateFrame("Christi Himmelfahrt", Easter(39)),
      DateFrame("Pfingstmontag", Easter(50)),
      DateFrame("Muttertag", Weekday("05-01", 1, 2)),
      DateFrame("Erntedankfest", Weekday("10-01", 1, 1)),
      DateFrame("Ostern {Y}", "{Y}-00-00 funcDateCalc(EasterSunday(YEAR, 0))"),
  };
  return g;
}

// Rotates vowels `shift` places so derived languages share structure but
// not vocabulary with their base.
std::string RotateVowels(const std::string &word, int shift) {
  static const std::string kLower = "aeiou";
  static const std::string kUpper = "AEIOU";
  std::string out = word;
  for (char &c : out) {
    size_t p = kLower.find(c);
    if (p != std::string::npos) {
      c = kLower[(p + shift) % 5];
      continue;
    }
    p = kUpper.find(c);
    if (p != std::string::npos) c = kUpper[(p + shift) % 5];
  }
  return out;
}

std::string RotateText(const std::string &text, int shift) {
  std::istringstream in(text);
  std::string word, out;
  while (in >> word) {
    if (!out.empty()) out += ' ';
    out += word.find('{') != std::string::npos ? word : RotateVowels(word, shift);
  }
  return out;
}

LanguageGrammar Derived(const LanguageGrammar &base, int index) {
  const int shift = 1 + (index - 2) / 2 % 4;
  LanguageGrammar g = base;
  g.code = base.code + std::to_string(index);
  for (auto *list : {&g.news_templates, &g.narrative_templates, &g.months,
                     &g.weekdays, &g.seasons}) {
    for (std::string &s : *list) s = RotateText(s, shift);
  }
  for (TimexFrame &f : g.frames) f.surface = RotateText(f.surface, shift);
  return g;
}

std::string Replace(std::string text, const std::string &key, const std::string &value) {
  for (size_t p = text.find(key); p != std::string::npos;
       p = text.find(key, p + value.size())) {
    text.replace(p, key.size(), value);
  }
  return text;
}

std::string TwoDigits(int v) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "%02d", v);
  return buf;
}

struct Filled {
  std::vector<std::string> tokens;
  std::string cir;
  TimexType type;
};

Filled Fill(const LanguageGrammar &g, const TimexFrame &frame,
            const SynthOptions &options, std::mt19937_64 &rng) {
  auto uniform = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const int day = uniform(1, 28);
  const int month = uniform(1, 12);
  const int year = uniform(options.first_year, options.last_year);
  const int count = uniform(2, 12);
  const int weekday = uniform(0, 6);
  const int season = uniform(0, 3);
  const std::string hm = TwoDigits(uniform(0, 23)) + ":" + TwoDigits(15 * uniform(0, 3));

  std::string day_surface = Replace(g.day_format, "%d", std::to_string(day));
  std::string surface = frame.surface;
  surface = Replace(surface, "{D}", day_surface);
  surface = Replace(surface, "{M}", g.months[month - 1]);
  surface = Replace(surface, "{Y}", std::to_string(year));
  surface = Replace(surface, "{N}", std::to_string(count));
  surface = Replace(surface, "{W}", g.weekdays[weekday]);
  surface = Replace(surface, "{S}", g.seasons[season]);
  surface = Replace(surface, "{HM}", hm);

  std::string cir = frame.cir;
  cir = Replace(cir, "{D}", TwoDigits(day));
  cir = Replace(cir, "{MN}", kEnglishMonths[month - 1]);
  cir = Replace(cir, "{M}", TwoDigits(month));
  cir = Replace(cir, "{Y}", std::to_string(year));
  cir = Replace(cir, "{N}", std::to_string(count));
  cir = Replace(cir, "{W}", kEnglishWeekdays[weekday]);
  cir = Replace(cir, "{S}", kSeasonCodes[season]);
  cir = Replace(cir, "{HM}", hm);

  Filled f;
  std::istringstream in(surface);
  for (std::string w; in >> w;) f.tokens.push_back(w);
  f.cir = std::move(cir);
  f.type = frame.type;
  return f;
}

uint64_t DocumentSeed(uint64_t seed, int index) {
  // splitmix64 of the pair.
  uint64_t z = seed * 0x9E3779B97F4A7C15ULL + static_cast<uint64_t>(index) + 1;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int FrameClass(const TimexFrame &f) {
  // Class index with placeholders filled by fixed sample values.
  std::string cir = f.cir;
  for (auto [k, v] : {std::pair{"{D}", "01"}, {"{MN}", "may"}, {"{M}", "05"},
                      {"{Y}", "2000"}, {"{N}", "3"}, {"{W}", "monday"},
                      {"{S}", "SU"}, {"{HM}", "10:00"}}) {
    cir = Replace(cir, k, v);
  }
  auto c = ClassifyCir(cir);
  if (!c) throw std::invalid_argument("frame CIR '" + f.cir + "' is not encodable");
  return static_cast<int>(*c);
}

}  // namespace

std::string_view StyleName(Style style) {
  return style == Style::kNews ? "news" : "narrative";
}

std::optional<Style> ParseStyle(std::string_view name) {
  if (name == "news") return Style::kNews;
  if (name == "narrative") return Style::kNarrative;
  return std::nullopt;
}

DomainMix DomainMix::ForStyle(Style style) {
  if (style == Style::kNews) return {0.671, 0.329};
  return {0.442, 0.558};
}

void DomainMix::Validate() const {
  if (explicit_fraction < 0.0 || relative_fraction < 0.0 ||
      std::abs(explicit_fraction + relative_fraction - 1.0) > 1e-9) {
    throw std::invalid_argument("domain mix fractions must be non-negative and sum to 1");
  }
}

SyntheticGrammar SyntheticGrammar::Default(int count) {
  if (count < 1) throw std::invalid_argument("at least one language is required");
  SyntheticGrammar g;
  const LanguageGrammar bases[] = {English(), German()};
  for (int i = 0; i < count; ++i) {
    g.languages.push_back(i < 2 ? bases[i] : Derived(bases[i % 2], i));
  }
  return g;
}

void SyntheticGrammar::Validate() const {
  if (languages.empty()) throw std::invalid_argument("grammar has no languages");
  for (const LanguageGrammar &l : languages) {
    if (l.news_templates.empty() || l.narrative_templates.empty()) {
      throw std::invalid_argument("language '" + l.code + "' has no templates");
    }
    if (l.months.size() != 12 || l.weekdays.size() != 7 || l.seasons.size() != 4) {
      throw std::invalid_argument("language '" + l.code + "' has an incomplete lexicon");
    }
    bool explicit_frame = false, relative_frame = false;
    for (const TimexFrame &f : l.frames) {
      (IsFullySpecified(static_cast<CirClass>(FrameClass(f))) ? explicit_frame
                                                               : relative_frame) = true;
    }
    if (!explicit_frame || !relative_frame) {
      throw std::invalid_argument("language '" + l.code +
                                  "' needs explicit and relative frames");
    }
  }
}

std::vector<Document> GenerateCorpus(const SyntheticGrammar &grammar,
                                     const SynthOptions &options) {
  grammar.Validate();
  if (options.docs < 1) throw std::invalid_argument("docs must be at least 1");
  if (options.min_sentences < 1 || options.max_sentences < options.min_sentences) {
    throw std::invalid_argument("invalid sentence range");
  }
  const DomainMix mix = options.mix.value_or(DomainMix::ForStyle(options.style));
  mix.Validate();

  // Frames grouped by split and class, per language.
  struct Groups {
    std::vector<std::vector<const TimexFrame *>> by_split[2];
  };
  std::vector<Groups> groups(grammar.languages.size());
  for (size_t l = 0; l < grammar.languages.size(); ++l) {
    std::vector<const TimexFrame *> by_class[6];
    for (const TimexFrame &f : grammar.languages[l].frames) {
      by_class[FrameClass(f)].push_back(&f);
    }
    for (int c = 0; c < 6; ++c) {
      if (by_class[c].empty()) continue;
      const int split = IsFullySpecified(static_cast<CirClass>(c)) ? 0 : 1;
      groups[l].by_split[split].push_back(by_class[c]);
    }
  }

  double weyl = std::fmod(static_cast<double>(options.seed % 1000003) * kWeyl, 1.0);
  std::vector<Document> docs;
  for (int i = 0; i < options.docs; ++i) {
    const size_t l = i % grammar.languages.size();
    const LanguageGrammar &lang = grammar.languages[l];
    std::mt19937_64 rng(DocumentSeed(options.seed, i));
    auto uniform = [&](int lo, int hi) {
      return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    Document doc;
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%s-%05d", std::string(StyleName(options.style)).c_str(),
                  lang.code.c_str(), i);
    doc.id = id;
    doc.lang = lang.code;
    doc.dct = CalendarDate{uniform(2000, 2024), uniform(1, 12), uniform(1, 28)};
    const auto &templates = options.style == Style::kNews ? lang.news_templates
                                                          : lang.narrative_templates;
    const int sentences = uniform(options.min_sentences, options.max_sentences);
    for (int s = 0; s < sentences; ++s) {
      weyl += kWeyl;
      weyl -= std::floor(weyl);
      const int split = weyl < mix.explicit_fraction ? 0 : 1;
      const auto &classes = groups[l].by_split[split];
      const auto &frames = classes[uniform(0, static_cast<int>(classes.size()) - 1)];
      const TimexFrame &frame = *frames[uniform(0, static_cast<int>(frames.size()) - 1)];
      Filled te = Fill(lang, frame, options, rng);
      std::istringstream in(templates[uniform(0, static_cast<int>(templates.size()) - 1)]);
      for (std::string w; in >> w;) {
        if (w == "{TE}") {
          TimexAnnotation a;
          a.start = static_cast<int>(doc.tokens.size());
          doc.tokens.insert(doc.tokens.end(), te.tokens.begin(), te.tokens.end());
          a.end = static_cast<int>(doc.tokens.size());
          a.type = te.type;
          a.value = te.cir;
          doc.annotations.push_back(std::move(a));
        } else {
          doc.tokens.push_back(w);
        }
      }
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

bool IsExplicitCir(std::string_view cir) {
  auto c = ClassifyCir(cir);
  return c && IsFullySpecified(*c);
}

double MixCounts::explicit_fraction() const {
  const int total = explicit_count + relative_count;
  return total ? static_cast<double>(explicit_count) / total : 0.0;
}

MixCounts CountMix(const std::vector<Document> &docs) {
  MixCounts m;
  for (const Document &d : docs) {
    for (const TimexAnnotation &a : d.annotations) {
      (IsExplicitCir(a.value) ? m.explicit_count : m.relative_count)++;
    }
  }
  return m;
}

ChiSquareResult ChiSquare(const MixCounts &a, const MixCounts &b) {
  const double obs[2][2] = {{static_cast<double>(a.explicit_count),
                             static_cast<double>(a.relative_count)},
                            {static_cast<double>(b.explicit_count),
                             static_cast<double>(b.relative_count)}};
  const double total = obs[0][0] + obs[0][1] + obs[1][0] + obs[1][1];
  ChiSquareResult r;
  if (total == 0.0) return r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double expected =
          (obs[i][0] + obs[i][1]) * (obs[0][j] + obs[1][j]) / total;
      if (expected > 0.0) {
        r.statistic += (obs[i][j] - expected) * (obs[i][j] - expected) / expected;
      }
    }
  }
  // Survival function of chi-square with one degree of freedom.
  r.p_value = std::erfc(std::sqrt(r.statistic / 2.0));
  return r;
}

}  // namespace tempnorm
