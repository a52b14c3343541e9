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

#include "tempnorm/slot_codec.h"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>

namespace tempnorm {

namespace {

using S = SlotName;

const char kUnits[] = "DE|DT|CE|WE|Qu|H|D|M|C|Y|W|Q|S";
const char kUnitNames[] =
    "weekend|week|day|month|year|decade|century|quarter|hour|minute|second";
const char kDaytimes[] = "NI|AF|MO|EV|MD|MI";
const char kSpecials[] = "SP|SU|FA|AU|WI|H1|H2|Q1|Q2|Q3|Q4|H|Q";
const char kNames[] =
    "monday|tuesday|wednesday|thursday|friday|saturday|sunday|"
    "january|february|march|april|may|june|july|august|september|october|"
    "november|december";

struct Patterns {
  std::regex d1, p1, d5, d3, d4, d2;
};

const Patterns &GetPatterns() {
  static const Patterns *patterns = [] {
    const std::string units = std::string("(") + kUnits + ")";
    const std::string unit_names = kUnitNames;
    const std::string daytime = kDaytimes;
    const std::string special = kSpecials;
    const std::string names = kNames;
    auto *p = new Patterns;
    auto compile = [](const std::string &body) {
      return std::regex("^" + body + "$", std::regex::ECMAScript |
                                              std::regex::optimize);
    };
    p->d1 = compile("(PRESENT|PAST|FUTURE)_REF");
    p->p1 = compile("(PT|P)(\\d\\d?|XX|X)(\\d\\d|\\.)?(\\d\\d?)?" + units +
                    "?(\\d\\d?)?" + units + "?");
    p->d5 = compile(
        "(UNDEF-year|UNDEF-this-year|UNDEF-century(\\d\\d)|(\\d\\d)(\\d\\d))"
        "-(\\d\\d)-00 funcDateCalc\\((WeekdayRelativeTo|EasterSundayOrthodox|"
        "EasterSunday|ShroveTideOrthodox)\\(YEAR(?:-(\\d\\d))?(?:-(\\d\\d))?"
        "(?:, (-?)(\\d\\d?))?(?:, (-?)(\\d\\d?))?(?:, (true|false))?\\)\\)");
    p->d3 = compile("UNDEF-(REFDATE|REFUNIT|REF|this|next|last)(?:-(" +
                    unit_names + "|" + special + "))?(?:-(" + names + "|" +
                    special + "|XX|\\d\\d?))?(?:-(\\d\\d?|XX))?"
                    "(?:-(PLUS|MINUS|LESS)-(\\d\\d?)(\\d\\d?)?(\\d\\d?)?)?"
                    "(?:T(\\d\\d?|XX|X|" + daytime + ")(?::(\\d\\d?|XX))?"
                    "(?::(\\d\\d|XX))?)?");
    p->d4 = compile("UNDEF-(year|decade|century)(?:-(\\d\\d?|X))?"
                    "(?:-(\\d\\d?|X))?(?:-(\\d\\d?|X|" + special + "))?"
                    "(?:T(\\d\\d?|X|" + daytime + ")(?::(\\d\\d?|XX))?"
                    "(?::(\\d\\d|XX))?)?");
    p->d2 = compile("(BC)?(\\d\\d?|XX)?(\\d\\d|XX)?(?:-(W)?(\\d\\d?|XX|" +
                    special + "))?(?:-(\\d\\d?|XX|WE))?(?:T(\\d\\d|XX|X|" +
                    daytime + ")(?::(\\d\\d))?(?::(\\d\\d))?)?");
    return p;
  }();
  return *patterns;
}

void Put(SlotSequence *slots, SlotName slot, const std::ssub_match &group) {
  if (group.matched && group.length() > 0) (*slots)[slot] = group.str();
}

bool Filled(const SlotSequence &s, SlotName slot) { return !s.IsPad(slot); }

std::string Opt(const SlotSequence &s, SlotName slot,
                std::string_view prefix = "") {
  if (s.IsPad(slot)) return "";
  return std::string(prefix) + s[slot];
}

std::string TimeSuffix(const SlotSequence &s, bool st3_is_time) {
  if (!Filled(s, S::kST1)) return "";
  std::string out = "T" + s[S::kST1] + Opt(s, S::kST2, ":");
  if (st3_is_time) out += Opt(s, S::kST3, ":");
  return out;
}

std::string DecodeReference(const SlotSequence &s) {
  return s[S::kSD1] + "_REF";
}

std::string DecodeDuration(const SlotSequence &s) {
  std::string out;
  for (SlotName slot : {S::kSB, S::kSD1, S::kSD2, S::kSD3, S::kSD4, S::kST1,
                        S::kST2}) {
    out += Opt(s, slot);
  }
  return out;
}

std::string DecodeExplicit(const SlotSequence &s) {
  const bool week = s[S::kST3] == "W";
  std::string out = Opt(s, S::kSB) + Opt(s, S::kSD1) + Opt(s, S::kSD2);
  if (Filled(s, S::kSD3)) out += "-" + std::string(week ? "W" : "") + s[S::kSD3];
  out += Opt(s, S::kSD4, "-");
  out += TimeSuffix(s, !week);
  return out;
}

std::string DecodeRelative(const SlotSequence &s) {
  std::string out = "UNDEF-" + s[S::kSD1] + Opt(s, S::kSD2, "-") +
                    Opt(s, S::kSD3, "-") + Opt(s, S::kSD4, "-");
  if (Filled(s, S::kSB)) {
    out += "-" + s[S::kSB] + "-" + Opt(s, S::kSA1) + Opt(s, S::kSA2) +
           Opt(s, S::kSA3);
  }
  return out + TimeSuffix(s, true);
}

std::string DecodeCoarse(const SlotSequence &s) {
  return "UNDEF-" + s[S::kSD1] + Opt(s, S::kSD2, "-") + Opt(s, S::kSD3, "-") +
         Opt(s, S::kSD4, "-") + TimeSuffix(s, true);
}

std::string DecodeFunction(const SlotSequence &s) {
  std::string prefix;
  const std::string &head = s[S::kSD1];
  if (head == "year") {
    prefix = "UNDEF-year";
  } else if (head == "this") {
    prefix = "UNDEF-this-year";
  } else if (head == "century") {
    prefix = "UNDEF-century" + Opt(s, S::kST1);
  } else {
    prefix = Opt(s, S::kSD1) + Opt(s, S::kST1);
  }
  std::string out = prefix + "-" +
                    (Filled(s, S::kSD2) ? s[S::kSD2] : std::string("00")) +
                    "-00 funcDateCalc(" + s[S::kSB] + "(YEAR" +
                    Opt(s, S::kSD3, "-") + Opt(s, S::kSD4, "-");
  if (Filled(s, S::kSA1)) {
    out += std::string(", ") + (s[S::kST2] == "MINUS" ? "-" : "") + s[S::kSA1];
  }
  if (Filled(s, S::kSA2)) {
    out += std::string(", ") + (s[S::kST3] == "MINUS" ? "-" : "") + s[S::kSA2];
  }
  out += Opt(s, S::kSA3, ", ");
  return out + "))";
}

bool IsFunctionName(std::string_view t) {
  return t == "EasterSunday" || t == "EasterSundayOrthodox" ||
         t == "ShroveTideOrthodox" || t == "WeekdayRelativeTo";
}

CirClass InferClass(const SlotSequence &s) {
  const std::string &sb = s[S::kSB];
  const std::string &sd1 = s[S::kSD1];
  if (sb == "P" || sb == "PT") return CirClass::kDuration;
  if (sd1 == "PRESENT" || sd1 == "PAST" || sd1 == "FUTURE") {
    return CirClass::kReference;
  }
  if (IsFunctionName(sb)) return CirClass::kFunctionDate;
  if (sd1 == "this" || sd1 == "next" || sd1 == "last" || sd1 == "REF" ||
      sd1 == "REFUNIT" || sd1 == "REFDATE") {
    return CirClass::kRelativeDate;
  }
  if (sd1 == "year" || sd1 == "decade" || sd1 == "century") {
    return CirClass::kCoarseRelative;
  }
  return CirClass::kExplicitDate;
}

std::vector<std::string> Split(std::string_view alternatives) {
  std::vector<std::string> out;
  size_t begin = 0;
  while (begin <= alternatives.size()) {
    size_t bar = alternatives.find('|', begin);
    if (bar == std::string_view::npos) bar = alternatives.size();
    out.emplace_back(alternatives.substr(begin, bar - begin));
    begin = bar + 1;
  }
  return out;
}

}  // namespace

std::string_view SlotNameString(SlotName slot) {
  static constexpr std::string_view kNamesTable[] = {
      "SB", "SD1", "SD2", "SD3", "SD4", "ST1", "ST2", "ST3", "SA1", "SA2",
      "SA3"};
  return kNamesTable[static_cast<int>(slot)];
}

bool SlotSequence::AllPad() const {
  return std::all_of(values.begin(), values.end(),
                     [](const std::string &v) { return v == kPadToken; });
}

std::string SlotSequence::ToString() const {
  std::string out;
  for (int i = 0; i < kNumSlots; ++i) {
    if (values[i] == kPadToken) continue;
    if (!out.empty()) out += ' ';
    out += std::string(SlotNameString(static_cast<SlotName>(i))) + "=" +
           values[i];
  }
  return out;
}

std::string_view CirClassName(CirClass c) {
  switch (c) {
    case CirClass::kReference: return "D1";
    case CirClass::kExplicitDate: return "D2";
    case CirClass::kDuration: return "P1";
    case CirClass::kRelativeDate: return "D3";
    case CirClass::kCoarseRelative: return "D4";
    case CirClass::kFunctionDate: return "D5";
  }
  return "D2";
}

bool IsFullySpecified(CirClass c) {
  return c == CirClass::kReference || c == CirClass::kExplicitDate ||
         c == CirClass::kDuration;
}

UnencodableCir::UnencodableCir(std::string cir)
    : DataError("no CIR pattern matches '" + cir + "'"), cir_(std::move(cir)) {}

EncodedCir EncodeCir(std::string_view cir_view) {
  const Patterns &p = GetPatterns();
  const std::string cir(cir_view);
  EncodedCir out;
  SlotSequence &s = out.slots;
  std::smatch m;
  if (cir.empty()) throw UnencodableCir(cir);

  if (std::regex_match(cir, m, p.d1)) {
    out.cir_class = CirClass::kReference;
    Put(&s, S::kSD1, m[1]);
    return out;
  }
  if (std::regex_match(cir, m, p.p1)) {
    out.cir_class = CirClass::kDuration;
    Put(&s, S::kSB, m[1]);
    Put(&s, S::kSD1, m[2]);
    Put(&s, S::kSD2, m[3]);
    Put(&s, S::kSD3, m[4]);
    Put(&s, S::kSD4, m[5]);
    Put(&s, S::kST1, m[6]);
    Put(&s, S::kST2, m[7]);
    return out;
  }
  if (std::regex_match(cir, m, p.d5)) {
    out.cir_class = CirClass::kFunctionDate;
    const std::string prefix = m[1].str();
    if (prefix == "UNDEF-year") {
      s[S::kSD1] = "year";
    } else if (prefix == "UNDEF-this-year") {
      s[S::kSD1] = "this";
    } else if (m[2].matched) {
      s[S::kSD1] = "century";
      Put(&s, S::kST1, m[2]);
    } else {
      Put(&s, S::kSD1, m[3]);
      Put(&s, S::kST1, m[4]);
    }
    Put(&s, S::kSD2, m[5]);
    Put(&s, S::kSB, m[6]);
    Put(&s, S::kSD3, m[7]);
    Put(&s, S::kSD4, m[8]);
    Put(&s, S::kSA1, m[10]);
    if (m[9].length() > 0) s[S::kST2] = "MINUS";
    Put(&s, S::kSA2, m[12]);
    if (m[11].length() > 0) s[S::kST3] = "MINUS";
    Put(&s, S::kSA3, m[13]);
    return out;
  }
  if (std::regex_match(cir, m, p.d3)) {
    out.cir_class = CirClass::kRelativeDate;
    Put(&s, S::kSD1, m[1]);
    Put(&s, S::kSD2, m[2]);
    Put(&s, S::kSD3, m[3]);
    Put(&s, S::kSD4, m[4]);
    Put(&s, S::kSB, m[5]);
    Put(&s, S::kSA1, m[6]);
    Put(&s, S::kSA2, m[7]);
    Put(&s, S::kSA3, m[8]);
    Put(&s, S::kST1, m[9]);
    Put(&s, S::kST2, m[10]);
    Put(&s, S::kST3, m[11]);
    return out;
  }
  if (std::regex_match(cir, m, p.d4)) {
    out.cir_class = CirClass::kCoarseRelative;
    Put(&s, S::kSD1, m[1]);
    // One trailing part is the month-like field (SD2); a pair is
    // month/day (SD3, SD4); three parts fill SD2..SD4.
    std::vector<const std::ssub_match *> parts;
    for (int g = 2; g <= 4; ++g) {
      if (m[g].matched) parts.push_back(&m[g]);
    }
    if (parts.size() == 1) {
      Put(&s, S::kSD2, *parts[0]);
    } else if (parts.size() == 2) {
      Put(&s, S::kSD3, *parts[0]);
      Put(&s, S::kSD4, *parts[1]);
    } else if (parts.size() == 3) {
      Put(&s, S::kSD2, *parts[0]);
      Put(&s, S::kSD3, *parts[1]);
      Put(&s, S::kSD4, *parts[2]);
    }
    Put(&s, S::kST1, m[5]);
    Put(&s, S::kST2, m[6]);
    Put(&s, S::kST3, m[7]);
    return out;
  }
  if (std::regex_match(cir, m, p.d2)) {
    // A week marker and seconds compete for ST3.
    if (m[4].matched && m[9].matched) throw UnencodableCir(cir);
    out.cir_class = CirClass::kExplicitDate;
    Put(&s, S::kSB, m[1]);
    Put(&s, S::kSD1, m[2]);
    Put(&s, S::kSD2, m[3]);
    Put(&s, S::kSD3, m[5]);
    Put(&s, S::kSD4, m[6]);
    Put(&s, S::kST1, m[7]);
    Put(&s, S::kST2, m[8]);
    Put(&s, S::kST3, m[9]);
    Put(&s, S::kST3, m[4]);
    return out;
  }
  throw UnencodableCir(cir);
}

std::optional<CirClass> ClassifyCir(std::string_view cir) {
  try {
    return EncodeCir(cir).cir_class;
  } catch (const UnencodableCir &) {
    return std::nullopt;
  }
}

DecodedCir DecodeSlots(const SlotSequence &slots) {
  if (slots.AllPad()) throw EmptySlots();
  DecodedCir out;
  out.cir_class = InferClass(slots);
  switch (out.cir_class) {
    case CirClass::kReference: out.cir = DecodeReference(slots); break;
    case CirClass::kDuration: out.cir = DecodeDuration(slots); break;
    case CirClass::kFunctionDate: out.cir = DecodeFunction(slots); break;
    case CirClass::kRelativeDate: out.cir = DecodeRelative(slots); break;
    case CirClass::kCoarseRelative: out.cir = DecodeCoarse(slots); break;
    case CirClass::kExplicitDate: out.cir = DecodeExplicit(slots); break;
  }
  try {
    EncodedCir again = EncodeCir(out.cir);
    out.canonical = again.slots == slots && again.cir_class == out.cir_class;
  } catch (const UnencodableCir &) {
    out.canonical = false;
  }
  return out;
}

VocabularyOverflow::VocabularyOverflow(size_t cap,
                                       std::vector<std::string> overflow)
    : DataError([&] {
        std::string msg = "slot vocabulary exceeds cap of " +
                          std::to_string(cap) + " tokens; overflow:";
        for (const std::string &t : overflow) msg += " " + t;
        return msg;
      }()),
      overflow_(std::move(overflow)) {}

const SlotVocabulary &SlotVocabulary::Baseline() {
  static const SlotVocabulary *baseline = [] {
    std::vector<std::vector<std::string>> classes = {
        {std::string(kPadToken)},
        Split(kUnits),
        Split(kUnitNames),
        Split(kDaytimes),
        Split(kSpecials),
        Split(kNames),
        {"this", "next", "last", "year", "decade", "century", "REF",
         "REFUNIT", "REFDATE", "PRESENT", "PAST", "FUTURE"},
        {"PLUS", "MINUS", "LESS", "P", "PT", "BC", "X", "XX", "."},
        {"EasterSunday", "EasterSundayOrthodox", "ShroveTideOrthodox",
         "WeekdayRelativeTo", "true", "false"},
    };
    std::vector<std::string> numerals;
    for (int i = 0; i < 10; ++i) numerals.push_back(std::to_string(i));
    for (int i = 0; i < 100; ++i) numerals.push_back(Pad2(i));
    classes.push_back(numerals);

    std::vector<std::string> tokens;
    std::set<std::string> seen;
    for (auto &cls : classes) {
      std::sort(cls.begin(), cls.end());
      for (const std::string &t : cls) {
        if (seen.insert(t).second) tokens.push_back(t);
      }
    }
    return new SlotVocabulary(FromTokens(std::move(tokens)));
  }();
  return *baseline;
}

SlotVocabulary SlotVocabulary::FromTokens(std::vector<std::string> tokens) {
  SlotVocabulary vocab;
  vocab.tokens_ = std::move(tokens);
  for (size_t i = 0; i < vocab.tokens_.size(); ++i) {
    if (!vocab.ids_.emplace(vocab.tokens_[i], static_cast<int>(i)).second) {
      throw DataError("duplicate slot token '" + vocab.tokens_[i] + "'");
    }
  }
  if (vocab.tokens_.empty() || vocab.tokens_[0] != kPadToken) {
    throw DataError("slot vocabulary must start with " +
                    std::string(kPadToken));
  }
  return vocab;
}

SlotVocabulary SlotVocabulary::Build(const std::vector<SlotSequence> &corpus,
                                     size_t cap) {
  const SlotVocabulary &base = Baseline();
  std::set<std::string> extras;
  for (const SlotSequence &seq : corpus) {
    for (const std::string &t : seq.values) {
      if (!base.contains(t)) extras.insert(t);
    }
  }
  std::vector<std::string> tokens = base.tokens();
  tokens.insert(tokens.end(), extras.begin(), extras.end());
  if (tokens.size() > cap) {
    std::vector<std::string> overflow(tokens.begin() + cap, tokens.end());
    throw VocabularyOverflow(cap, std::move(overflow));
  }
  return FromTokens(std::move(tokens));
}

SlotVocabulary SlotVocabulary::Load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  return FromTokens(std::move(tokens));
}

void SlotVocabulary::Save(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write vocabulary '" + path + "'");
  for (const std::string &t : tokens_) out << t << '\n';
}

std::optional<int> SlotVocabulary::id(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

}  // namespace tempnorm
