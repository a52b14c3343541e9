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

#include "tempnorm/anchoring.h"

#include <algorithm>
#include <array>
#include <cctype>

#include "tempnorm/slot_codec.h"

namespace tempnorm {
namespace {

using S = SlotName;

constexpr std::array<std::string_view, 7> kWeekdayNames = {
    "monday", "tuesday", "wednesday", "thursday", "friday", "saturday",
    "sunday"};
constexpr std::array<std::string_view, 12> kMonthNames = {
    "january", "february", "march", "april", "may", "june", "july",
    "august", "september", "october", "november", "december"};

bool IsNumber(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isdigit(c);
         });
}

int ToInt(std::string_view s) { return std::stoi(std::string(s)); }

[[noreturn]] void Fail(std::string_view cir, std::string_view why) {
  throw AnchorError("cannot anchor '" + std::string(cir) + "': " +
                    std::string(why));
}

// 1-based ISO weekday index for a weekday name, 0 if none.
int WeekdayIndex(std::string_view name) {
  for (size_t i = 0; i < kWeekdayNames.size(); ++i) {
    if (kWeekdayNames[i] == name) return static_cast<int>(i) + 1;
  }
  return 0;
}

int MonthIndex(std::string_view name) {
  for (size_t i = 0; i < kMonthNames.size(); ++i) {
    if (kMonthNames[i] == name) return static_cast<int>(i) + 1;
  }
  return 0;
}

// First month of a season, quarter or half; 0 for anything else.
int SpecialMonth(std::string_view s) {
  if (s == "SP") return 3;
  if (s == "SU") return 6;
  if (s == "FA" || s == "AU") return 9;
  if (s == "WI") return 12;
  if (s == "Q1" || s == "H1") return 1;
  if (s == "Q2") return 4;
  if (s == "Q3" || s == "H2") return 7;
  if (s == "Q4") return 10;
  return 0;
}

// Year for a month-level value whose year was left open.
int TenseYear(int ref_year, int ref_month, int month, TenseHint tense) {
  if (tense == TenseHint::kPast && month > ref_month) return ref_year - 1;
  if (tense == TenseHint::kFuture && month < ref_month) return ref_year + 1;
  return ref_year;
}

int CheckedMonth(std::string_view cir, std::string_view s) {
  int m = ToInt(s);
  if (m < 1 || m > 12) Fail(cir, "month out of range");
  return m;
}

std::string DayField(std::string_view cir, int year, int month,
                     std::string_view s) {
  if (s == "X" || s == "XX") return "XX";
  if (!IsNumber(s)) Fail(cir, "bad day field");
  int d = ToInt(s);
  if (d < 1 || d > DaysInMonth(year, month)) Fail(cir, "day out of range");
  return Pad2(d);
}

std::string YearMonth(int year, int month) {
  return Pad4(year) + "-" + Pad2(month);
}

std::string Day(const CalendarDate &d) {
  return Pad4(d.year) + "-" + Pad2(d.month) + "-" + Pad2(d.day);
}

std::string IsoWeekString(const CalendarDate &d) {
  IsoWeek w = IsoWeekOf(d);
  return Pad4(w.year) + "-W" + Pad2(w.week);
}

// "T.." suffix from ST1..ST3, normalized to two-digit fields. Unknown
// minutes or seconds truncate the value at the last known field.
std::string TimeSuffix(const SlotSequence &s) {
  if (s.IsPad(S::kST1)) return "";
  const std::string &h = s[S::kST1];
  std::string out = "T" + (IsNumber(h) ? Pad2(ToInt(h)) : h);
  if (!IsNumber(h)) return out;
  for (S slot : {S::kST2, S::kST3}) {
    if (s.IsPad(slot) || !IsNumber(s[slot])) break;
    out += ":" + Pad2(ToInt(s[slot]));
  }
  return out;
}

CalendarDate DateOnly(const CalendarDate &d) {
  return CalendarDate{d.year, d.month, d.day};
}

// ----- Coarse relative values: UNDEF-year / decade / century -----

std::string AnchorCoarse(std::string_view cir, const SlotSequence &s,
                         const AnchorContext &ctx) {
  std::vector<std::string> parts;
  for (S slot : {S::kSD2, S::kSD3, S::kSD4}) {
    if (!s.IsPad(slot)) parts.push_back(s[slot]);
  }
  const CalendarDate &ref = ctx.reference;
  const std::string &kind = s[S::kSD1];
  std::string out;

  auto month_day = [&](int year, size_t first) {
    std::string tail;
    if (parts.size() > first + 2) Fail(cir, "too many fields");
    if (parts.size() <= first) return tail;
    const std::string &m = parts[first];
    if (SpecialMonth(m) != 0) {
      if (parts.size() > first + 1) Fail(cir, "field after a season");
      return "-" + m;
    }
    if (m == "X" || m == "XX") {
      tail = "-XX";
      if (parts.size() > first + 1) tail += "-" + DayField(cir, 2000, 1, parts[first + 1]);
      return tail;
    }
    if (!IsNumber(m)) Fail(cir, "bad month field");
    int month = CheckedMonth(cir, m);
    tail = "-" + Pad2(month);
    if (parts.size() > first + 1) {
      tail += "-" + DayField(cir, year, month, parts[first + 1]);
    }
    return tail;
  };

  if (kind == "year") {
    int year = ref.year;
    if (!parts.empty()) {
      int month = IsNumber(parts[0]) ? CheckedMonth(cir, parts[0])
                                     : SpecialMonth(parts[0]);
      if (month != 0) year = TenseYear(ref.year, ref.month, month, ctx.tense);
    }
    out = Pad4(year) + month_day(year, 0);
  } else if (kind == "century") {
    int century = ref.year / 100;
    if (parts.empty()) return Pad2(century);
    const std::string &yy = parts[0];
    if (yy == "X" || yy == "XX") {
      out = Pad2(century) + "XX" + month_day(2000, 1);
    } else {
      if (!IsNumber(yy)) Fail(cir, "bad year field");
      int year = century * 100 + ToInt(yy);
      if (ctx.tense == TenseHint::kPast && year > ref.year) year -= 100;
      if (ctx.tense == TenseHint::kFuture && year < ref.year) year += 100;
      out = Pad4(year) + month_day(year, 1);
    }
  } else if (kind == "decade") {
    int decade = ref.year / 10;
    if (parts.size() > 1) Fail(cir, "too many fields");
    if (parts.size() == 1) {
      if (parts[0].size() != 1 || !IsNumber(parts[0])) Fail(cir, "bad decade");
      decade = (ref.year / 100) * 10 + ToInt(parts[0]);
      if (ctx.tense == TenseHint::kPast && decade * 10 > ref.year) decade -= 10;
      if (ctx.tense == TenseHint::kFuture && decade * 10 + 9 < ref.year) {
        decade += 10;
      }
    }
    out = std::to_string(decade);
    if (out.size() < 3) out.insert(0, 3 - out.size(), '0');
  } else {
    Fail(cir, "unknown coarse unit");
  }
  std::string time = TimeSuffix(s);
  if (!time.empty()) {
    if (kind == "decade" || (kind == "century" && parts.empty())) {
      Fail(cir, "time on a coarse value");
    }
    out += time;
  }
  return out;
}

// ----- Relative values: UNDEF-this/next/last/REF... -----

int64_t ParseOffset(std::string_view cir, const SlotSequence &s) {
  if (s.IsPad(S::kSB)) return 0;
  std::string digits;
  for (S slot : {S::kSA1, S::kSA2, S::kSA3}) {
    if (!s.IsPad(slot)) digits += s[slot];
  }
  if (!IsNumber(digits)) Fail(cir, "bad offset");
  int64_t n = std::stoll(digits);
  const std::string &op = s[S::kSB];
  if (op == "PLUS") return n;
  if (op == "MINUS" || op == "LESS") return -n;
  Fail(cir, "unknown offset operator");
}

std::string AnchorRelative(std::string_view cir, const SlotSequence &s,
                           const AnchorContext &ctx) {
  const std::string &rel = s[S::kSD1];
  const bool is_ref = rel.rfind("REF", 0) == 0;
  CalendarDate base = is_ref && !ctx.previous_dates.empty()
                          ? ctx.previous_dates.back()
                          : ctx.reference;
  int rel_step = rel == "next" ? 1 : rel == "last" ? -1 : 0;
  int64_t op = ParseOffset(cir, s);
  int64_t k = rel_step + op;

  std::string unit = s.IsPad(S::kSD2) ? "" : s[S::kSD2];
  std::string name = s.IsPad(S::kSD3) ? "" : s[S::kSD3];
  std::string extra = s.IsPad(S::kSD4) ? "" : s[S::kSD4];
  if (!unit.empty() && SpecialMonth(unit) != 0) {
    if (!name.empty()) Fail(cir, "season followed by a field");
    name = unit;
    unit.clear();
  }
  const std::string time = TimeSuffix(s);
  bool day_level = false;
  std::string out;

  if (name.empty()) {
    if (!extra.empty()) Fail(cir, "day without a month");
    CalendarDate d = DateOnly(base);
    if (unit.empty() || unit == "day") {
      if (unit.empty() && time.empty()) Fail(cir, "no unit");
      out = Day(AddDays(d, k));
      day_level = true;
    } else if (unit == "week") {
      out = IsoWeekString(AddDays(d, 7 * k));
    } else if (unit == "weekend") {
      out = IsoWeekString(AddDays(d, 7 * k)) + "-WE";
    } else if (unit == "month") {
      CalendarDate m = AddMonths(CalendarDate{d.year, d.month, 1}, k);
      out = YearMonth(m.year, m.month);
    } else if (unit == "quarter") {
      CalendarDate q = AddMonths(CalendarDate{d.year, d.month, 1}, 3 * k);
      out = Pad4(q.year) + "-Q" + std::to_string((q.month - 1) / 3 + 1);
    } else if (unit == "year") {
      out = Pad4(AddYears(CalendarDate{d.year, 1, 1}, k).year);
    } else if (unit == "decade" || unit == "century") {
      int64_t span = unit == "decade" ? 10 : 100;
      int year = AddYears(CalendarDate{d.year, 1, 1}, span * k).year;
      out = std::to_string(year / span);
      size_t width = unit == "decade" ? 3 : 2;
      if (out.size() < width) out.insert(0, width - out.size(), '0');
    } else if (unit == "hour" || unit == "minute" || unit == "second") {
      if (!base.has_time()) Fail(cir, "reference has no time of day");
      if (!time.empty()) Fail(cir, "time on a clock unit");
      int64_t scale = unit == "hour" ? 3600 : unit == "minute" ? 60 : 1;
      CalendarDate t = base;
      if (!t.minute) t.minute = 0;
      if (unit == "second" && !t.second) t.second = 0;
      t = AddSeconds(t, scale * k);
      out = Day(t) + "T" + Pad2(*t.hour);
      if (unit != "hour") out += ":" + Pad2(*t.minute);
      if (unit == "second") out += ":" + Pad2(*t.second);
    } else {
      Fail(cir, "unknown unit");
    }
  } else if (int wd = WeekdayIndex(name); wd != 0) {
    if (!extra.empty()) Fail(cir, "field after a weekday");
    CalendarDate d = DateOnly(base);
    int current = static_cast<int>(WeekdayOf(d));
    CalendarDate target;
    if (unit == "week") {
      target = AddDays(IsoWeekStart(IsoWeekOf(AddDays(d, 7 * k))), wd - 1);
    } else if (unit.empty() || unit == "day") {
      if (rel == "next") {
        target = AddDays(d, (wd - current + 6) % 7 + 1);
      } else if (rel == "last") {
        target = AddDays(d, -((current - wd + 6) % 7 + 1));
      } else {
        target = AddDays(d, wd - current);
      }
      target = AddDays(target, 7 * op);
    } else {
      Fail(cir, "weekday with a non-week unit");
    }
    out = Day(target);
    day_level = true;
  } else if (int month = MonthIndex(name) != 0 ? MonthIndex(name)
                                               : SpecialMonth(name);
             month != 0) {
    const bool season = SpecialMonth(name) != 0;
    int year = base.year;
    if (unit == "year") {
      year = AddYears(CalendarDate{base.year, 1, 1}, k).year;
    } else if (unit.empty()) {
      if (rel == "next" && month <= base.month) ++year;
      if (rel == "last" && month >= base.month) --year;
      year = AddYears(CalendarDate{year, 1, 1}, op).year;
    } else {
      Fail(cir, "month name with a non-year unit");
    }
    if (season) {
      if (!extra.empty()) Fail(cir, "field after a season");
      out = Pad4(year) + "-" + name;
    } else {
      out = YearMonth(year, month);
      if (!extra.empty()) {
        out += "-" + DayField(cir, year, month, extra);
        day_level = true;
      }
    }
  } else if (IsNumber(name) || name == "XX") {
    if (unit == "year") {
      int year = AddYears(CalendarDate{base.year, 1, 1}, k).year;
      if (name == "XX") {
        out = Pad4(year) + "-XX";
        if (!extra.empty()) out += "-" + DayField(cir, 2000, 1, extra);
      } else {
        int month = CheckedMonth(cir, name);
        out = YearMonth(year, month);
        if (!extra.empty()) out += "-" + DayField(cir, year, month, extra);
      }
      day_level = !extra.empty();
    } else if (unit == "month") {
      if (!extra.empty()) Fail(cir, "too many fields");
      CalendarDate m = AddMonths(CalendarDate{base.year, base.month, 1}, k);
      out = YearMonth(m.year, m.month) + "-" +
            DayField(cir, m.year, m.month, name);
      day_level = true;
    } else {
      Fail(cir, "numeric field needs a year or month unit");
    }
  } else {
    Fail(cir, "unsupported field '" + name + "'");
  }

  if (!time.empty()) {
    if (!day_level) Fail(cir, "time on a value coarser than a day");
    out += time;
  }
  return out;
}

// ----- Function values: funcDateCalc(...) -----

std::string AnchorFunction(std::string_view cir, const SlotSequence &s,
                           const AnchorContext &ctx,
                           const AnchorOptions &options) {
  auto fn = ParseDateFunction(s[S::kSB]);
  if (!fn) Fail(cir, "unknown function");
  FunctionArgs args;
  if (!s.IsPad(S::kSD3)) args.month = ToInt(s[S::kSD3]);
  if (!s.IsPad(S::kSD4)) args.day = ToInt(s[S::kSD4]);
  if (!s.IsPad(S::kSA1)) {
    int v = ToInt(s[S::kSA1]);
    args.numbers.push_back(s[S::kST2] == "MINUS" ? -v : v);
  }
  if (!s.IsPad(S::kSA2)) {
    int v = ToInt(s[S::kSA2]);
    args.numbers.push_back(s[S::kST3] == "MINUS" ? -v : v);
  }
  if (!s.IsPad(S::kSA3)) args.flag = s[S::kSA3] == "true";

  const CalendarDate &ref = ctx.reference;
  const std::string &prefix = s[S::kSD1];
  const int declared_month = s.IsPad(S::kSD2) ? 0 : ToInt(s[S::kSD2]);
  CalendarDate result;
  if (prefix == "year") {
    result = FuncDateCalc(*fn, ref.year, args, options);
    int month = declared_month != 0 ? declared_month : result.month;
    int year = TenseYear(ref.year, ref.month, month, ctx.tense);
    if (year != ref.year) result = FuncDateCalc(*fn, year, args, options);
  } else if (prefix == "this") {
    result = FuncDateCalc(*fn, ref.year, args, options);
  } else if (prefix == "century") {
    int year = ToInt(s[S::kST1]) * 100 + ref.year % 100;
    result = FuncDateCalc(*fn, year, args, options);
  } else if (IsNumber(prefix) && IsNumber(s[S::kST1])) {
    result = FuncDateCalc(*fn, ToInt(prefix + s[S::kST1]), args, options);
  } else {
    Fail(cir, "bad year prefix");
  }
  return Day(result);
}

}  // namespace

std::string_view TenseHintName(TenseHint tense) {
  switch (tense) {
    case TenseHint::kPast: return "past";
    case TenseHint::kPresent: return "present";
    case TenseHint::kFuture: return "future";
    default: return "unknown";
  }
}

std::optional<TenseHint> ParseTenseHint(std::string_view name) {
  for (TenseHint t : {TenseHint::kUnknown, TenseHint::kPast,
                      TenseHint::kPresent, TenseHint::kFuture}) {
    if (TenseHintName(t) == name) return t;
  }
  return std::nullopt;
}

std::optional<DateFunction> ParseDateFunction(std::string_view name) {
  if (name == "EasterSunday") return DateFunction::kEasterSunday;
  if (name == "EasterSundayOrthodox") return DateFunction::kEasterSundayOrthodox;
  if (name == "ShroveTideOrthodox") return DateFunction::kShroveTideOrthodox;
  if (name == "WeekdayRelativeTo") return DateFunction::kWeekdayRelativeTo;
  return std::nullopt;
}

CalendarDate FuncDateCalc(DateFunction fn, int year, const FunctionArgs &args,
                          const AnchorOptions &options) {
  if (fn == DateFunction::kWeekdayRelativeTo) {
    if (!args.month || !args.day || args.numbers.size() != 2) {
      throw AnchorError("WeekdayRelativeTo needs YEAR-MM-DD, weekday, count");
    }
    CalendarDate base{year, *args.month, *args.day};
    if (!IsValid(base)) throw AnchorError("invalid WeekdayRelativeTo base");
    int weekday = args.numbers[0];
    int count = args.numbers[1];
    if (weekday < 1 || weekday > 7) throw AnchorError("weekday out of range");
    if (count == 0) throw AnchorError("WeekdayRelativeTo count of zero");
    // 1 = Sunday .. 7 = Saturday, mapped onto ISO numbering.
    int iso = weekday == 1 ? 7 : weekday - 1;
    int current = static_cast<int>(WeekdayOf(base));
    bool inclusive = args.flag.value_or(false);
    int64_t first;
    if (count > 0) {
      first = (iso - current + 7) % 7;
      if (first == 0 && !inclusive) first = 7;
      return AddDays(base, first + 7 * int64_t{count - 1});
    }
    first = (current - iso + 7) % 7;
    if (first == 0 && !inclusive) first = 7;
    return AddDays(base, -(first + 7 * int64_t{-count - 1}));
  }
  if (args.month || args.day || args.flag || args.numbers.size() > 1) {
    throw AnchorError("Easter functions take a single day offset");
  }
  int offset = args.numbers.empty() ? 0 : args.numbers[0];
  switch (fn) {
    case DateFunction::kEasterSunday:
      return AddDays(EasterSunday(year, EasterVariant::kGregorian), offset);
    case DateFunction::kEasterSundayOrthodox:
      return AddDays(EasterSunday(year, EasterVariant::kOrthodox), offset);
    default:
      return AddDays(EasterSunday(year, EasterVariant::kOrthodox),
                     options.shrovetide_offset + offset);
  }
}

std::string Anchor(std::string_view cir, const AnchorContext &ctx,
                   const AnchorOptions &options) {
  if (!IsValid(ctx.reference)) throw AnchorError("invalid reference date");
  EncodedCir enc;
  try {
    enc = EncodeCir(cir);
  } catch (const UnencodableCir &e) {
    throw AnchorError(e.what());
  }
  try {
    switch (enc.cir_class) {
      case CirClass::kReference:
      case CirClass::kExplicitDate:
      case CirClass::kDuration:
        return std::string(cir);
      case CirClass::kCoarseRelative:
        return AnchorCoarse(cir, enc.slots, ctx);
      case CirClass::kRelativeDate:
        return AnchorRelative(cir, enc.slots, ctx);
      case CirClass::kFunctionDate:
        return AnchorFunction(cir, enc.slots, ctx, options);
    }
  } catch (const CalendarError &e) {
    Fail(cir, e.what());
  }
  Fail(cir, "unknown class");
}

}  // namespace tempnorm
