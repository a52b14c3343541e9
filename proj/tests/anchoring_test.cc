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

#include <random>

#include "doctest.h"
#include "support/cir_grammar.h"
#include "support/fixtures.h"
#include "tempnorm/anchoring.h"
#include "tempnorm/slot_codec.h"

using namespace tempnorm;

namespace {

AnchorContext At(const char *date, TenseHint tense = TenseHint::kUnknown) {
  AnchorContext ctx;
  ctx.reference = ParseDate(date);
  ctx.tense = tense;
  return ctx;
}

// Steps one calendar day at a time; independent of the day-count code.
CalendarDate StepDays(CalendarDate d, int n) {
  for (; n > 0; --n) {
    if (++d.day > DaysInMonth(d.year, d.month)) {
      d.day = 1;
      if (++d.month > 12) {
        d.month = 1;
        ++d.year;
      }
    }
  }
  for (; n < 0; ++n) {
    if (--d.day < 1) {
      if (--d.month < 1) {
        d.month = 12;
        --d.year;
      }
      d.day = DaysInMonth(d.year, d.month);
    }
  }
  return d;
}

bool FullySpecified(const std::string &value) {
  auto cls = ClassifyCir(value);
  return cls && IsFullySpecified(*cls);
}

}  // namespace

TEST_CASE("documented anchoring examples") {
  CHECK(Anchor("UNDEF-last-day", At("2022-05-01")) == "2022-04-30");
  CHECK(Anchor("UNDEF-year-05", At("2022-08-10")) == "2022-05");
  CHECK(Anchor("2022-03-15", At("1999-01-01")) == "2022-03-15");
  CHECK(Anchor("UNDEF-this-day-PLUS-2", At("2022-04-30")) == "2022-05-02");
  CHECK(Anchor("P1000D", At("2022-04-30")) == "P1000D");
  CHECK(Anchor("PRESENT_REF", At("2022-04-30")) == "PRESENT_REF");
}

TEST_CASE("day offsets match day-by-day stepping") {
  CalendarDate ref{2022, 4, 30};
  AnchorContext ctx;
  ctx.reference = ref;
  for (int n = 0; n <= 400; n += 7) {
    std::string plus = "UNDEF-this-day-PLUS-" + std::to_string(n);
    std::string minus = "UNDEF-this-day-MINUS-" + std::to_string(n);
    CHECK(Anchor(plus, ctx) == FormatDate(StepDays(ref, n)));
    CHECK(Anchor(minus, ctx) == FormatDate(StepDays(ref, -n)));
  }
}

TEST_CASE("relative units") {
  AnchorContext ctx = At("2022-05-01");  // a Sunday, ISO week 17
  CHECK(Anchor("UNDEF-this-week", ctx) == "2022-W17");
  CHECK(Anchor("UNDEF-next-week", ctx) == "2022-W18");
  CHECK(Anchor("UNDEF-last-weekend", ctx) == "2022-W16-WE");
  CHECK(Anchor("UNDEF-last-month", ctx) == "2022-04");
  CHECK(Anchor("UNDEF-next-quarter", ctx) == "2022-Q3");
  CHECK(Anchor("UNDEF-last-year", ctx) == "2021");
  CHECK(Anchor("UNDEF-this-decade", ctx) == "202");
  CHECK(Anchor("UNDEF-last-century", ctx) == "19");
  CHECK(Anchor("UNDEF-next-dayTMO", ctx) == "2022-05-02TMO");
  CHECK(Anchor("UNDEF-this-dayT9:30", ctx) == "2022-05-01T09:30");
  CHECK(Anchor("UNDEF-this-year-12-24", ctx) == "2022-12-24");
  CHECK(Anchor("UNDEF-this-month-15", ctx) == "2022-05-15");
  CHECK_THROWS_AS(Anchor("UNDEF-this-hour", ctx), AnchorError);

  AnchorContext timed = At("2022-05-01T23:30");
  CHECK(Anchor("UNDEF-next-hour", timed) == "2022-05-02T00");
  CHECK(Anchor("UNDEF-this-minute-PLUS-45", timed) == "2022-05-02T00:15");
}

TEST_CASE("weekday, month and season names") {
  AnchorContext ctx = At("2022-05-04");  // Wednesday
  CHECK(Anchor("UNDEF-this-monday", ctx) == "2022-05-02");
  CHECK(Anchor("UNDEF-next-monday", ctx) == "2022-05-09");
  CHECK(Anchor("UNDEF-last-wednesday", ctx) == "2022-04-27");
  CHECK(Anchor("UNDEF-next-wednesday", ctx) == "2022-05-11");
  CHECK(Anchor("UNDEF-next-week-friday", ctx) == "2022-05-13");
  CHECK(Anchor("UNDEF-this-day-friday", ctx) == "2022-05-06");
  CHECK(Anchor("UNDEF-next-march", ctx) == "2023-03");
  CHECK(Anchor("UNDEF-last-june", ctx) == "2021-06");
  CHECK(Anchor("UNDEF-this-june-3", ctx) == "2022-06-03");
  CHECK(Anchor("UNDEF-next-SU", ctx) == "2022-SU");
  CHECK(Anchor("UNDEF-last-SU", ctx) == "2021-SU");
  CHECK_THROWS_AS(Anchor("UNDEF-this-february-30", ctx), AnchorError);
}

TEST_CASE("REF resolves against the previous expression") {
  AnchorContext ctx = At("2022-05-01");
  CHECK(Anchor("UNDEF-REF-day-PLUS-1", ctx) == "2022-05-02");
  ctx.previous_dates = {ParseDate("2010-01-01"), ParseDate("2019-12-31")};
  CHECK(Anchor("UNDEF-REF-day-PLUS-1", ctx) == "2020-01-01");
  CHECK(Anchor("UNDEF-REFDATE-year", ctx) == "2019");
  CHECK(Anchor("UNDEF-next-day", ctx) == "2022-05-02");
}

TEST_CASE("tense rule for an open year") {
  CHECK(Anchor("UNDEF-year-11", At("2022-05-01", TenseHint::kPast)) == "2021-11");
  CHECK(Anchor("UNDEF-year-03", At("2022-05-01", TenseHint::kPast)) == "2022-03");
  CHECK(Anchor("UNDEF-year-03", At("2022-05-01", TenseHint::kFuture)) == "2023-03");
  CHECK(Anchor("UNDEF-year-11", At("2022-05-01", TenseHint::kFuture)) == "2022-11");
  CHECK(Anchor("UNDEF-year-11", At("2022-05-01", TenseHint::kPresent)) == "2022-11");
  CHECK(Anchor("UNDEF-year-SU", At("2022-05-01", TenseHint::kPast)) == "2021-SU");
  CHECK(Anchor("UNDEF-year-03-15", At("2022-05-01")) == "2022-03-15");
  CHECK(Anchor("UNDEF-year", At("2022-05-01")) == "2022");
  CHECK(Anchor("UNDEF-century-99", At("2022-05-01", TenseHint::kPast)) == "1999");
  CHECK(Anchor("UNDEF-century-15-06", At("2022-05-01")) == "2015-06");
  CHECK(Anchor("UNDEF-decade-9", At("2022-05-01", TenseHint::kPast)) == "199");
  CHECK(Anchor("UNDEF-decade", At("2022-05-01")) == "202");
  CHECK_THROWS_AS(Anchor("UNDEF-year-13", At("2022-05-01")), AnchorError);
}

TEST_CASE("function values") {
  auto table = testing::LoadEasterTable();
  for (const auto &row : table) {
    CAPTURE(row.year);
    CalendarDate easter = ParseDate(row.gregorian);
    CalendarDate orthodox = ParseDate(row.orthodox);
    FunctionArgs pentecost;
    pentecost.numbers = {49};
    CHECK(FuncDateCalc(DateFunction::kEasterSunday, row.year, pentecost) ==
          StepDays(easter, 49));
    CHECK(FuncDateCalc(DateFunction::kEasterSunday, row.year, {}) == easter);
    CHECK(FuncDateCalc(DateFunction::kEasterSundayOrthodox, row.year, {}) ==
          orthodox);
    CHECK(FuncDateCalc(DateFunction::kShroveTideOrthodox, row.year, {}) ==
          StepDays(orthodox, -48));
  }
  CHECK(Anchor("UNDEF-year-00-00 funcDateCalc(EasterSunday(YEAR, 49))",
               At("2022-01-10")) == "2022-06-05");
  CHECK(Anchor("UNDEF-this-year-00-00 funcDateCalc(EasterSunday(YEAR, -2))",
               At("2022-01-10")) == "2022-04-15");
  CHECK(Anchor("2021-00-00 funcDateCalc(EasterSundayOrthodox(YEAR))",
               At("2022-01-10")) == "2021-05-02");
  CHECK(Anchor("UNDEF-century19-00-00 funcDateCalc(EasterSunday(YEAR))",
               At("2022-01-10")) == "1922-04-16");
  AnchorOptions shifted;
  shifted.shrovetide_offset = -49;
  CHECK(Anchor("UNDEF-this-year-00-00 funcDateCalc(ShroveTideOrthodox(YEAR))",
               At("2022-01-10"), shifted) == "2022-03-06");
}

TEST_CASE("WeekdayRelativeTo agrees with a scan of following days") {
  // Monday is 2 in the Sunday-first numbering.
  FunctionArgs args;
  args.month = 5;
  args.day = 1;
  args.numbers = {2, 1};
  args.flag = true;
  CHECK(FormatDate(FuncDateCalc(DateFunction::kWeekdayRelativeTo, 2022, args)) ==
        "2022-05-02");

  CalendarDate base{2022, 5, 1};
  for (int weekday = 1; weekday <= 7; ++weekday) {
    for (bool inclusive : {true, false}) {
      // Brute force: scan forward for the first matching day.
      int iso = weekday == 1 ? 7 : weekday - 1;
      CalendarDate scan = inclusive ? base : StepDays(base, 1);
      while (static_cast<int>(WeekdayOf(scan)) != iso) scan = StepDays(scan, 1);
      args.numbers = {weekday, 1};
      args.flag = inclusive;
      CHECK(FuncDateCalc(DateFunction::kWeekdayRelativeTo, 2022, args) == scan);
      args.numbers = {weekday, 3};
      CHECK(FuncDateCalc(DateFunction::kWeekdayRelativeTo, 2022, args) ==
            StepDays(scan, 14));
    }
  }
  // Mother's day: second Sunday of May.
  CHECK(Anchor("UNDEF-year-05-00 funcDateCalc(WeekdayRelativeTo(YEAR-05-01, "
               "1, 2, true))",
               At("2022-01-10")) == "2022-05-08");
  CHECK(Anchor("UNDEF-year-05-00 funcDateCalc(WeekdayRelativeTo(YEAR-05-01, "
               "1, -1))",
               At("2022-01-10")) == "2022-04-24");
}

TEST_CASE("this-X-PLUS-n then MINUS-n returns the reference") {
  for (const char *ref : {"2022-04-30", "2024-02-29", "1999-12-31"}) {
    AnchorContext ctx = At(ref);
    CalendarDate r = ctx.reference;
    const std::pair<const char *, std::string> units[] = {
        {"day", FormatDate(r)},
        {"month", Pad4(r.year) + "-" + Pad2(r.month)},
        {"year", Pad4(r.year)}};
    for (const auto &[unit, expected] : units) {
      for (int n = 0; n <= 1000; ++n) {
        std::string n_str = std::to_string(n);
        std::string forward =
            Anchor(std::string("UNDEF-this-") + unit + "-PLUS-" + n_str, ctx);
        AnchorContext back;
        back.reference = ParseDate(forward);
        std::string result =
            Anchor(std::string("UNDEF-this-") + unit + "-MINUS-" + n_str, back);
        if (result != expected) {
          CAPTURE(unit);
          CAPTURE(n);
          CHECK(result == expected);
        }
      }
    }
  }
}

TEST_CASE("granularity is preserved") {
  AnchorContext ctx = At("2022-05-01");
  const std::pair<const char *, const char *> cases[] = {
      {"UNDEF-year", "9999"},          {"UNDEF-year-05", "9999-99"},
      {"UNDEF-year-05-03", "9999-99-99"}, {"UNDEF-last-day", "9999-99-99"},
      {"UNDEF-last-month", "9999-99"}, {"UNDEF-next-year", "9999"},
      {"UNDEF-this-dayT10", "9999-99-99T99"}};
  for (const auto &[cir, shape] : cases) {
    std::string value = Anchor(cir, ctx);
    CAPTURE(value);
    REQUIRE(value.size() == std::string(shape).size());
    for (size_t i = 0; i < value.size(); ++i) {
      bool digit = std::isdigit(static_cast<unsigned char>(value[i]));
      CHECK(digit == (shape[i] == '9'));
    }
  }
}

TEST_CASE("anchored grammar corpus is fully specified and idempotent") {
  testing::CirGrammar grammar(99);
  std::mt19937_64 rng(5);
  int anchored = 0;
  for (const auto &[kind, cir] : grammar.Corpus(3000)) {
    AnchorContext ctx;
    ctx.reference = CalendarDate{1990 + static_cast<int>(rng() % 40),
                                 1 + static_cast<int>(rng() % 12),
                                 1 + static_cast<int>(rng() % 28)};
    ctx.tense = static_cast<TenseHint>(rng() % 4);
    std::string value;
    try {
      value = Anchor(cir, ctx);
    } catch (const AnchorError &) {
      continue;
    }
    ++anchored;
    CAPTURE(cir);
    CAPTURE(value);
    CHECK(FullySpecified(value));
    CHECK(value.find("UNDEF") == std::string::npos);
    CHECK(Anchor(value, ctx) == value);
  }
  CHECK(anchored > 1500);
}

TEST_CASE("anchoring errors") {
  AnchorContext ctx = At("2022-05-01");
  CHECK_THROWS_AS(Anchor("not a value", ctx), AnchorError);
  CHECK_THROWS_AS(Anchor("UNDEF-this-year-PLUS-9000", ctx), AnchorError);
  CHECK_THROWS_AS(Anchor("UNDEF-last-day", At("0001-01-01")), AnchorError);
  AnchorContext bad;
  bad.reference = CalendarDate{2022, 2, 30};
  CHECK_THROWS_AS(Anchor("UNDEF-last-day", bad), AnchorError);
  CHECK(ParseTenseHint("past") == TenseHint::kPast);
  CHECK_FALSE(ParseTenseHint("perfect"));
}
