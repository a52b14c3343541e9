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

// Proleptic Gregorian calendar arithmetic on a day-count representation.
// Day 0 is 1970-01-01. Supported years are 1..9999 so that every date has a
// four-digit TimeML rendering.

#ifndef TEMPNORM_CALENDAR_H_
#define TEMPNORM_CALENDAR_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tempnorm {

inline constexpr int kMinYear = 1;
inline constexpr int kMaxYear = 9999;

class CalendarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ISO weekday numbering: Monday = 1 ... Sunday = 7.
enum class Weekday { kMonday = 1, kTuesday, kWednesday, kThursday, kFriday,
                     kSaturday, kSunday };

struct CalendarDate {
  int year = 1970;
  int month = 1;
  int day = 1;
  std::optional<int> hour;
  std::optional<int> minute;
  std::optional<int> second;

  bool has_time() const { return hour.has_value(); }
  friend bool operator==(const CalendarDate &, const CalendarDate &) = default;
};

bool IsLeapYear(int year);
int DaysInMonth(int year, int month);

// True when year/month/day (and time, if present) form a valid date within
// the supported range.
bool IsValid(const CalendarDate &date);

// Throws CalendarError if `date` is not valid.
void Validate(const CalendarDate &date);

// Days since 1970-01-01 (time fields ignored).
int64_t ToDays(const CalendarDate &date);
int64_t ToDays(int year, int month, int day);

// Inverse of ToDays. Throws CalendarError outside the supported range.
CalendarDate FromDays(int64_t days);

Weekday WeekdayOf(const CalendarDate &date);

struct IsoWeek {
  int year = 0;
  int week = 0;
  friend bool operator==(const IsoWeek &, const IsoWeek &) = default;
};
IsoWeek IsoWeekOf(const CalendarDate &date);

// Monday of the given ISO week.
CalendarDate IsoWeekStart(const IsoWeek &week);

CalendarDate AddDays(const CalendarDate &date, int64_t days);

// Adds calendar months. The day is clamped to the length of the target
// month (2022-01-31 + 1 month = 2022-02-28).
CalendarDate AddMonths(const CalendarDate &date, int64_t months);
CalendarDate AddYears(const CalendarDate &date, int64_t years);

// Adds seconds to a date carrying a time of day. Missing minute/second
// fields count as zero.
CalendarDate AddSeconds(const CalendarDate &date, int64_t seconds);

// Parses "YYYY", "YYYY-MM", "YYYY-MM-DD" with an optional
// "THH", "THH:MM" or "THH:MM:SS" suffix. Missing month/day default to 1.
CalendarDate ParseDate(std::string_view text);

// Like ParseDate but returns nullopt instead of throwing.
std::optional<CalendarDate> TryParseDate(std::string_view text);

// YYYY-MM-DD, plus THH:MM[:SS] when a time is present.
std::string FormatDate(const CalendarDate &date);

// Two-digit zero padded rendering of a small non-negative number.
std::string Pad2(int value);
// Four-digit zero padded year.
std::string Pad4(int value);

enum class EasterVariant { kGregorian, kOrthodox };

// Date of Easter Sunday in the Gregorian calendar. The Gregorian variant
// uses the anonymous Gregorian computus and accepts 1583..4099. The
// Orthodox variant uses the Julian computus shifted onto the Gregorian
// calendar and accepts years >= 1583.
CalendarDate EasterSunday(int year, EasterVariant variant);

}  // namespace tempnorm

#endif  // TEMPNORM_CALENDAR_H_
