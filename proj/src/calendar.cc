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

#include "tempnorm/calendar.h"

#include <charconv>
#include <cstdio>

namespace tempnorm {

namespace {

// Civil-from-days and days-from-civil over eras of 400 years.
int64_t DaysFromCivil(int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void CivilFromDays(int64_t z, int64_t *y, unsigned *m, unsigned *d) {
  z += 719468;
  const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  *d = doy - (153 * mp + 2) / 5 + 1;
  *m = mp < 10 ? mp + 3 : mp - 9;
  *y = static_cast<int64_t>(yoe) + era * 400 + (*m <= 2);
}

const int64_t kMinDays = DaysFromCivil(kMinYear, 1, 1);
const int64_t kMaxDays = DaysFromCivil(kMaxYear, 12, 31);

bool ParseInt(std::string_view text, int *out) {
  if (text.empty()) return false;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), *out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

bool IsLeapYear(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int DaysInMonth(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30,
                                  31, 31, 30, 31, 30, 31};
  if (month == 2 && IsLeapYear(year)) return 29;
  return kDays[month - 1];
}

bool IsValid(const CalendarDate &date) {
  if (date.year < kMinYear || date.year > kMaxYear) return false;
  if (date.month < 1 || date.month > 12) return false;
  if (date.day < 1 || date.day > DaysInMonth(date.year, date.month)) {
    return false;
  }
  if (date.hour && (*date.hour < 0 || *date.hour > 24)) return false;
  if (date.minute && (!date.hour || *date.minute < 0 || *date.minute > 59)) {
    return false;
  }
  if (date.second && (!date.minute || *date.second < 0 || *date.second > 59)) {
    return false;
  }
  return true;
}

void Validate(const CalendarDate &date) {
  if (!IsValid(date)) {
    throw CalendarError("invalid calendar date " + std::to_string(date.year) +
                        "-" + std::to_string(date.month) + "-" +
                        std::to_string(date.day));
  }
}

int64_t ToDays(int year, int month, int day) {
  return DaysFromCivil(year, static_cast<unsigned>(month),
                       static_cast<unsigned>(day));
}

int64_t ToDays(const CalendarDate &date) {
  return ToDays(date.year, date.month, date.day);
}

CalendarDate FromDays(int64_t days) {
  if (days < kMinDays || days > kMaxDays) {
    throw CalendarError("day count " + std::to_string(days) +
                        " outside the supported calendar range");
  }
  int64_t y;
  unsigned m, d;
  CivilFromDays(days, &y, &m, &d);
  CalendarDate date;
  date.year = static_cast<int>(y);
  date.month = static_cast<int>(m);
  date.day = static_cast<int>(d);
  return date;
}

Weekday WeekdayOf(const CalendarDate &date) {
  // 1970-01-01 was a Thursday.
  int64_t days = ToDays(date);
  int64_t w = ((days % 7) + 7 + 3) % 7;  // 0 = Monday
  return static_cast<Weekday>(w + 1);
}

CalendarDate IsoWeekStart(const IsoWeek &week) {
  CalendarDate jan4{week.year, 1, 4};
  int64_t jan4_days = ToDays(jan4);
  int64_t monday = jan4_days - (static_cast<int>(WeekdayOf(jan4)) - 1);
  return FromDays(monday + 7 * (week.week - 1));
}

IsoWeek IsoWeekOf(const CalendarDate &date) {
  // The ISO week-year is the year of the Thursday of the same week.
  int64_t days = ToDays(date);
  int64_t thursday = days + (4 - static_cast<int>(WeekdayOf(date)));
  CalendarDate th = FromDays(thursday);
  int64_t first = ToDays(th.year, 1, 1);
  return IsoWeek{th.year, static_cast<int>((thursday - first) / 7 + 1)};
}

CalendarDate AddDays(const CalendarDate &date, int64_t days) {
  CalendarDate out = FromDays(ToDays(date) + days);
  out.hour = date.hour;
  out.minute = date.minute;
  out.second = date.second;
  return out;
}

CalendarDate AddMonths(const CalendarDate &date, int64_t months) {
  int64_t index = static_cast<int64_t>(date.year) * 12 + (date.month - 1) +
                  months;
  int64_t year = index >= 0 ? index / 12 : (index - 11) / 12;
  int month = static_cast<int>(index - year * 12) + 1;
  if (year < kMinYear || year > kMaxYear) {
    throw CalendarError("month offset leaves the supported calendar range");
  }
  CalendarDate out = date;
  out.year = static_cast<int>(year);
  out.month = month;
  out.day = std::min(date.day, DaysInMonth(out.year, month));
  return out;
}

CalendarDate AddYears(const CalendarDate &date, int64_t years) {
  return AddMonths(date, years * 12);
}

CalendarDate AddSeconds(const CalendarDate &date, int64_t seconds) {
  if (!date.has_time()) {
    throw CalendarError("time arithmetic on a date without time of day");
  }
  int64_t total = ToDays(date) * 86400 + *date.hour * 3600 +
                  date.minute.value_or(0) * 60 + date.second.value_or(0) +
                  seconds;
  int64_t days = total >= 0 ? total / 86400 : (total - 86399) / 86400;
  int64_t rem = total - days * 86400;
  CalendarDate out = FromDays(days);
  // The result keeps the precision of the input.
  out.hour = static_cast<int>(rem / 3600);
  if (date.minute) out.minute = static_cast<int>((rem / 60) % 60);
  if (date.second) out.second = static_cast<int>(rem % 60);
  return out;
}

std::optional<CalendarDate> TryParseDate(std::string_view text) {
  CalendarDate date;
  std::string_view rest = text;
  std::string_view time;
  if (auto t = rest.find('T'); t != std::string_view::npos) {
    time = rest.substr(t + 1);
    rest = rest.substr(0, t);
    if (time.empty()) return std::nullopt;
  }
  if (rest.size() < 4 || !ParseInt(rest.substr(0, 4), &date.year)) {
    return std::nullopt;
  }
  rest.remove_prefix(4);
  if (!rest.empty()) {
    if (rest.size() < 3 || rest[0] != '-' ||
        !ParseInt(rest.substr(1, 2), &date.month)) {
      return std::nullopt;
    }
    rest.remove_prefix(3);
  }
  if (!rest.empty()) {
    if (rest.size() != 3 || rest[0] != '-' ||
        !ParseInt(rest.substr(1, 2), &date.day)) {
      return std::nullopt;
    }
    rest.remove_prefix(3);
  }
  if (!time.empty()) {
    int value;
    if (time.size() < 2 || !ParseInt(time.substr(0, 2), &value)) {
      return std::nullopt;
    }
    date.hour = value;
    time.remove_prefix(2);
    if (!time.empty()) {
      if (time.size() < 3 || time[0] != ':' ||
          !ParseInt(time.substr(1, 2), &value)) {
        return std::nullopt;
      }
      date.minute = value;
      time.remove_prefix(3);
    }
    if (!time.empty()) {
      if (time.size() != 3 || time[0] != ':' ||
          !ParseInt(time.substr(1, 2), &value)) {
        return std::nullopt;
      }
      date.second = value;
    }
  }
  if (!IsValid(date)) return std::nullopt;
  return date;
}

CalendarDate ParseDate(std::string_view text) {
  auto date = TryParseDate(text);
  if (!date) {
    throw CalendarError("cannot parse date '" + std::string(text) + "'");
  }
  return *date;
}

std::string Pad2(int value) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d", value);
  return buf;
}

std::string Pad4(int value) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", value);
  return buf;
}

std::string FormatDate(const CalendarDate &date) {
  std::string out = Pad4(date.year) + "-" + Pad2(date.month) + "-" +
                    Pad2(date.day);
  if (date.hour) {
    out += "T" + Pad2(*date.hour) + ":" + Pad2(date.minute.value_or(0));
    if (date.second) out += ":" + Pad2(*date.second);
  }
  return out;
}

CalendarDate EasterSunday(int year, EasterVariant variant) {
  if (variant == EasterVariant::kGregorian) {
    if (year < 1583 || year > 4099) {
      throw CalendarError("Gregorian Easter supported for 1583..4099, got " +
                          std::to_string(year));
    }
    const int a = year % 19;
    const int b = year / 100;
    const int c = year % 100;
    const int d = b / 4;
    const int e = b % 4;
    const int f = (b + 8) / 25;
    const int g = (b - f + 1) / 3;
    const int h = (19 * a + b - d - g + 15) % 30;
    const int i = c / 4;
    const int k = c % 4;
    const int l = (32 + 2 * e + 2 * i - h - k) % 7;
    const int m = (a + 11 * h + 22 * l) / 451;
    const int month = (h + l - 7 * m + 114) / 31;
    const int day = (h + l - 7 * m + 114) % 31 + 1;
    return CalendarDate{year, month, day};
  }
  if (year < 1583 || year > kMaxYear) {
    throw CalendarError("Orthodox Easter supported for 1583..9999, got " +
                        std::to_string(year));
  }
  // Julian computus; the result is a Julian calendar date in March/April.
  const int a = year % 4;
  const int b = year % 7;
  const int c = year % 19;
  const int d = (19 * c + 15) % 30;
  const int e = (2 * a + 4 * b - d + 34) % 7;
  const int month = (d + e + 114) / 31;
  const int day = (d + e + 114) % 31 + 1;
  // Julian and Gregorian month lengths agree from March onwards, so the
  // calendar offset on March 1 applies unchanged.
  const int shift = year / 100 - year / 400 - 2;
  return FromDays(ToDays(year, month, day) + shift);
}

}  // namespace tempnorm
