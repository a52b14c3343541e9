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

// Resolution of context-independent values against a reference date.

#ifndef TEMPNORM_ANCHORING_H_
#define TEMPNORM_ANCHORING_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tempnorm/calendar.h"
#include "tempnorm/document.h"

namespace tempnorm {

enum class TenseHint { kUnknown, kPast, kPresent, kFuture };

std::string_view TenseHintName(TenseHint tense);
std::optional<TenseHint> ParseTenseHint(std::string_view name);

struct AnchorContext {
  CalendarDate reference;
  // Dates of earlier expressions in the document, most recent last.
  std::vector<CalendarDate> previous_dates;
  TenseHint tense = TenseHint::kUnknown;
};

struct AnchorOptions {
  // Offset of Orthodox Shrove Sunday from Orthodox Easter, in days.
  int shrovetide_offset = -48;
};

class AnchorError : public DataError {
 public:
  using DataError::DataError;
};

// Returns a fully specified TimeML value. Explicit dates, durations and
// PRESENT/PAST/FUTURE_REF pass through unchanged.
std::string Anchor(std::string_view cir, const AnchorContext &ctx,
                   const AnchorOptions &options = {});

enum class DateFunction {
  kEasterSunday,
  kEasterSundayOrthodox,
  kShroveTideOrthodox,
  kWeekdayRelativeTo,
};

std::optional<DateFunction> ParseDateFunction(std::string_view name);

struct FunctionArgs {
  // YEAR-MM-DD base date fields, for WeekdayRelativeTo.
  std::optional<int> month;
  std::optional<int> day;
  std::vector<int> numbers;
  std::optional<bool> flag;
};

// Easter functions take an optional day offset. WeekdayRelativeTo takes a
// weekday (1 = Sunday .. 7 = Saturday), a signed occurrence count and an
// optional flag that lets the base date itself count as an occurrence.
CalendarDate FuncDateCalc(DateFunction fn, int year, const FunctionArgs &args,
                          const AnchorOptions &options = {});

}  // namespace tempnorm

#endif  // TEMPNORM_ANCHORING_H_
