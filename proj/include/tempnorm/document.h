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

#ifndef TEMPNORM_DOCUMENT_H_
#define TEMPNORM_DOCUMENT_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tempnorm/calendar.h"

namespace tempnorm {

class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TimexType { kDate, kTime, kDuration, kSet };

inline constexpr int kNumTimexTypes = 4;

// "DATE", "TIME", "DURATION", "SET".
std::string_view TimexTypeName(TimexType type);

// Inverse of TimexTypeName; nullopt for anything else.
std::optional<TimexType> ParseTimexType(std::string_view name);

// A temporal expression over the half-open token range [start, end). The
// value holds either a TimeML value or a CIR, depending on pipeline stage.
struct TimexAnnotation {
  int start = 0;
  int end = 0;
  TimexType type = TimexType::kDate;
  std::string value;

  friend bool operator==(const TimexAnnotation &,
                         const TimexAnnotation &) = default;
};

struct Document {
  std::string id;
  std::vector<std::string> tokens;
  std::optional<CalendarDate> dct;
  std::vector<TimexAnnotation> annotations;
  // Language tag used for per-language evaluation; empty when unknown.
  std::string lang;

  friend bool operator==(const Document &, const Document &) = default;
};

// Checks span bounds, ordering and non-overlap. Throws DataError.
void ValidateDocument(const Document &doc);

}  // namespace tempnorm

#endif  // TEMPNORM_DOCUMENT_H_
