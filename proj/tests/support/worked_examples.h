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

// The documented CIR examples with their expected slot assignments.

#ifndef TEMPNORM_TESTS_SUPPORT_WORKED_EXAMPLES_H_
#define TEMPNORM_TESTS_SUPPORT_WORKED_EXAMPLES_H_

#include <initializer_list>
#include <utility>
#include <vector>

#include "tempnorm/slot_codec.h"

namespace tempnorm::testing {

inline SlotSequence Slots(std::initializer_list<std::pair<SlotName, const char *>> filled) {
  SlotSequence s;
  for (const auto &[slot, value] : filled) s[slot] = value;
  return s;
}

struct WorkedExample {
  const char *cir;
  SlotSequence slots;
};

inline std::vector<WorkedExample> WorkedExamples() {
  return {
      {"PRESENT_REF", Slots({{SlotName::kSD1, "PRESENT"}})},
      {"P1000D", Slots({{SlotName::kSB, "P"}, {SlotName::kSD1, "10"}, {SlotName::kSD2, "00"},
                        {SlotName::kSD4, "D"}})},
      {"P1D12H", Slots({{SlotName::kSB, "P"}, {SlotName::kSD1, "1"}, {SlotName::kSD4, "D"},
                        {SlotName::kST1, "12"}, {SlotName::kST2, "H"}})},
      {"BC1000", Slots({{SlotName::kSB, "BC"}, {SlotName::kSD1, "10"}, {SlotName::kSD2, "00"}})},
      {"2022-03-15TMO", Slots({{SlotName::kSD1, "20"}, {SlotName::kSD2, "22"},
                               {SlotName::kSD3, "03"}, {SlotName::kSD4, "15"},
                               {SlotName::kST1, "MO"}})},
      {"UNDEF-year-03-15", Slots({{SlotName::kSD1, "year"}, {SlotName::kSD3, "03"},
                                  {SlotName::kSD4, "15"}})},
      {"UNDEF-this-day-PLUS-2", Slots({{SlotName::kSB, "PLUS"}, {SlotName::kSD1, "this"},
                                       {SlotName::kSD2, "day"}, {SlotName::kSA1, "2"}})},
      {"UNDEF-year-00-00 funcDateCalc(EasterSunday(YEAR, 49))",
       Slots({{SlotName::kSB, "EasterSunday"}, {SlotName::kSD1, "year"}, {SlotName::kSD2, "00"},
              {SlotName::kSA1, "49"}})},
  };
}

}  // namespace tempnorm::testing

#endif  // TEMPNORM_TESTS_SUPPORT_WORKED_EXAMPLES_H_
