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

// Slot representation of context-independent temporal values (CIRs).
//
// A CIR such as "UNDEF-this-day-PLUS-2" is split into eleven slots
//
//   SB  SD1 SD2 SD3 SD4 ST1 ST2 ST3 SA1 SA2 SA3
//
// by one of six whole-string patterns, tried in the order
//
//   D1 references         PRESENT_REF, PAST_REF, FUTURE_REF
//   P1 durations          P1000D, PT2H, P1D12H
//   D5 function dates     UNDEF-year-00-00 funcDateCalc(EasterSunday(YEAR, 49))
//   D3 relative dates     UNDEF-this-day-PLUS-2, UNDEF-next-monday
//   D4 coarse relative    UNDEF-year-05, UNDEF-year-03-15
//   D2 explicit dates     2022-03-15TMO, BC1000, 2022-W12
//
// Unused slots hold [PAD]. Separators, "UNDEF", "_REF", "T" and the
// funcDateCalc syntax are not stored; DecodeSlots re-inserts them so that
// DecodeSlots(EncodeCir(c).slots).cir == c for every encodable c.
//
// Four-digit years are split into two two-digit tokens (2022 -> 20, 22).
// One- and two-digit numerals are distinct tokens ("1" vs "01").

#ifndef TEMPNORM_SLOT_CODEC_H_
#define TEMPNORM_SLOT_CODEC_H_

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tempnorm/document.h"

namespace tempnorm {

enum class SlotName { kSB, kSD1, kSD2, kSD3, kSD4, kST1, kST2, kST3,
                      kSA1, kSA2, kSA3 };

inline constexpr int kNumSlots = 11;
inline constexpr std::string_view kPadToken = "[PAD]";

std::string_view SlotNameString(SlotName slot);

struct SlotSequence {
  std::array<std::string, kNumSlots> values;

  SlotSequence() { values.fill(std::string(kPadToken)); }

  std::string &operator[](SlotName s) { return values[static_cast<int>(s)]; }
  const std::string &operator[](SlotName s) const {
    return values[static_cast<int>(s)];
  }
  bool IsPad(SlotName s) const { return (*this)[s] == kPadToken; }
  bool AllPad() const;

  // "SB=P SD1=10 ..." listing only filled slots.
  std::string ToString() const;

  friend bool operator==(const SlotSequence &, const SlotSequence &) = default;
};

enum class CirClass {
  kReference,       // D1
  kExplicitDate,    // D2
  kDuration,        // P1
  kRelativeDate,    // D3
  kCoarseRelative,  // D4
  kFunctionDate,    // D5
};

// "D1", "D2", "P1", "D3", "D4", "D5".
std::string_view CirClassName(CirClass c);

// True for the classes that denote already anchored TimeML values.
bool IsFullySpecified(CirClass c);

class UnencodableCir : public DataError {
 public:
  explicit UnencodableCir(std::string cir);
  const std::string &cir() const { return cir_; }

 private:
  std::string cir_;
};

class EmptySlots : public DataError {
 public:
  EmptySlots() : DataError("slot sequence is entirely [PAD]") {}
};

struct EncodedCir {
  SlotSequence slots;
  CirClass cir_class = CirClass::kExplicitDate;
};

// Throws UnencodableCir when no pattern matches the whole string.
EncodedCir EncodeCir(std::string_view cir);

// Class of the first matching pattern, or nullopt.
std::optional<CirClass> ClassifyCir(std::string_view cir);

struct DecodedCir {
  std::string cir;
  CirClass cir_class = CirClass::kExplicitDate;
  // False when the slots are not the encoding of the returned string, as can
  // happen for model predictions. The string is then a best-effort rendering.
  bool canonical = true;
};

// Throws EmptySlots for an all-[PAD] sequence.
DecodedCir DecodeSlots(const SlotSequence &slots);

class VocabularyOverflow : public DataError {
 public:
  VocabularyOverflow(size_t cap, std::vector<std::string> overflow);
  const std::vector<std::string> &overflow() const { return overflow_; }

 private:
  std::vector<std::string> overflow_;
};

// Slot token inventory. [PAD] always has id 0. Tokens are grouped by class
// (pad, units, unit names, daytimes, specials, names, relational words,
// operators, functions, numerals, corpus extras) and sorted within a class.
class SlotVocabulary {
 public:
  static constexpr size_t kDefaultCap = 256;

  // The closed-class inventory shared by every CIR the codec can emit.
  static const SlotVocabulary &Baseline();

  // Baseline plus every token in `corpus`. Throws VocabularyOverflow when
  // the result would exceed `cap` tokens.
  static SlotVocabulary Build(const std::vector<SlotSequence> &corpus,
                              size_t cap = kDefaultCap);

  // One token per line, line number = id.
  static SlotVocabulary Load(const std::string &path);
  void Save(const std::string &path) const;
  static SlotVocabulary FromTokens(std::vector<std::string> tokens);

  size_t size() const { return tokens_.size(); }
  const std::vector<std::string> &tokens() const { return tokens_; }
  const std::string &token(int id) const { return tokens_.at(id); }
  std::optional<int> id(std::string_view token) const;
  bool contains(std::string_view token) const { return id(token).has_value(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace tempnorm

#endif  // TEMPNORM_SLOT_CODEC_H_
