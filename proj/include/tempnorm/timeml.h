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

// Reading and writing TimeML inline annotations, JSONL datasets and BIO tag
// sequences.

#ifndef TEMPNORM_TIMEML_H_
#define TEMPNORM_TIMEML_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "tempnorm/document.h"

namespace tempnorm {

class ParseError : public DataError {
 public:
  ParseError(const std::string &message, size_t offset);
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

// Splits on Unicode whitespace and splits leading/trailing ASCII
// punctuation off each chunk ("(May" -> "(", "May"; "15." -> "15", ".").
// Inner punctuation is kept ("2022-05", "10:30").
std::vector<std::string> Tokenize(std::string_view text);

// Parses text with inline <TIMEX3 type=".." value="..">..</TIMEX3> elements,
// optionally wrapped in a single <DOC id=".." dct="YYYY-MM-DD"> element.
// Attribute values are kept verbatim after entity decoding.
Document ParseInline(std::string_view text);

// Parses a file holding any number of <DOC> elements.
std::vector<Document> ParseInlineCorpus(std::string_view text);

// Tokens joined by single spaces with TIMEX3 elements around annotated
// spans. A <DOC> wrapper is emitted when the document has an id or DCT.
std::string SerializeInline(const Document &doc);

// BIO labels. kOutside has no type.
struct BioTag {
  enum class Kind { kOutside, kBegin, kInside };
  Kind kind = Kind::kOutside;
  TimexType type = TimexType::kDate;

  static BioTag O() { return {}; }
  static BioTag B(TimexType t) { return {Kind::kBegin, t}; }
  static BioTag I(TimexType t) { return {Kind::kInside, t}; }

  friend bool operator==(const BioTag &a, const BioTag &b) {
    return a.kind == b.kind && (a.kind == Kind::kOutside || a.type == b.type);
  }
};

// Label index in [0, 9): O = 0, then B/I pairs per type in TimexType order.
inline constexpr int kNumBioLabels = 1 + 2 * kNumTimexTypes;
int BioLabelIndex(const BioTag &tag);
BioTag BioTagFromIndex(int index);
std::string BioTagName(const BioTag &tag);

std::vector<BioTag> ToBio(const Document &doc);

// Maximal B I* runs become annotations with empty values. An I that does
// not continue a run of the same type starts a new annotation.
std::vector<TimexAnnotation> FromBio(const std::vector<BioTag> &tags,
                                     const std::vector<std::string> &tokens);

// JSONL with fields id, tokens, dct, annotations[{start,end,type,value}] and
// an optional lang.
std::string DocumentToJsonLine(const Document &doc);
Document DocumentFromJsonLine(std::string_view line);

std::vector<Document> ReadJsonl(std::istream &in);
std::vector<Document> ReadJsonlFile(const std::string &path);
void WriteJsonl(std::ostream &out, const std::vector<Document> &docs);
void WriteJsonlFile(const std::string &path, const std::vector<Document> &docs);

}  // namespace tempnorm

#endif  // TEMPNORM_TIMEML_H_
