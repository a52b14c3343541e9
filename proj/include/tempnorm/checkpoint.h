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

// Binary model files. Layout, all integers and doubles little-endian:
//
//   "TNCK" magic, u32 format version, u32 kind
//   kind normalizer/tagger:
//     i32 layers, hidden, heads, ff_dim, max_seq, vocab_size; u64 seed
//     i32 num_outputs, num_segments, value mode, value_len
//     u32 token count, then per token u32 length and bytes
//     u32 tensor count, then per tensor u32 name length, name,
//       u32 rows, u32 cols and rows*cols f64 in row-major order
//   kind crf:
//     u32 label count, i32 labels, then one tensor as above

#ifndef TEMPNORM_CHECKPOINT_H_
#define TEMPNORM_CHECKPOINT_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "tempnorm/decoding.h"
#include "tempnorm/extraction.h"
#include "tempnorm/mlm.h"

namespace tempnorm {

inline constexpr char kCheckpointMagic[4] = {'T', 'N', 'C', 'K'};
inline constexpr uint32_t kCheckpointVersion = 1;

enum class CheckpointKind : uint32_t { kNormalizer = 1, kTagger = 2, kCrf = 3 };

// Malformed, truncated, mismatched or wrong-version files.
class CheckpointError : public DataError {
 public:
  using DataError::DataError;
};

void WriteNormalizer(std::ostream &out, const MlmModel &model);
MlmModel ReadNormalizer(std::istream &in);
void SaveNormalizer(const std::string &path, const MlmModel &model);
MlmModel LoadNormalizer(const std::string &path);

void WriteTagger(std::ostream &out, const TaggerModel &model);
TaggerModel ReadTagger(std::istream &in);
void SaveTagger(const std::string &path, const TaggerModel &model);
TaggerModel LoadTagger(const std::string &path);

void WriteCrf(std::ostream &out, const CrfModel &crf);
CrfModel ReadCrf(std::istream &in);
void SaveCrf(const std::string &path, const CrfModel &crf);
CrfModel LoadCrf(const std::string &path);

}  // namespace tempnorm

#endif  // TEMPNORM_CHECKPOINT_H_
