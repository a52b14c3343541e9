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

#include "tempnorm/checkpoint.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace tempnorm {
namespace {

// Upper bounds that reject garbage sizes before allocating.
constexpr uint32_t kMaxCount = 1u << 24;
constexpr uint32_t kMaxString = 1u << 16;

class Writer {
 public:
  explicit Writer(std::ostream &out) : out_(out) {}

  void U32(uint32_t v) {
    char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 4);
  }
  void U64(uint64_t v) {
    char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out_.write(b, 8);
  }
  void I32(int v) { U32(static_cast<uint32_t>(v)); }
  void F64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    U64(bits);
  }
  void Str(const std::string &s) {
    U32(static_cast<uint32_t>(s.size()));
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void Tensor(const std::string &name, const Matrix &m) {
    Str(name);
    U32(static_cast<uint32_t>(m.rows()));
    U32(static_cast<uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) F64(m(r, c));
    }
  }
  void Header(CheckpointKind kind) {
    out_.write(kCheckpointMagic, 4);
    U32(kCheckpointVersion);
    U32(static_cast<uint32_t>(kind));
  }
  void Finish() {
    out_.flush();
    if (!out_) throw CheckpointError("checkpoint write failed");
  }

 private:
  std::ostream &out_;
};

class Reader {
 public:
  explicit Reader(std::istream &in) : in_(in) {}

  uint32_t U32() {
    unsigned char b[4];
    Bytes(reinterpret_cast<char *>(b), 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(b[i]) << (8 * i);
    return v;
  }
  uint64_t U64() {
    unsigned char b[8];
    Bytes(reinterpret_cast<char *>(b), 8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
    return v;
  }
  int I32() { return static_cast<int>(U32()); }
  double F64() {
    uint64_t bits = U64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    if (!std::isfinite(v)) throw CheckpointError("non-finite value in checkpoint");
    return v;
  }
  uint32_t Count() {
    uint32_t n = U32();
    if (n > kMaxCount) throw CheckpointError("implausible count in checkpoint");
    return n;
  }
  std::string Str() {
    uint32_t n = U32();
    if (n > kMaxString) throw CheckpointError("implausible string length in checkpoint");
    std::string s(n, '\0');
    Bytes(s.data(), n);
    return s;
  }
  Matrix Tensor(std::string *name) {
    *name = Str();
    const uint32_t rows = Count();
    const uint32_t cols = Count();
    if (static_cast<uint64_t>(rows) * cols > kMaxCount * 4ull) {
      throw CheckpointError("implausible tensor size in checkpoint");
    }
    Matrix m(rows, cols);
    for (uint32_t r = 0; r < rows; ++r) {
      for (uint32_t c = 0; c < cols; ++c) m(r, c) = F64();
    }
    return m;
  }
  void Header(CheckpointKind expected) {
    char magic[4];
    Bytes(magic, 4);
    if (std::memcmp(magic, kCheckpointMagic, 4) != 0) {
      throw CheckpointError("not a tempnorm checkpoint");
    }
    const uint32_t version = U32();
    if (version != kCheckpointVersion) {
      throw CheckpointError("unsupported checkpoint version " + std::to_string(version) +
                            ", expected " + std::to_string(kCheckpointVersion));
    }
    const uint32_t kind = U32();
    if (kind != static_cast<uint32_t>(expected)) {
      throw CheckpointError("checkpoint holds a different model kind");
    }
  }
  void ExpectEnd() {
    if (in_.peek() != std::char_traits<char>::eof()) {
      throw CheckpointError("trailing bytes after checkpoint");
    }
  }

 private:
  void Bytes(char *dst, size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) throw CheckpointError("truncated checkpoint");
  }

  std::istream &in_;
};

struct EncoderBlob {
  ModelVocabulary vocab;
  Encoder encoder;
  ValueMode mode = ValueMode::kSlots;
  int value_len = 0;
};

void WriteEncoder(Writer &w, const ModelVocabulary &vocab, const Encoder &enc,
                  ValueMode mode, int value_len) {
  const ModelConfig &c = enc.config();
  for (int v : {c.layers, c.hidden, c.heads, c.ff_dim, c.max_seq, c.vocab_size}) w.I32(v);
  w.U64(c.seed);
  w.I32(enc.num_outputs());
  w.I32(enc.num_segments());
  w.I32(static_cast<int>(mode));
  w.I32(value_len);
  w.U32(static_cast<uint32_t>(vocab.size()));
  for (const std::string &t : vocab.tokens()) w.Str(t);
  w.U32(static_cast<uint32_t>(enc.params().size()));
  for (const Parameter &p : enc.params()) w.Tensor(p.name, p.value);
}

EncoderBlob ReadEncoder(Reader &r) {
  EncoderBlob blob;
  ModelConfig c;
  c.layers = r.I32();
  c.hidden = r.I32();
  c.heads = r.I32();
  c.ff_dim = r.I32();
  c.max_seq = r.I32();
  c.vocab_size = r.I32();
  c.seed = r.U64();
  const int outputs = r.I32();
  const int segments = r.I32();
  const int mode = r.I32();
  blob.value_len = r.I32();
  if (mode != static_cast<int>(ValueMode::kSlots) &&
      mode != static_cast<int>(ValueMode::kChars)) {
    throw CheckpointError("unknown value mode in checkpoint");
  }
  blob.mode = static_cast<ValueMode>(mode);
  try {
    c.Validate();
  } catch (const std::invalid_argument &e) {
    throw CheckpointError(std::string("bad model config in checkpoint: ") + e.what());
  }
  if (outputs < 1 || segments < 0 || outputs > static_cast<int>(kMaxCount) ||
      segments > static_cast<int>(kMaxCount)) {
    throw CheckpointError("bad output or segment count in checkpoint");
  }
  std::vector<std::string> tokens(r.Count());
  for (std::string &t : tokens) t = r.Str();
  if (static_cast<int>(tokens.size()) != c.vocab_size) {
    throw CheckpointError("vocabulary size does not match the model config");
  }
  blob.vocab = ModelVocabulary::FromTokens(std::move(tokens));
  blob.encoder = Encoder(c, outputs, segments);
  std::vector<Parameter> &params = blob.encoder.params();
  if (r.Count() != params.size()) throw CheckpointError("tensor count mismatch");
  for (Parameter &p : params) {
    std::string name;
    Matrix m = r.Tensor(&name);
    if (name != p.name || m.rows() != p.value.rows() || m.cols() != p.value.cols()) {
      throw CheckpointError("tensor " + name + " does not match expected " + p.name);
    }
    p.value = std::move(m);
  }
  return blob;
}

template <typename T, typename Fn>
void SaveFile(const std::string &path, const T &model, Fn write) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path);
  write(out, model);
}

template <typename Fn>
auto LoadFile(const std::string &path, Fn read) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open " + path);
  try {
    return read(in);
  } catch (const CheckpointError &e) {
    throw CheckpointError(path + ": " + e.what());
  }
}

}  // namespace

void WriteNormalizer(std::ostream &out, const MlmModel &model) {
  Writer w(out);
  w.Header(CheckpointKind::kNormalizer);
  WriteEncoder(w, model.vocab, model.encoder, model.mode, model.value_len);
  w.Finish();
}

MlmModel ReadNormalizer(std::istream &in) {
  Reader r(in);
  r.Header(CheckpointKind::kNormalizer);
  EncoderBlob blob = ReadEncoder(r);
  r.ExpectEnd();
  if (blob.encoder.num_outputs() != static_cast<int>(blob.vocab.size()) ||
      blob.encoder.num_segments() != blob.value_len) {
    throw CheckpointError("normalizer head does not match its vocabulary");
  }
  MlmModel model;
  model.vocab = std::move(blob.vocab);
  model.encoder = std::move(blob.encoder);
  model.mode = blob.mode;
  model.value_len = blob.value_len;
  return model;
}

void SaveNormalizer(const std::string &path, const MlmModel &model) {
  SaveFile(path, model, WriteNormalizer);
}

MlmModel LoadNormalizer(const std::string &path) { return LoadFile(path, ReadNormalizer); }

void WriteTagger(std::ostream &out, const TaggerModel &model) {
  Writer w(out);
  w.Header(CheckpointKind::kTagger);
  WriteEncoder(w, model.vocab, model.encoder, ValueMode::kSlots, 0);
  w.Finish();
}

TaggerModel ReadTagger(std::istream &in) {
  Reader r(in);
  r.Header(CheckpointKind::kTagger);
  EncoderBlob blob = ReadEncoder(r);
  r.ExpectEnd();
  if (blob.encoder.num_outputs() != kNumBioLabels) {
    throw CheckpointError("tagger head does not match the BIO label set");
  }
  TaggerModel model;
  model.vocab = std::move(blob.vocab);
  model.encoder = std::move(blob.encoder);
  return model;
}

void SaveTagger(const std::string &path, const TaggerModel &model) {
  SaveFile(path, model, WriteTagger);
}

TaggerModel LoadTagger(const std::string &path) { return LoadFile(path, ReadTagger); }

void WriteCrf(std::ostream &out, const CrfModel &crf) {
  const Eigen::Index n = static_cast<Eigen::Index>(crf.labels.size());
  if (crf.transitions.rows() != n || crf.transitions.cols() != n) {
    throw std::invalid_argument("CRF transitions must be square over the labels");
  }
  Writer w(out);
  w.Header(CheckpointKind::kCrf);
  w.U32(static_cast<uint32_t>(crf.labels.size()));
  for (int l : crf.labels) w.I32(l);
  w.Tensor("transitions", crf.transitions);
  w.Finish();
}

CrfModel ReadCrf(std::istream &in) {
  Reader r(in);
  r.Header(CheckpointKind::kCrf);
  CrfModel crf;
  crf.labels.resize(r.Count());
  for (int &l : crf.labels) l = r.I32();
  std::string name;
  crf.transitions = r.Tensor(&name);
  r.ExpectEnd();
  const Eigen::Index n = static_cast<Eigen::Index>(crf.labels.size());
  if (name != "transitions" || crf.transitions.rows() != n || crf.transitions.cols() != n) {
    throw CheckpointError("CRF transitions do not match the label set");
  }
  return crf;
}

void SaveCrf(const std::string &path, const CrfModel &crf) { SaveFile(path, crf, WriteCrf); }

CrfModel LoadCrf(const std::string &path) { return LoadFile(path, ReadCrf); }

}  // namespace tempnorm
