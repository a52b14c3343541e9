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

#include "tempnorm/config.h"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "toml.hpp"

namespace tempnorm {
namespace {

enum class Kind { kInt, kUint, kDouble, kBool, kString };

struct Field {
  std::string section;
  std::string key;
  Kind kind;
  std::function<void(const std::string &)> set;
  std::function<std::string()> get;

  std::string Name() const { return section + "." + key; }
  std::string EnvName() const {
    std::string s = "TEMPNORM_" + section + "_" + key;
    for (char &c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  }
};

[[noreturn]] void Bad(const std::string &name, const std::string &text, const char *want) {
  throw ConfigError("config " + name + ": cannot read '" + text + "' as " + want);
}

template <typename T>
T ParseNumber(const std::string &name, const std::string &text, const char *want) {
  T v{};
  const char *end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) Bad(name, text, want);
  return v;
}

std::string FormatDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

class FieldTable {
 public:
  explicit FieldTable(std::string section) : section_(std::move(section)) {}

  void Section(std::string s) { section_ = std::move(s); }

  void Int(const char *key, int *p) {
    Add(key, Kind::kInt, [p, n = Full(key)](const std::string &t) {
          *p = ParseNumber<int>(n, t, "an integer");
        },
        [p] { return std::to_string(*p); });
  }
  void Uint(const char *key, uint64_t *p) {
    Add(key, Kind::kUint, [p, n = Full(key)](const std::string &t) {
          *p = ParseNumber<uint64_t>(n, t, "a non-negative integer");
        },
        [p] { return std::to_string(*p); });
  }
  void Double(const char *key, double *p) {
    Add(key, Kind::kDouble, [p, n = Full(key)](const std::string &t) {
          *p = ParseNumber<double>(n, t, "a number");
        },
        [p] { return FormatDouble(*p); });
  }
  void Bool(const char *key, bool *p) {
    Add(key, Kind::kBool, [p, n = Full(key)](const std::string &t) {
          if (t == "true" || t == "1") {
            *p = true;
          } else if (t == "false" || t == "0") {
            *p = false;
          } else {
            Bad(n, t, "a boolean");
          }
        },
        [p] { return std::string(*p ? "true" : "false"); });
  }
  void String(const char *key, std::string *p) {
    Add(key, Kind::kString, [p](const std::string &t) { *p = t; }, [p] { return *p; });
  }
  template <typename E, typename ParseFn, typename NameFn>
  void Enum(const char *key, E *p, ParseFn parse, NameFn name) {
    Add(key, Kind::kString, [p, parse, n = Full(key)](const std::string &t) {
          auto v = parse(t);
          if (!v) Bad(n, t, "a known option");
          *p = *v;
        },
        [p, name] { return std::string(name(*p)); });
  }

  std::vector<Field> Take() { return std::move(fields_); }

 private:
  std::string Full(const char *key) const { return section_ + "." + key; }
  void Add(const char *key, Kind kind, std::function<void(const std::string &)> set,
           std::function<std::string()> get) {
    fields_.push_back({section_, key, kind, std::move(set), std::move(get)});
  }

  std::string section_;
  std::vector<Field> fields_;
};

void ModelFields(FieldTable &t, ModelConfig *m) {
  t.Int("layers", &m->layers);
  t.Int("hidden", &m->hidden);
  t.Int("heads", &m->heads);
  t.Int("ff_dim", &m->ff_dim);
  t.Int("max_seq", &m->max_seq);
  t.Uint("seed", &m->seed);
}

void OptimizerFields(FieldTable &t, OptimizerConfig *o) {
  t.Enum("optimizer", &o->kind, ParseOptimizerKind, OptimizerKindName);
  t.Double("learning_rate", &o->learning_rate);
  t.Double("clip_norm", &o->clip_norm);
  t.Int("warmup_steps", &o->warmup_steps);
  t.Double("final_lr_fraction", &o->final_lr_fraction);
}

std::vector<Field> Fields(PipelineConfig *c) {
  FieldTable t("model");
  ModelFields(t, &c->model);
  t.Enum("mode", &c->mode, ParseValueMode, ValueModeName);
  t.Int("value_len", &c->value_len);
  t.Int("min_count", &c->min_count);

  t.Section("train");
  t.Int("steps", &c->train.steps);
  t.Int("batch_size", &c->train.batch_size);
  OptimizerFields(t, &c->train.optimizer);
  t.Bool("curriculum", &c->train.curriculum);
  t.Uint("seed", &c->train.seed);
  t.Double("p_value_slots", &c->train.policy.p_value_slots);
  t.Double("p_annotated_tokens", &c->train.policy.p_annotated_tokens);
  t.Double("p_types", &c->train.policy.p_types);
  t.Double("p_other_text", &c->train.policy.p_other_text);

  t.Section("tagger");
  ModelFields(t, &c->tagger_model);
  t.Int("steps", &c->tagger_train.steps);
  t.Int("batch_size", &c->tagger_train.batch_size);
  OptimizerFields(t, &c->tagger_train.optimizer);
  t.Uint("train_seed", &c->tagger_train.seed);

  t.Section("crf");
  t.Int("steps", &c->crf.steps);
  t.Double("initial_step", &c->crf.initial_step);
  t.Double("l2", &c->crf.l2);

  t.Section("paths");
  t.String("data", &c->data);
  t.String("train_data", &c->train_data);
  t.String("normalizer", &c->normalizer_path);
  t.String("tagger", &c->tagger_path);
  t.String("crf", &c->crf_path);
  t.String("report", &c->report_path);
  t.String("output", &c->output_path);
  t.String("groups", &c->groups_path);

  t.Section("pipeline");
  t.Enum("extraction", &c->extraction, ParseExtractionMode, ExtractionModeName);
  t.Enum("normalizer", &c->normalizer_source, ParseNormalizerSource, NormalizerSourceName);
  t.Enum("decode", &c->decode, ParseDecodeStrategy, DecodeStrategyName);
  t.Bool("restricted", &c->restricted);
  t.Bool("train_first", &c->train_first);

  t.Section("anchoring");
  t.Enum("tense", &c->tense, ParseTenseHint, TenseHintName);
  t.Int("shrovetide_offset", &c->anchor.shrovetide_offset);
  return t.Take();
}

std::string NodeText(const std::string &name, const toml::node &node) {
  if (auto s = node.value_exact<std::string>()) return *s;
  if (auto i = node.value_exact<int64_t>()) return std::to_string(*i);
  if (auto d = node.value_exact<double>()) return FormatDouble(*d);
  if (auto b = node.value_exact<bool>()) return *b ? "true" : "false";
  throw ConfigError("config " + name + ": unsupported value type");
}

void ApplyEnv(PipelineConfig *c, const EnvLookup &env) {
  for (Field &f : Fields(c)) {
    if (std::optional<std::string> v = env(f.EnvName())) f.set(*v);
  }
}

}  // namespace

std::string_view ExtractionModeName(ExtractionMode mode) {
  return mode == ExtractionMode::kGold ? "gold" : "model";
}

std::optional<ExtractionMode> ParseExtractionMode(std::string_view name) {
  if (name == "model") return ExtractionMode::kModel;
  if (name == "gold") return ExtractionMode::kGold;
  return std::nullopt;
}

std::string_view NormalizerSourceName(NormalizerSource source) {
  return source == NormalizerSource::kOracle ? "oracle" : "model";
}

std::optional<NormalizerSource> ParseNormalizerSource(std::string_view name) {
  if (name == "model") return NormalizerSource::kModel;
  if (name == "oracle") return NormalizerSource::kOracle;
  return std::nullopt;
}

PipelineConfig::PipelineConfig() {
  train.steps = 12000;
  train.batch_size = 16;
  train.optimizer.learning_rate = 3e-3;
  train.optimizer.warmup_steps = 600;
  train.optimizer.final_lr_fraction = 0.1;
  tagger_model.layers = 1;
  tagger_model.hidden = 32;
  tagger_model.heads = 2;
  tagger_model.ff_dim = 64;
  tagger_model.max_seq = 64;
  tagger_train.optimizer.learning_rate = 3e-3;
}

void PipelineConfig::Validate() const {
  auto check_model = [](const char *section, ModelConfig m) {
    m.vocab_size = 1;
    try {
      m.Validate();
    } catch (const std::invalid_argument &e) {
      throw ConfigError(std::string("config ") + section + ": " + e.what());
    }
  };
  check_model("model", model);
  check_model("tagger", tagger_model);
  if (mode == ValueMode::kSlots && value_len != kNumSlots) {
    throw ConfigError("config model.value_len must be 11 in slot mode");
  }
  if (value_len < 1) throw ConfigError("config model.value_len must be positive");
  if (min_count < 1) throw ConfigError("config model.min_count must be positive");
  if (train.steps < 1 || train.batch_size < 1 || tagger_train.steps < 1 ||
      tagger_train.batch_size < 1) {
    throw ConfigError("config steps and batch sizes must be positive");
  }
  if (!(train.optimizer.learning_rate > 0.0) || !(tagger_train.optimizer.learning_rate > 0.0)) {
    throw ConfigError("config learning rates must be positive");
  }
  if (crf.steps < 0) throw ConfigError("config crf.steps must be non-negative");
  try {
    train.policy.Validate();
  } catch (const std::invalid_argument &e) {
    throw ConfigError(std::string("config train: ") + e.what());
  }
}

std::optional<std::string> GetEnv(const std::string &name) {
  const char *v = std::getenv(name.c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

PipelineConfig ParseConfig(std::string_view text, const EnvLookup &env) {
  toml::table table;
  try {
    table = toml::parse(text);
  } catch (const toml::parse_error &e) {
    throw ConfigError("config: " + std::string(e.description()));
  }
  PipelineConfig c;
  std::vector<Field> fields = Fields(&c);
  for (const auto &[section, node] : table) {
    const toml::table *sub = node.as_table();
    if (!sub) throw ConfigError("config: top-level key " + std::string(section.str()) +
                                " is not a section");
    for (const auto &[key, value] : *sub) {
      const std::string name = std::string(section.str()) + "." + std::string(key.str());
      bool found = false;
      for (Field &f : fields) {
        if (f.Name() == name) {
          f.set(NodeText(name, value));
          found = true;
          break;
        }
      }
      if (!found) throw ConfigError("config: unknown setting " + name);
    }
  }
  ApplyEnv(&c, env);
  c.Validate();
  return c;
}

PipelineConfig LoadConfig(const std::string &path, const EnvLookup &env) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return ParseConfig(os.str(), env);
}

PipelineConfig DefaultConfig(const EnvLookup &env) { return ParseConfig("", env); }

std::vector<std::pair<std::string, std::string>> ConfigEntries(const PipelineConfig &config) {
  PipelineConfig copy = config;
  std::vector<std::pair<std::string, std::string>> out;
  for (const Field &f : Fields(&copy)) out.emplace_back(f.Name(), f.get());
  return out;
}

nlohmann::ordered_json ConfigToJson(const PipelineConfig &config) {
  PipelineConfig copy = config;
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const Field &f : Fields(&copy)) {
    const std::string v = f.get();
    nlohmann::ordered_json &slot = j[f.section][f.key];
    switch (f.kind) {
      case Kind::kInt: slot = std::stoll(v); break;
      case Kind::kUint: slot = std::stoull(v); break;
      case Kind::kDouble: slot = std::stod(v); break;
      case Kind::kBool: slot = v == "true"; break;
      case Kind::kString: slot = v; break;
    }
  }
  return j;
}

}  // namespace tempnorm
