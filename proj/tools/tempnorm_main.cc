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

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data
// error, 3 numeric failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tempnorm/anchoring.h"
#include "tempnorm/checkpoint.h"
#include "tempnorm/config.h"
#include "tempnorm/evaluation.h"
#include "tempnorm/pipeline.h"
#include "tempnorm/slot_codec.h"
#include "tempnorm/timeml.h"
#include "tempnorm/weak_data.h"

namespace tempnorm {
namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void Log(const std::string &line) { std::cerr << line << std::endl; }

// Lines from the positional arguments, or from stdin when there are none.
std::vector<std::string> InputLines(const std::vector<std::string> &args) {
  if (!args.empty()) return args;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) lines.push_back(line);
  }
  return lines;
}

std::string Trim(const std::string &s) {
  const size_t b = s.find_first_not_of(" \t\r");
  const size_t e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

void WriteDocs(const std::string &path, const std::vector<Document> &docs) {
  if (path.empty() || path == "-") {
    WriteJsonl(std::cout, docs);
  } else {
    WriteJsonlFile(path, docs);
  }
}

void WriteText(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  out << text;
  if (!out) throw DataError("write failed for " + path);
}

PipelineConfig ConfigFrom(const std::string &path) {
  return path.empty() ? DefaultConfig() : LoadConfig(path);
}

template <typename E, typename ParseFn>
E ParseOption(const std::string &text, ParseFn parse, const char *what) {
  auto v = parse(text);
  if (!v) throw UsageError(std::string("unknown ") + what + ": " + text);
  return *v;
}

// Every subcommand's state lives here so CLI11 can bind to it.
struct Options {
  std::vector<std::string> items;
  std::string config;
  std::string data;
  std::string out;
  std::string model;
  std::string crf;
  std::string decode = "sequential";
  bool unrestricted = false;
  // anchor
  std::string dct;
  std::string tense = "unknown";
  int shrovetide_offset = -48;
  // synth-data
  std::string style = "news";
  int languages = 2;
  int docs = 100;
  uint64_t seed = 1;
  // evaluate
  std::string groups;
  std::string report;
  // pipeline
  bool train_first = false;
  std::string extraction;
  std::string output;
};

int Encode(const Options &o) {
  int failures = 0;
  for (const std::string &raw : InputLines(o.items)) {
    const std::string cir = Trim(raw);
    try {
      EncodedCir e = EncodeCir(cir);
      std::cout << CirClassName(e.cir_class);
      for (const std::string &s : e.slots.values) std::cout << '\t' << s;
      std::cout << '\n';
    } catch (const UnencodableCir &) {
      std::cerr << "cannot encode: " << cir << '\n';
      ++failures;
    }
  }
  return failures ? kExitData : 0;
}

int Decode(const Options &o) {
  for (const std::string &line : InputLines(o.items)) {
    std::istringstream is(line);
    std::vector<std::string> tokens;
    for (std::string tok; is >> tok;) tokens.push_back(tok);
    // Accept encode output, which leads with the class name.
    if (tokens.size() == kNumSlots + 1 && tokens[0].size() == 2 &&
        (tokens[0][0] == 'D' || tokens[0][0] == 'P')) {
      tokens.erase(tokens.begin());
    }
    SlotSequence slots;
    size_t n = 0;
    for (const std::string &tok : tokens) {
      if (n == slots.values.size()) throw DataError("more than 11 slot tokens: " + line);
      slots.values[n++] = tok;
    }
    if (n != slots.values.size()) throw DataError("expected 11 slot tokens: " + line);
    std::cout << DecodeSlots(slots).cir << '\n';
  }
  return 0;
}

int AnchorCommand(const Options &o) {
  AnchorContext ctx;
  std::optional<CalendarDate> dct = TryParseDate(o.dct);
  if (!dct) throw UsageError("--dct must be a date such as 2022-05-01");
  ctx.reference = *dct;
  ctx.tense = ParseOption<TenseHint>(o.tense, ParseTenseHint, "tense");
  AnchorOptions options;
  options.shrovetide_offset = o.shrovetide_offset;
  int failures = 0;
  for (const std::string &raw : InputLines(o.items)) {
    const std::string cir = Trim(raw);
    try {
      std::cout << Anchor(cir, ctx, options) << '\n';
    } catch (const DataError &e) {
      std::cerr << cir << ": " << e.what() << '\n';
      ++failures;
    }
  }
  return failures ? kExitData : 0;
}

int SynthData(const Options &o) {
  SynthOptions s;
  s.style = ParseOption<Style>(o.style, ParseStyle, "style");
  s.docs = o.docs;
  s.seed = o.seed;
  if (o.languages < 1 || o.docs < 1) throw UsageError("--languages and --docs must be positive");
  WriteDocs(o.out, GenerateCorpus(SyntheticGrammar::Default(o.languages), s));
  return 0;
}

int Train(const Options &o) {
  PipelineConfig c = ConfigFrom(o.config);
  std::vector<Document> docs = ReadJsonlFile(o.data);
  SaveNormalizer(o.out, TrainNormalizer(docs, c, Log));
  return 0;
}

int TrainTaggerCommand(const Options &o) {
  PipelineConfig c = ConfigFrom(o.config);
  std::vector<Document> docs = ReadJsonlFile(o.data);
  SaveTagger(o.out, TrainTaggerModel(docs, c, Log));
  return 0;
}

int TrainCrfCommand(const Options &o) {
  PipelineConfig c = ConfigFrom(o.config);
  MlmModel model = LoadNormalizer(o.model);
  SaveCrf(o.out, TrainCrfForNormalizer(model, ReadJsonlFile(o.data), c));
  return 0;
}

int TagCommand(const Options &o) {
  TaggerModel tagger = LoadTagger(o.model);
  std::vector<Document> docs = ReadJsonlFile(o.data);
  for (Document &d : docs) d.annotations = Tag(tagger, d);
  WriteDocs(o.out, docs);
  return 0;
}

int NormalizeCommand(const Options &o) {
  MlmModel model = LoadNormalizer(o.model);
  DecodeOptions options;
  options.strategy = ParseOption<DecodeStrategy>(o.decode, ParseDecodeStrategy, "decoder");
  options.restricted = !o.unrestricted;
  CrfModel crf;
  if (options.strategy == DecodeStrategy::kViterbi) {
    if (o.crf.empty()) throw UsageError("--decode viterbi needs --crf");
    crf = LoadCrf(o.crf);
    options.crf = &crf;
  }
  std::vector<Document> docs = ReadJsonlFile(o.data);
  int missing = 0;
  for (Document &d : docs) {
    std::vector<std::optional<std::string>> cirs = NormalizeDocument(model, d, options);
    for (size_t i = 0; i < cirs.size(); ++i) {
      d.annotations[i].value = cirs[i].value_or("");
      missing += !cirs[i];
    }
  }
  if (missing) Log(std::to_string(missing) + " annotations could not be normalized");
  WriteDocs(o.out, docs);
  return 0;
}

int PipelineCommand(const Options &o) {
  PipelineConfig c = ConfigFrom(o.config);
  if (!o.data.empty()) c.data = o.data;
  if (!o.report.empty()) c.report_path = o.report;
  if (!o.output.empty()) c.output_path = o.output;
  if (!o.extraction.empty()) {
    c.extraction = ParseOption<ExtractionMode>(o.extraction, ParseExtractionMode, "extraction");
  }
  if (!o.decode.empty()) {
    c.decode = ParseOption<DecodeStrategy>(o.decode, ParseDecodeStrategy, "decoder");
  }
  if (o.train_first) c.train_first = true;
  if (c.data.empty()) throw UsageError("no input data: set paths.data or --data");

  std::vector<Document> docs = ReadJsonlFile(c.data);
  const bool need_tagger = c.extraction == ExtractionMode::kModel;
  const bool need_norm = c.normalizer_source == NormalizerSource::kModel;
  const bool need_crf = need_norm && c.decode == DecodeStrategy::kViterbi;
  TaggerModel tagger;
  MlmModel norm;
  CrfModel crf;
  if (c.train_first) {
    std::vector<Document> train = c.train_data.empty() ? docs : ReadJsonlFile(c.train_data);
    if (need_norm) {
      norm = TrainNormalizer(train, c, Log);
      if (!c.normalizer_path.empty()) SaveNormalizer(c.normalizer_path, norm);
    }
    if (need_tagger) {
      tagger = TrainTaggerModel(train, c, Log);
      if (!c.tagger_path.empty()) SaveTagger(c.tagger_path, tagger);
    }
    if (need_crf) {
      crf = TrainCrfForNormalizer(norm, train, c);
      if (!c.crf_path.empty()) SaveCrf(c.crf_path, crf);
    }
  } else {
    auto require = [](const std::string &path, const char *what) {
      if (path.empty()) {
        throw UsageError(std::string("no ") + what + " checkpoint: set paths." + what +
                         " or use --train-first");
      }
    };
    if (need_norm) {
      require(c.normalizer_path, "normalizer");
      norm = LoadNormalizer(c.normalizer_path);
    }
    if (need_tagger) {
      require(c.tagger_path, "tagger");
      tagger = LoadTagger(c.tagger_path);
    }
    if (need_crf) {
      require(c.crf_path, "crf");
      crf = LoadCrf(c.crf_path);
    }
  }
  std::map<std::string, std::vector<std::string>> groups;
  if (!c.groups_path.empty()) groups = ReadGroupsFile(c.groups_path);
  PipelineModels models;
  if (need_tagger) models.tagger = &tagger;
  if (need_norm) models.normalizer = &norm;
  if (need_crf) models.crf = &crf;
  PipelineResult result = RunPipeline(docs, c, models, groups);
  for (const StageError &e : result.errors) {
    Log(e.document + " [" + e.stage + "] " + e.message);
  }
  if (!c.output_path.empty()) WriteJsonlFile(c.output_path, result.predictions);
  WriteText(c.report_path, PipelineReportJson(result, c).dump(2) + "\n");
  return 0;
}

int EvaluateCommand(const Options &o) {
  if (o.items.size() != 2) throw UsageError("evaluate needs GOLD and PRED files");
  std::vector<Document> gold = ReadJsonlFile(o.items[0]);
  std::vector<Document> pred = ReadJsonlFile(o.items[1]);
  std::map<std::string, std::vector<std::string>> groups;
  if (!o.groups.empty()) groups = ReadGroupsFile(o.groups);
  nlohmann::ordered_json j;
  j["metrics"] = ReportToJson(Evaluate(gold, pred));
  std::map<std::string, EvalReport> by = EvaluateByLanguage(gold, pred);
  nlohmann::ordered_json langs = nlohmann::ordered_json::object();
  for (const auto &[lang, rep] : by) langs[lang] = ReportToJson(rep);
  j["languages"] = langs;
  if (!by.empty()) j["averages"] = AveragesToJson(Aggregate(by, groups));
  WriteText(o.report, j.dump(2) + "\n");
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{"Temporal expression extraction, normalization and anchoring"};
  app.require_subcommand(1);
  Options o;
  int (*run)(const Options &) = nullptr;
  auto sub = [&](const char *name, const char *help, int (*fn)(const Options &)) {
    CLI::App *s = app.add_subcommand(name, help);
    s->callback([&run, fn] { run = fn; });
    return s;
  };

  CLI::App *encode = sub("encode", "CIR strings to slot sequences", Encode);
  encode->add_option("cir", o.items, "CIRs (default: one per stdin line)");

  CLI::App *decode = sub("decode", "slot sequences to CIR strings", Decode);
  decode->add_option("slots", o.items, "lines of 11 slot tokens (default: stdin)");

  CLI::App *anchor = sub("anchor", "anchor CIRs to TimeML values", AnchorCommand);
  anchor->add_option("cir", o.items, "CIRs (default: one per stdin line)");
  anchor->add_option("--dct", o.dct, "reference date YYYY-MM-DD")->required();
  anchor->add_option("--tense", o.tense, "unknown|past|present|future");
  anchor->add_option("--shrovetide-offset", o.shrovetide_offset, "days from Orthodox Easter");

  CLI::App *synth = sub("synth-data", "generate a synthetic corpus", SynthData);
  synth->add_option("--style", o.style, "news|narrative");
  synth->add_option("--languages", o.languages, "number of pseudo-languages");
  synth->add_option("--docs", o.docs, "number of documents");
  synth->add_option("--seed", o.seed, "random seed");
  synth->add_option("--out", o.out, "output JSONL (default: stdout)");

  CLI::App *train = sub("train", "train the normalizer", Train);
  train->add_option("--config", o.config, "TOML config");
  train->add_option("--data", o.data, "training JSONL")->required();
  train->add_option("--out", o.out, "checkpoint path")->required();

  CLI::App *train_tagger = sub("train-tagger", "train the span tagger", TrainTaggerCommand);
  train_tagger->add_option("--config", o.config, "TOML config");
  train_tagger->add_option("--data", o.data, "training JSONL")->required();
  train_tagger->add_option("--out", o.out, "checkpoint path")->required();

  CLI::App *train_crf = sub("train-crf", "fit CRF transitions on normalizer scores",
                            TrainCrfCommand);
  train_crf->add_option("--config", o.config, "TOML config");
  train_crf->add_option("--model", o.model, "normalizer checkpoint")->required();
  train_crf->add_option("--data", o.data, "training JSONL")->required();
  train_crf->add_option("--out", o.out, "CRF path")->required();

  CLI::App *tag = sub("tag", "predict spans", TagCommand);
  tag->add_option("--model", o.model, "tagger checkpoint")->required();
  tag->add_option("--data", o.data, "input JSONL")->required();
  tag->add_option("--out", o.out, "output JSONL (default: stdout)");

  CLI::App *normalize = sub("normalize", "predict CIRs for given spans", NormalizeCommand);
  normalize->add_option("--model", o.model, "normalizer checkpoint")->required();
  normalize->add_option("--data", o.data, "input JSONL with spans")->required();
  normalize->add_option("--decode", o.decode, "sequential|simultaneous|viterbi");
  normalize->add_option("--crf", o.crf, "CRF file for viterbi decoding");
  normalize->add_flag("--unrestricted", o.unrestricted, "allow any token at value positions");
  normalize->add_option("--out", o.out, "output JSONL (default: stdout)");

  CLI::App *pipeline = sub("pipeline", "extract, normalize, anchor and score", PipelineCommand);
  pipeline->add_option("--config", o.config, "TOML config");
  pipeline->add_option("--data", o.data, "input JSONL (overrides paths.data)");
  pipeline->add_option("--report", o.report, "report JSON (overrides paths.report)");
  pipeline->add_option("--output", o.output, "annotated JSONL (overrides paths.output)");
  pipeline->add_option("--extraction", o.extraction, "model|gold");
  pipeline->add_option("--decode", o.decode, "sequential|simultaneous|viterbi");
  pipeline->add_flag("--train-first", o.train_first, "train models before running");

  CLI::App *evaluate = sub("evaluate", "score predictions against gold", EvaluateCommand);
  evaluate->add_option("files", o.items, "GOLD.jsonl PRED.jsonl")->expected(2);
  evaluate->add_option("--group-file", o.groups, "TOML language groups");
  evaluate->add_option("--report", o.report, "report JSON (default: stdout)");

  // The pipeline decode flag has no default so the config value stands.
  pipeline->preparse_callback([&o](size_t) { o.decode.clear(); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  try {
    return run(o);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericError &e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DataError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const CalendarError &e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace
}  // namespace tempnorm

int main(int argc, char **argv) { return tempnorm::Main(argc, argv); }
