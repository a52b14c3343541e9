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

// Python bindings. Documents cross the boundary as JSON lines so the
// Python side needs no mirror of the C++ structs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "tempnorm/anchoring.h"
#include "tempnorm/checkpoint.h"
#include "tempnorm/decoding.h"
#include "tempnorm/evaluation.h"
#include "tempnorm/slot_codec.h"
#include "tempnorm/timeml.h"

namespace py = pybind11;

namespace tempnorm {
namespace {

std::vector<Document> FromLines(const std::vector<std::string> &lines) {
  std::vector<Document> docs;
  docs.reserve(lines.size());
  for (const std::string &line : lines) docs.push_back(DocumentFromJsonLine(line));
  return docs;
}

py::dict Encode(const std::string &cir) {
  EncodedCir e = EncodeCir(cir);
  py::dict out;
  out["class"] = std::string(CirClassName(e.cir_class));
  py::list slots;
  for (const std::string &v : e.slots.values) slots.append(v);
  out["slots"] = slots;
  return out;
}

std::string Decode(const std::vector<std::string> &values) {
  if (values.size() != static_cast<size_t>(kNumSlots)) {
    throw py::value_error("expected " + std::to_string(kNumSlots) + " slot values");
  }
  SlotSequence slots;
  for (int i = 0; i < kNumSlots; ++i) slots.values[i] = values[i];
  return DecodeSlots(slots).cir;
}

std::string AnchorCir(const std::string &cir, const std::string &reference,
                      const std::vector<std::string> &previous_dates, const std::string &tense) {
  AnchorContext ctx;
  ctx.reference = ParseDate(reference);
  for (const std::string &d : previous_dates) ctx.previous_dates.push_back(ParseDate(d));
  std::optional<TenseHint> hint = ParseTenseHint(tense);
  if (!hint) throw py::value_error("unknown tense: " + tense);
  ctx.tense = *hint;
  return Anchor(cir, ctx);
}

std::string EvaluateLines(const std::vector<std::string> &gold,
                          const std::vector<std::string> &pred) {
  return ReportToJson(Evaluate(FromLines(gold), FromLines(pred))).dump();
}

class Normalizer {
 public:
  explicit Normalizer(const std::string &path) : model_(LoadNormalizer(path)) {}

  void LoadCrf(const std::string &path) { crf_ = tempnorm::LoadCrf(path); }

  std::vector<std::optional<std::string>> Normalize(const std::string &doc_line,
                                                    const std::string &strategy) {
    std::optional<DecodeStrategy> s = ParseDecodeStrategy(strategy);
    if (!s) throw py::value_error("unknown strategy: " + strategy);
    if (*s == DecodeStrategy::kViterbi && !crf_) {
      throw py::value_error("viterbi decoding needs load_crf() first");
    }
    DecodeOptions options;
    options.strategy = *s;
    options.crf = crf_ ? &*crf_ : nullptr;
    return NormalizeDocument(model_, DocumentFromJsonLine(doc_line), options);
  }

  std::string mode() const { return std::string(ValueModeName(model_.mode)); }

 private:
  MlmModel model_;
  std::optional<CrfModel> crf_;
};

}  // namespace
}  // namespace tempnorm

PYBIND11_MODULE(_tempnorm, m) {
  using namespace tempnorm;
  m.doc() = "Temporal expression normalization";

  static py::exception<DataError> data_error(m, "DataError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const DataError &e) {
      py::set_error(data_error, e.what());
    } catch (const CalendarError &e) {
      py::set_error(data_error, e.what());
    }
  });

  m.attr("NUM_SLOTS") = kNumSlots;
  m.def("encode", &Encode, py::arg("cir"),
        "Slot encoding of a CIR as {'class': ..., 'slots': [11 values]}.");
  m.def("decode", &Decode, py::arg("slots"), "CIR spelled by 11 slot values.");
  m.def("anchor", &AnchorCir, py::arg("cir"), py::arg("reference"),
        py::arg("previous_dates") = std::vector<std::string>{}, py::arg("tense") = "unknown",
        "TimeML value of a CIR against a reference date.");
  m.def("parse_inline", [](const std::string &text) { return DocumentToJsonLine(ParseInline(text)); },
        py::arg("text"), "JSON line of a document with inline TIMEX3 markup.");
  m.def("evaluate_json", &EvaluateLines, py::arg("gold"), py::arg("pred"),
        "Report JSON for parallel lists of gold and predicted JSON lines.");

  py::class_<Normalizer>(m, "Normalizer")
      .def(py::init<const std::string &>(), py::arg("path"))
      .def("load_crf", &Normalizer::LoadCrf, py::arg("path"))
      .def("normalize", &Normalizer::Normalize, py::arg("document"),
           py::arg("strategy") = "sequential")
      .def_property_readonly("mode", &Normalizer::mode);
}
