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

// Loaders for the committed test fixtures.

#ifndef TEMPNORM_TESTS_SUPPORT_FIXTURES_H_
#define TEMPNORM_TESTS_SUPPORT_FIXTURES_H_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef TEMPNORM_FIXTURE_DIR
#error "TEMPNORM_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace tempnorm::testing {

inline std::string FixturePath(const std::string &name) {
  return std::string(TEMPNORM_FIXTURE_DIR) + "/" + name;
}

inline std::string ReadFixture(const std::string &name) {
  std::ifstream in(FixturePath(name));
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct EasterRow {
  int year = 0;
  std::string gregorian;
  std::string orthodox;
};

inline std::vector<EasterRow> LoadEasterTable() {
  std::istringstream in(ReadFixture("easter_table.tsv"));
  std::vector<EasterRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    EasterRow row;
    fields >> row.year >> row.gregorian >> row.orthodox;
    rows.push_back(row);
  }
  return rows;
}

struct ConformanceCase {
  std::string name;
  bool expect_ok = false;
  int annotations = 0;
  std::string input;
};

// Cases separated by "=== name" headers; see timeml_conformance.txt.
inline std::vector<ConformanceCase> LoadConformanceCases() {
  std::istringstream in(ReadFixture("timeml_conformance.txt"));
  std::vector<ConformanceCase> cases;
  std::string line;
  bool in_body = false;
  while (std::getline(in, line)) {
    if (line.rfind("===", 0) == 0) {
      cases.push_back({line.substr(4), false, 0, ""});
      in_body = false;
    } else if (cases.empty()) {
      continue;
    } else if (!in_body && line.rfind("expect:", 0) == 0) {
      std::istringstream ex(line.substr(7));
      std::string verdict;
      ex >> verdict;
      cases.back().expect_ok = verdict == "ok";
      if (cases.back().expect_ok) ex >> cases.back().annotations;
    } else if (!in_body && line == "---") {
      in_body = true;
    } else if (in_body) {
      if (!cases.back().input.empty()) cases.back().input += "\n";
      cases.back().input += line;
    }
  }
  return cases;
}

}  // namespace tempnorm::testing

#endif  // TEMPNORM_TESTS_SUPPORT_FIXTURES_H_
