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

#include "tempnorm/timeml.h"

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace tempnorm {

using json = nlohmann::json;

std::string_view TimexTypeName(TimexType type) {
  switch (type) {
    case TimexType::kDate: return "DATE";
    case TimexType::kTime: return "TIME";
    case TimexType::kDuration: return "DURATION";
    case TimexType::kSet: return "SET";
  }
  return "DATE";
}

std::optional<TimexType> ParseTimexType(std::string_view name) {
  if (name == "DATE") return TimexType::kDate;
  if (name == "TIME") return TimexType::kTime;
  if (name == "DURATION") return TimexType::kDuration;
  if (name == "SET") return TimexType::kSet;
  return std::nullopt;
}

void ValidateDocument(const Document &doc) {
  const int n = static_cast<int>(doc.tokens.size());
  int prev_end = 0;
  for (const TimexAnnotation &a : doc.annotations) {
    if (a.start < 0 || a.end > n || a.start >= a.end) {
      throw DataError("document '" + doc.id + "': annotation span [" +
                      std::to_string(a.start) + ", " + std::to_string(a.end) +
                      ") outside token range");
    }
    if (a.start < prev_end) {
      throw DataError("document '" + doc.id +
                      "': annotations overlap or are unsorted");
    }
    prev_end = a.end;
  }
  if (doc.dct) Validate(*doc.dct);
}

ParseError::ParseError(const std::string &message, size_t offset)
    : DataError(message + " at byte " + std::to_string(offset)),
      offset_(offset) {}

namespace {

// Decodes one UTF-8 code point starting at text[i]; returns its length.
size_t DecodeUtf8(std::string_view text, size_t i, char32_t *cp) {
  unsigned char c = static_cast<unsigned char>(text[i]);
  size_t len = 1;
  char32_t value = c;
  if (c >= 0xF0 && c < 0xF8) {
    len = 4;
    value = c & 0x07;
  } else if (c >= 0xE0) {
    len = 3;
    value = c & 0x0F;
  } else if (c >= 0xC0) {
    len = 2;
    value = c & 0x1F;
  }
  if (len > 1 && c >= 0xF8) len = 1;
  if (i + len > text.size()) {
    *cp = c;
    return 1;
  }
  for (size_t k = 1; k < len; ++k) {
    value = (value << 6) | (static_cast<unsigned char>(text[i + k]) & 0x3F);
  }
  *cp = value;
  return len;
}

bool IsUnicodeSpace(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 ||
         cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

bool IsAsciiPunct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

void SplitChunk(std::string_view chunk, std::vector<std::string> *out) {
  size_t b = 0;
  size_t e = chunk.size();
  while (b < e && IsAsciiPunct(chunk[b])) {
    out->emplace_back(1, chunk[b]);
    ++b;
  }
  size_t trailing = e;
  while (trailing > b && IsAsciiPunct(chunk[trailing - 1])) --trailing;
  if (trailing > b) out->emplace_back(chunk.substr(b, trailing - b));
  for (size_t k = trailing; k < e; ++k) out->emplace_back(1, chunk[k]);
}

// Replaces the five predefined XML entities. `base` is the byte offset of
// `text` in the original input, for error reporting.
std::string DecodeEntities(std::string_view text, size_t base) {
  static const std::map<std::string_view, char> kEntities = {
      {"amp", '&'}, {"lt", '<'}, {"gt", '>'}, {"quot", '"'}, {"apos", '\''}};
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '&') {
      out.push_back(text[i]);
      continue;
    }
    size_t semi = text.find(';', i);
    if (semi == std::string_view::npos) {
      throw ParseError("unterminated entity", base + i);
    }
    auto it = kEntities.find(text.substr(i + 1, semi - i - 1));
    if (it == kEntities.end()) {
      throw ParseError("unsupported entity '" +
                           std::string(text.substr(i, semi - i + 1)) + "'",
                       base + i);
    }
    out.push_back(it->second);
    i = semi;
  }
  return out;
}

std::string EscapeText(std::string_view text, bool attribute) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attribute) {
          out += "&quot;";
        } else {
          out.push_back(c);
        }
        break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Tag {
  std::string name;
  bool closing = false;
  std::map<std::string, std::string> attributes;
  size_t begin = 0;  // offset of '<'
  size_t end = 0;    // offset just past '>'
};

bool IsNameChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-' || c == ':';
}

bool IsXmlSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Reads the tag starting at text[pos] == '<'.
Tag ReadTag(std::string_view text, size_t pos) {
  Tag tag;
  tag.begin = pos;
  size_t i = pos + 1;
  if (i < text.size() && text[i] == '/') {
    tag.closing = true;
    ++i;
  }
  size_t name_begin = i;
  while (i < text.size() && IsNameChar(text[i])) ++i;
  tag.name = std::string(text.substr(name_begin, i - name_begin));
  if (tag.name.empty()) throw ParseError("malformed tag", pos);
  while (true) {
    while (i < text.size() && IsXmlSpace(text[i])) ++i;
    if (i >= text.size()) throw ParseError("unterminated tag", pos);
    if (text[i] == '>') {
      tag.end = i + 1;
      return tag;
    }
    if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '>') {
      throw ParseError("self-closing <" + tag.name + "> not supported", pos);
    }
    if (tag.closing) throw ParseError("attributes on closing tag", i);
    size_t attr_begin = i;
    while (i < text.size() && IsNameChar(text[i])) ++i;
    std::string key(text.substr(attr_begin, i - attr_begin));
    if (key.empty()) throw ParseError("malformed attribute", attr_begin);
    while (i < text.size() && IsXmlSpace(text[i])) ++i;
    if (i >= text.size() || text[i] != '=') {
      throw ParseError("attribute '" + key + "' without value", attr_begin);
    }
    ++i;
    while (i < text.size() && IsXmlSpace(text[i])) ++i;
    if (i >= text.size() || (text[i] != '"' && text[i] != '\'')) {
      throw ParseError("unquoted attribute '" + key + "'", i);
    }
    char quote = text[i++];
    size_t value_begin = i;
    size_t close = text.find(quote, i);
    if (close == std::string_view::npos) {
      throw ParseError("unterminated attribute '" + key + "'", value_begin);
    }
    tag.attributes[key] = DecodeEntities(
        text.substr(value_begin, close - value_begin), value_begin);
    i = close + 1;
  }
}

void AppendTokens(std::string_view raw, size_t base,
                  std::vector<std::string> *tokens) {
  std::vector<std::string> more = Tokenize(DecodeEntities(raw, base));
  tokens->insert(tokens->end(), more.begin(), more.end());
}

// Parses the content of one document; `base` is its offset in the input.
void ParseBody(std::string_view text, size_t base, Document *doc) {
  size_t i = 0;
  size_t text_begin = 0;
  bool in_timex = false;
  TimexAnnotation current;
  size_t timex_offset = 0;
  while (i < text.size()) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    AppendTokens(text.substr(text_begin, i - text_begin), base + text_begin,
                 &doc->tokens);
    Tag tag = ReadTag(text, i);
    const size_t at = base + i;
    if (tag.name == "TIMEX3") {
      if (!tag.closing) {
        if (in_timex) throw ParseError("nested TIMEX3", at);
        auto type_it = tag.attributes.find("type");
        if (type_it == tag.attributes.end()) {
          throw ParseError("TIMEX3 without type attribute", at);
        }
        auto type = ParseTimexType(type_it->second);
        if (!type) {
          throw ParseError("unknown TIMEX3 type '" + type_it->second + "'", at);
        }
        auto value_it = tag.attributes.find("value");
        if (value_it == tag.attributes.end()) {
          throw ParseError("TIMEX3 without value attribute", at);
        }
        in_timex = true;
        timex_offset = at;
        current = TimexAnnotation{static_cast<int>(doc->tokens.size()), 0,
                                  *type, value_it->second};
      } else {
        if (!in_timex) throw ParseError("closing TIMEX3 without opening", at);
        current.end = static_cast<int>(doc->tokens.size());
        if (current.end == current.start) {
          throw ParseError("TIMEX3 with empty span", timex_offset);
        }
        doc->annotations.push_back(current);
        in_timex = false;
      }
    } else if (tag.name == "DOC") {
      throw ParseError("unexpected DOC element", at);
    }
    // Other elements (EVENT, SIGNAL, ...) are dropped, their text kept.
    i = tag.end;
    text_begin = i;
  }
  if (in_timex) throw ParseError("unclosed TIMEX3", timex_offset);
  AppendTokens(text.substr(text_begin), base + text_begin, &doc->tokens);
}

void ApplyDocAttributes(const Tag &tag, Document *doc) {
  if (auto it = tag.attributes.find("id"); it != tag.attributes.end()) {
    doc->id = it->second;
  }
  if (auto it = tag.attributes.find("lang"); it != tag.attributes.end()) {
    doc->lang = it->second;
  }
  if (auto it = tag.attributes.find("dct"); it != tag.attributes.end()) {
    auto date = TryParseDate(it->second);
    if (!date) throw ParseError("invalid dct '" + it->second + "'", tag.begin);
    doc->dct = *date;
  }
}

size_t SkipSpace(std::string_view text, size_t i) {
  while (i < text.size() && IsXmlSpace(text[i])) ++i;
  return i;
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  size_t chunk_begin = 0;
  size_t i = 0;
  while (i < text.size()) {
    char32_t cp;
    size_t len = DecodeUtf8(text, i, &cp);
    if (IsUnicodeSpace(cp)) {
      if (i > chunk_begin) {
        SplitChunk(text.substr(chunk_begin, i - chunk_begin), &tokens);
      }
      chunk_begin = i + len;
    }
    i += len;
  }
  if (text.size() > chunk_begin) {
    SplitChunk(text.substr(chunk_begin), &tokens);
  }
  return tokens;
}

Document ParseInline(std::string_view text) {
  Document doc;
  size_t start = SkipSpace(text, 0);
  if (text.substr(start, 4) == "<DOC" && start + 4 < text.size() &&
      !IsNameChar(text[start + 4])) {
    Tag open = ReadTag(text, start);
    ApplyDocAttributes(open, &doc);
    size_t close = text.rfind("</DOC>");
    if (close == std::string_view::npos || close < open.end) {
      throw ParseError("unclosed DOC", start);
    }
    if (SkipSpace(text, close + 6) != text.size()) {
      throw ParseError("content after </DOC>", close + 6);
    }
    ParseBody(text.substr(open.end, close - open.end), open.end, &doc);
  } else {
    ParseBody(text, 0, &doc);
  }
  ValidateDocument(doc);
  return doc;
}

std::vector<Document> ParseInlineCorpus(std::string_view text) {
  std::vector<Document> docs;
  size_t i = SkipSpace(text, 0);
  while (i < text.size()) {
    if (text.substr(i, 4) != "<DOC") throw ParseError("expected <DOC>", i);
    size_t close = text.find("</DOC>", i);
    if (close == std::string_view::npos) throw ParseError("unclosed DOC", i);
    Tag open = ReadTag(text, i);
    Document doc;
    ApplyDocAttributes(open, &doc);
    ParseBody(text.substr(open.end, close - open.end), open.end, &doc);
    ValidateDocument(doc);
    docs.push_back(std::move(doc));
    i = SkipSpace(text, close + 6);
  }
  return docs;
}

std::string SerializeInline(const Document &doc) {
  std::string out;
  const bool wrap = !doc.id.empty() || doc.dct.has_value() || !doc.lang.empty();
  if (wrap) {
    out += "<DOC id=\"" + EscapeText(doc.id, true) + "\"";
    if (!doc.lang.empty()) out += " lang=\"" + EscapeText(doc.lang, true) + "\"";
    if (doc.dct) out += " dct=\"" + FormatDate(*doc.dct) + "\"";
    out += ">";
  }
  size_t next = 0;
  for (size_t t = 0; t < doc.tokens.size(); ++t) {
    if (t > 0) out += ' ';
    if (next < doc.annotations.size() &&
        doc.annotations[next].start == static_cast<int>(t)) {
      const TimexAnnotation &a = doc.annotations[next];
      out += "<TIMEX3 type=\"";
      out += TimexTypeName(a.type);
      out += "\" value=\"" + EscapeText(a.value, true) + "\">";
    }
    out += EscapeText(doc.tokens[t], false);
    if (next < doc.annotations.size() &&
        doc.annotations[next].end == static_cast<int>(t) + 1) {
      out += "</TIMEX3>";
      ++next;
    }
  }
  if (wrap) out += "</DOC>";
  return out;
}

int BioLabelIndex(const BioTag &tag) {
  if (tag.kind == BioTag::Kind::kOutside) return 0;
  return 1 + 2 * static_cast<int>(tag.type) +
         (tag.kind == BioTag::Kind::kInside ? 1 : 0);
}

BioTag BioTagFromIndex(int index) {
  if (index <= 0 || index >= kNumBioLabels) return BioTag::O();
  auto type = static_cast<TimexType>((index - 1) / 2);
  return (index - 1) % 2 == 0 ? BioTag::B(type) : BioTag::I(type);
}

std::string BioTagName(const BioTag &tag) {
  switch (tag.kind) {
    case BioTag::Kind::kOutside: return "O";
    case BioTag::Kind::kBegin: return "B-" + std::string(TimexTypeName(tag.type));
    case BioTag::Kind::kInside: return "I-" + std::string(TimexTypeName(tag.type));
  }
  return "O";
}

std::vector<BioTag> ToBio(const Document &doc) {
  std::vector<BioTag> tags(doc.tokens.size(), BioTag::O());
  for (const TimexAnnotation &a : doc.annotations) {
    tags[a.start] = BioTag::B(a.type);
    for (int t = a.start + 1; t < a.end; ++t) tags[t] = BioTag::I(a.type);
  }
  return tags;
}

std::vector<TimexAnnotation> FromBio(const std::vector<BioTag> &tags,
                                     const std::vector<std::string> &tokens) {
  if (tags.size() != tokens.size()) {
    throw DataError("BIO tag count " + std::to_string(tags.size()) +
                    " does not match token count " +
                    std::to_string(tokens.size()));
  }
  std::vector<TimexAnnotation> out;
  bool open = false;
  for (size_t t = 0; t < tags.size(); ++t) {
    const BioTag &tag = tags[t];
    const bool continues = tag.kind == BioTag::Kind::kInside && open &&
                           out.back().type == tag.type;
    if (tag.kind == BioTag::Kind::kOutside) {
      open = false;
    } else if (continues) {
      out.back().end = static_cast<int>(t) + 1;
    } else {
      out.push_back({static_cast<int>(t), static_cast<int>(t) + 1, tag.type, ""});
      open = true;
    }
  }
  return out;
}

std::string DocumentToJsonLine(const Document &doc) {
  json j;
  j["id"] = doc.id;
  j["tokens"] = doc.tokens;
  j["dct"] = doc.dct ? json(FormatDate(*doc.dct)) : json(nullptr);
  json anns = json::array();
  for (const TimexAnnotation &a : doc.annotations) {
    anns.push_back({{"start", a.start},
                    {"end", a.end},
                    {"type", std::string(TimexTypeName(a.type))},
                    {"value", a.value}});
  }
  j["annotations"] = std::move(anns);
  if (!doc.lang.empty()) j["lang"] = doc.lang;
  return j.dump();
}

Document DocumentFromJsonLine(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  Document doc;
  try {
    doc.id = j.at("id").get<std::string>();
    doc.tokens = j.at("tokens").get<std::vector<std::string>>();
    if (j.contains("dct") && !j["dct"].is_null()) {
      doc.dct = ParseDate(j["dct"].get<std::string>());
    }
    if (j.contains("lang")) doc.lang = j["lang"].get<std::string>();
    for (const json &a : j.value("annotations", json::array())) {
      auto type = ParseTimexType(a.at("type").get<std::string>());
      if (!type) {
        throw DataError("document '" + doc.id + "': unknown type " +
                        a.at("type").dump());
      }
      doc.annotations.push_back({a.at("start").get<int>(),
                                 a.at("end").get<int>(), *type,
                                 a.value("value", std::string())});
    }
  } catch (const json::exception &e) {
    throw DataError(std::string("malformed document record: ") + e.what());
  } catch (const CalendarError &e) {
    throw DataError(std::string("malformed document record: ") + e.what());
  }
  ValidateDocument(doc);
  return doc;
}

std::vector<Document> ReadJsonl(std::istream &in) {
  std::vector<Document> docs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      docs.push_back(DocumentFromJsonLine(line));
    } catch (const DataError &e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::vector<Document> ReadJsonlFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return ReadJsonl(in);
}

void WriteJsonl(std::ostream &out, const std::vector<Document> &docs) {
  for (const Document &doc : docs) out << DocumentToJsonLine(doc) << '\n';
}

void WriteJsonlFile(const std::string &path, const std::vector<Document> &docs) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  WriteJsonl(out, docs);
}

}  // namespace tempnorm
