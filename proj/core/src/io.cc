// Copyright 2026 The xlrep Authors.
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

#include "xlrep/io.h"

#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <string_view>

#include "xlrep/errors.h"

namespace xlrep::io {
namespace {

// Reads lines, dropping a trailing '\r', and tracks the line number.
class LineReader {
 public:
  explicit LineReader(std::istream &in) : in_(in) {}

  bool Next(std::string *line) {
    if (!std::getline(in_, *line)) return false;
    if (!line->empty() && line->back() == '\r') line->pop_back();
    ++number_;
    return true;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream &in_;
  std::size_t number_ = 0;
};

std::vector<std::string_view> SplitWhitespace(std::string_view s) {
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) parts.push_back(s.substr(i, j - i));
    i = j;
  }
  return parts;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool ParseDouble(std::string_view s, double *value) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *value);
  return ec == std::errc() && ptr == s.data() + s.size() &&
         std::isfinite(*value);
}

template <typename Int>
bool ParseInt(std::string_view s, Int *value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *value);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::string FormatDouble(double value) {
  std::array<char, 64> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

EmbeddingSpace ReadVec(std::istream &in) {
  LineReader reader(in);
  std::string line;
  if (!reader.Next(&line)) throw ParseError(1, "missing 'n d' header");
  auto header = SplitWhitespace(line);
  long long n = 0;
  long long d = 0;
  if (header.size() != 2 || !ParseInt(header[0], &n) ||
      !ParseInt(header[1], &d) || n < 0 || d < 1) {
    throw ParseError(1, "expected header 'n d' with n >= 0, d >= 1");
  }
  std::vector<std::string> items;
  items.reserve(n);
  Eigen::MatrixXd vectors(d, n);
  std::unordered_map<std::string, std::size_t> seen;
  while (reader.Next(&line)) {
    auto fields = SplitWhitespace(line);
    if (fields.empty()) continue;
    if (static_cast<long long>(items.size()) == n) {
      throw ParseError(reader.number(), "more rows than declared");
    }
    if (static_cast<long long>(fields.size()) != d + 1) {
      throw ParseError(reader.number(),
                       "expected " + std::to_string(d) + " values, got " +
                           std::to_string(fields.size() - 1));
    }
    std::string token(fields[0]);
    if (!seen.emplace(token, reader.number()).second) {
      throw ParseError(reader.number(), "duplicate token '" + token + "'");
    }
    const Eigen::Index col = static_cast<Eigen::Index>(items.size());
    for (long long k = 0; k < d; ++k) {
      double v;
      if (!ParseDouble(fields[k + 1], &v)) {
        throw ParseError(reader.number(), "non-numeric value '" +
                                              std::string(fields[k + 1]) +
                                              "'");
      }
      vectors(k, col) = v;
    }
    items.push_back(std::move(token));
  }
  if (static_cast<long long>(items.size()) != n) {
    throw ParseError(reader.number(),
                     "declared " + std::to_string(n) + " rows, found " +
                         std::to_string(items.size()));
  }
  return EmbeddingSpace(std::move(items), std::move(vectors));
}

void WriteVec(std::ostream &out, const EmbeddingSpace &space) {
  out << space.size() << ' ' << space.dimension() << '\n';
  for (Eigen::Index j = 0; j < space.size(); ++j) {
    out << space.items()[j];
    for (Eigen::Index k = 0; k < space.dimension(); ++k) {
      out << ' ' << FormatDouble(space.vectors()(k, j));
    }
    out << '\n';
  }
}

std::vector<LinkSet> ReadPharaoh(
    std::istream &in, const std::vector<std::pair<int, int>> *lengths) {
  LineReader reader(in);
  std::string line;
  std::vector<LinkSet> result;
  while (reader.Next(&line)) {
    std::vector<Link> links;
    for (std::string_view pair : SplitWhitespace(line)) {
      std::size_t dash = pair.find('-');
      int i;
      int j;
      // Possible-link markers ("i?j") are not part of this format.
      if (dash == std::string_view::npos ||
          !ParseInt(pair.substr(0, dash), &i) ||
          !ParseInt(pair.substr(dash + 1), &j)) {
        throw ParseError(reader.number(),
                         "malformed link '" + std::string(pair) + "'");
      }
      if (i < 0 || j < 0) {
        throw ParseError(reader.number(), "negative index in '" +
                                              std::string(pair) + "'");
      }
      links.emplace_back(i, j);
    }
    try {
      if (lengths) {
        if (result.size() >= lengths->size()) {
          throw ValidationError("no sentence lengths for this line");
        }
        const auto &[src, tgt] = (*lengths)[result.size()];
        LinkSet set(src, tgt);
        for (const Link &l : links) set.Add(l);
        result.push_back(std::move(set));
      } else {
        result.push_back(LinkSet::FromLinks(links));
      }
    } catch (const ParseError &) {
      throw;
    } catch (const ValidationError &e) {
      throw ParseError(reader.number(), e.what());
    }
  }
  if (lengths && result.size() != lengths->size()) {
    throw ParseError(reader.number(),
                     "expected " + std::to_string(lengths->size()) +
                         " alignment lines, found " +
                         std::to_string(result.size()));
  }
  return result;
}

void WritePharaoh(std::ostream &out, const std::vector<LinkSet> &links) {
  for (const LinkSet &set : links) {
    bool first = true;
    for (const auto &[i, j] : set.links()) {
      if (!first) out << ' ';
      out << i << '-' << j;
      first = false;
    }
    out << '\n';
  }
}

namespace {

constexpr int kConlluColumns = 10;

// Converts one buffered CoNLL-U block into a sentence.
AnnotatedSentence FinishConllu(
    std::vector<std::pair<std::size_t, std::vector<std::string>>> &words,
    AnnotatedSentence sentence, std::size_t first_line) {
  const std::size_t n = words.size();
  std::vector<std::string> pos(n);
  std::vector<std::string> deprels(n);
  std::vector<int> heads(n, 0);
  bool any_pos = false;
  bool any_deprel = false;
  bool any_head = false;
  bool all_heads = true;
  for (std::size_t i = 0; i < n; ++i) {
    auto &[line_no, cols] = words[i];
    long long id;
    if (!ParseInt(std::string_view(cols[0]), &id) ||
        id != static_cast<long long>(i) + 1) {
      throw ParseError(line_no, "expected word ID " + std::to_string(i + 1) +
                                    ", got '" + cols[0] + "'");
    }
    sentence.tokens.push_back(cols[1]);
    pos[i] = cols[3];
    any_pos |= cols[3] != "_";
    deprels[i] = cols[7];
    any_deprel |= cols[7] != "_";
    if (cols[6] == "_") {
      all_heads = false;
    } else {
      if (!ParseInt(std::string_view(cols[6]), &heads[i])) {
        throw ParseError(line_no, "non-integer HEAD '" + cols[6] + "'");
      }
      any_head = true;
    }
    sentence.conllu.columns.push_back(
        {cols[2], cols[4], cols[5], cols[8], cols[9]});
  }
  if (any_head && !all_heads) {
    for (auto &[line_no, cols] : words) {
      if (cols[6] == "_") {
        throw ParseError(line_no, "non-integer HEAD '_'");
      }
    }
  }
  if (any_pos) sentence.pos = std::move(pos);
  if (any_head) sentence.heads = std::move(heads);
  if (any_deprel) sentence.deprels = std::move(deprels);
  try {
    sentence.Validate();
  } catch (const ValidationError &e) {
    throw ParseError(first_line, e.what());
  }
  return sentence;
}

}  // namespace

std::vector<AnnotatedSentence> ReadConllu(std::istream &in) {
  LineReader reader(in);
  std::string line;
  std::vector<AnnotatedSentence> result;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> words;
  AnnotatedSentence current;
  std::size_t first_line = 0;
  bool open = false;
  auto flush = [&]() {
    if (open) {
      result.push_back(FinishConllu(words, std::move(current), first_line));
    }
    words.clear();
    current = AnnotatedSentence();
    open = false;
  };
  while (reader.Next(&line)) {
    if (line.empty()) {
      flush();
      continue;
    }
    if (!open) {
      open = true;
      first_line = reader.number();
    }
    if (line.front() == '#') {
      if (!words.empty() || !current.conllu.lines.empty()) {
        throw ParseError(reader.number(), "comment inside sentence");
      }
      current.conllu.comments.push_back(line);
      continue;
    }
    auto fields = Split(line, '\t');
    if (fields.size() != kConlluColumns) {
      throw ParseError(reader.number(),
                       "expected 10 columns, got " +
                           std::to_string(fields.size()));
    }
    std::string_view id = fields[0];
    if (id.find('-') != std::string_view::npos ||
        id.find('.') != std::string_view::npos) {
      current.conllu.lines.emplace_back(words.size(), line);
      continue;
    }
    std::vector<std::string> cols(fields.begin(), fields.end());
    words.emplace_back(reader.number(), std::move(cols));
  }
  flush();
  return result;
}

namespace {

void WriteConlluSentence(std::ostream &out, const AnnotatedSentence &s,
                         const std::vector<std::string> &heads,
                         const std::vector<std::string> &deprels) {
  for (const std::string &c : s.conllu.comments) out << c << '\n';
  std::size_t extra = 0;
  const auto &lines = s.conllu.lines;
  for (std::size_t i = 0; i < s.size(); ++i) {
    while (extra < lines.size() && lines[extra].first <= i) {
      out << lines[extra++].second << '\n';
    }
    static const std::vector<std::string> kBlank(5, "_");
    const std::vector<std::string> &cols =
        i < s.conllu.columns.size() ? s.conllu.columns[i] : kBlank;
    out << i + 1 << '\t' << s.tokens[i] << '\t' << cols[0] << '\t'
        << (s.pos ? (*s.pos)[i] : "_") << '\t' << cols[1] << '\t' << cols[2]
        << '\t' << heads[i] << '\t' << deprels[i] << '\t' << cols[3] << '\t'
        << cols[4] << '\n';
  }
  while (extra < lines.size()) out << lines[extra++].second << '\n';
  out << '\n';
}

}  // namespace

void WriteConllu(std::ostream &out,
                 const std::vector<AnnotatedSentence> &sentences) {
  for (const AnnotatedSentence &s : sentences) {
    s.Validate();
    std::vector<std::string> heads(s.size(), "_");
    std::vector<std::string> deprels(s.size(), "_");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.heads) heads[i] = std::to_string((*s.heads)[i]);
      if (s.deprels) deprels[i] = (*s.deprels)[i];
    }
    WriteConlluSentence(out, s, heads, deprels);
  }
}

void WriteConlluPartial(
    std::ostream &out, const AnnotatedSentence &sentence,
    const std::vector<std::optional<int>> &heads,
    const std::vector<std::optional<std::string>> &deprels) {
  if (heads.size() != sentence.size() || deprels.size() != sentence.size()) {
    throw ValidationError("partial layers do not match token count");
  }
  std::vector<std::string> h(sentence.size(), "_");
  std::vector<std::string> r(sentence.size(), "_");
  for (std::size_t i = 0; i < sentence.size(); ++i) {
    if (heads[i]) h[i] = std::to_string(*heads[i]);
    if (deprels[i]) r[i] = *deprels[i];
  }
  WriteConlluSentence(out, sentence, h, r);
}

namespace {

constexpr std::string_view kPvecMagic = "PVEC 1";

void AppendLittleEndian(std::string *out, float value) {
  const std::uint32_t bits = std::bit_cast<std::uint32_t>(value);
  for (int b = 0; b < 4; ++b) {
    out->push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
  }
}

float LoadLittleEndian(const unsigned char *p) {
  std::uint32_t bits = 0;
  for (int b = 0; b < 4; ++b) bits |= std::uint32_t{p[b]} << (8 * b);
  return std::bit_cast<float>(bits);
}

}  // namespace

ParamVector ReadPvec(std::istream &in) {
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  std::size_t line_no = 0;
  auto next_line = [&](std::string_view *line) {
    std::size_t end = bytes.find('\n', pos);
    if (end == std::string::npos) return false;
    *line = std::string_view(bytes).substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return true;
  };
  std::string_view line;
  if (!next_line(&line) || line != kPvecMagic) {
    throw ParseError(1, "bad magic: expected 'PVEC 1'");
  }
  struct Header {
    std::string name;
    std::vector<std::int64_t> shape;
    std::size_t count;
  };
  std::vector<Header> headers;
  std::size_t total = 0;
  while (true) {
    if (!next_line(&line)) {
      throw ParseError(line_no + 1, "missing blank line after header");
    }
    if (line.empty()) break;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw ParseError(line_no, "expected 'name<TAB>dims'");
    }
    Header h{std::string(line.substr(0, tab)), {}, 1};
    std::string_view dims = line.substr(tab + 1);
    if (!dims.empty()) {
      for (std::string_view d : Split(dims, ',')) {
        std::int64_t v;
        if (!ParseInt(d, &v) || v < 0) {
          throw ParseError(line_no, "bad dimension '" + std::string(d) + "'");
        }
        h.shape.push_back(v);
        h.count *= static_cast<std::size_t>(v);
      }
    }
    total += h.count;
    headers.push_back(std::move(h));
  }
  const std::size_t payload = bytes.size() - pos;
  if (payload != total * 4) {
    throw ParseError(0, "declared payload of " + std::to_string(total * 4) +
                            " bytes, found " + std::to_string(payload));
  }
  ParamVector params;
  const auto *data = reinterpret_cast<const unsigned char *>(bytes.data());
  for (Header &h : headers) {
    std::vector<double> values(h.count);
    for (std::size_t k = 0; k < h.count; ++k, pos += 4) {
      values[k] = LoadLittleEndian(data + pos);
    }
    try {
      params.Add(std::move(h.name), std::move(h.shape), std::move(values));
    } catch (const ValidationError &e) {
      throw ParseError(0, e.what());
    }
  }
  return params;
}

void WritePvec(std::ostream &out, const ParamVector &params) {
  std::string buf(kPvecMagic);
  buf += '\n';
  for (const ParamEntry &e : params.entries()) {
    buf += e.name;
    buf += '\t';
    for (std::size_t k = 0; k < e.shape.size(); ++k) {
      if (k) buf += ',';
      buf += std::to_string(e.shape[k]);
    }
    buf += '\n';
  }
  buf += '\n';
  for (const ParamEntry &e : params.entries()) {
    for (double v : e.data) {
      const float f = static_cast<float>(v);
      if (!std::isfinite(f)) {
        throw ValidationError("value of '" + e.name +
                              "' does not fit in float32");
      }
      AppendLittleEndian(&buf, f);
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

WeightedDictionary ReadDictionary(std::istream &in) {
  LineReader reader(in);
  std::string line;
  WeightedDictionary dict;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    auto fields = Split(line, '\t');
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(reader.number(), "expected 2 or 3 columns");
    }
    double weight = 1.0;
    if (fields.size() == 3 && !ParseDouble(fields[2], &weight)) {
      throw ParseError(reader.number(),
                       "bad weight '" + std::string(fields[2]) + "'");
    }
    try {
      dict.Add(std::string(fields[0]), std::string(fields[1]), weight);
    } catch (const ValidationError &e) {
      throw ParseError(reader.number(), e.what());
    }
  }
  try {
    dict.Validate();
  } catch (const ValidationError &e) {
    throw ParseError(0, e.what());
  }
  return dict;
}

void WriteDictionary(std::ostream &out, const WeightedDictionary &dict) {
  for (const std::string &source : dict.sources()) {
    for (const Translation &t : *dict.Find(source)) {
      out << source << '\t' << t.target << '\t' << FormatDouble(t.weight)
          << '\n';
    }
  }
}

std::vector<AnnotatedSentence> ReadBio(std::istream &in) {
  LineReader reader(in);
  std::string line;
  std::vector<AnnotatedSentence> result;
  AnnotatedSentence current;
  current.bio.emplace();
  auto flush = [&]() {
    if (!current.tokens.empty()) result.push_back(std::move(current));
    current = AnnotatedSentence();
    current.bio.emplace();
  };
  while (reader.Next(&line)) {
    if (line.empty()) {
      flush();
      continue;
    }
    auto fields = Split(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(reader.number(), "expected 'token<TAB>label'");
    }
    current.tokens.emplace_back(fields[0]);
    current.bio->emplace_back(fields[1]);
  }
  flush();
  return result;
}

void WriteBio(std::ostream &out,
              const std::vector<AnnotatedSentence> &sentences) {
  for (const AnnotatedSentence &s : sentences) {
    if (!s.bio || s.bio->size() != s.size()) {
      throw ValidationError("sentence has no BIO layer");
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      out << s.tokens[i] << '\t' << (*s.bio)[i] << '\n';
    }
    out << '\n';
  }
}

std::vector<std::vector<std::string>> ReadTokenized(std::istream &in) {
  LineReader reader(in);
  std::string line;
  std::vector<std::vector<std::string>> result;
  while (reader.Next(&line)) {
    auto parts = SplitWhitespace(line);
    result.emplace_back(parts.begin(), parts.end());
  }
  return result;
}

void WriteTokenized(std::ostream &out,
                    const std::vector<std::vector<std::string>> &sentences) {
  for (const auto &tokens : sentences) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out << ' ';
      out << tokens[i];
    }
    out << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> ReadWordPairs(
    std::istream &in) {
  LineReader reader(in);
  std::string line;
  std::vector<std::pair<std::string, std::string>> pairs;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    auto fields = Split(line, '\t');
    if (fields.size() == 1) fields = SplitWhitespace(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(reader.number(), "expected 'source<TAB>target'");
    }
    pairs.emplace_back(fields[0], fields[1]);
  }
  return pairs;
}

std::vector<std::pair<std::string, double>> ReadCounts(std::istream &in) {
  LineReader reader(in);
  std::string line;
  std::vector<std::pair<std::string, double>> counts;
  while (reader.Next(&line)) {
    if (line.empty()) continue;
    auto fields = Split(line, '\t');
    double count;
    if (fields.size() != 2 || fields[0].empty() ||
        !ParseDouble(fields[1], &count) || count < 0) {
      throw ParseError(reader.number(), "expected 'token<TAB>count'");
    }
    counts.emplace_back(fields[0], count);
  }
  return counts;
}

std::vector<double> ReadNumbers(std::istream &in) {
  LineReader reader(in);
  std::string line;
  std::vector<double> values;
  while (reader.Next(&line)) {
    for (std::string_view field : SplitWhitespace(line)) {
      double v;
      if (!ParseDouble(field, &v)) {
        throw ParseError(reader.number(),
                         "non-numeric value '" + std::string(field) + "'");
      }
      values.push_back(v);
    }
  }
  return values;
}

std::string ReadFile(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path.string());
  return buf.str();
}

void WriteFile(const std::filesystem::path &path, const std::string &data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("error writing " + path.string());
}

}  // namespace xlrep::io
