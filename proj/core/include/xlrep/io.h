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

#ifndef XLREP_IO_H_
#define XLREP_IO_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xlrep/types.h"

// Readers and writers for the on-disk formats used by the toolkit. Readers
// throw ParseError (with a 1-based line number where one applies) and never
// return a value that violates its type's invariants.
namespace xlrep::io {

// Shortest decimal text that parses back to exactly `value`.
std::string FormatDouble(double value);

// fastText-style text vectors: "n d" header, then "token v1 ... vd".
EmbeddingSpace ReadVec(std::istream &in);
void WriteVec(std::ostream &out, const EmbeddingSpace &space);

// Pharaoh alignments: one sentence pair per line of "i-j" pairs. Without
// `lengths`, each LinkSet's lengths are max index + 1.
std::vector<LinkSet> ReadPharaoh(
    std::istream &in,
    const std::vector<std::pair<int, int>> *lengths = nullptr);
void WritePharaoh(std::ostream &out, const std::vector<LinkSet> &links);

// CoNLL-U. FORM, UPOS, HEAD and DEPREL are modeled; the other columns,
// comments, multiword tokens and empty nodes pass through unchanged. A layer
// whose values are all "_" is read as absent.
std::vector<AnnotatedSentence> ReadConllu(std::istream &in);
void WriteConllu(std::ostream &out,
                 const std::vector<AnnotatedSentence> &sentences);

// Writes one CoNLL-U sentence whose head/deprel layers may be partial
// (absent values become "_"). Other columns come from `sentence`.
void WriteConlluPartial(std::ostream &out, const AnnotatedSentence &sentence,
                        const std::vector<std::optional<int>> &heads,
                        const std::vector<std::optional<std::string>> &deprels);

// PVEC checkpoint interchange: "PVEC 1\n", one "name\td1,d2,...\n" line per
// parameter, a blank line, then little-endian float32 payload in header
// order. Values are narrowed to float32 on write.
ParamVector ReadPvec(std::istream &in);
void WritePvec(std::ostream &out, const ParamVector &params);

// TSV "source\ttarget[\tweight]"; weight defaults to 1.
WeightedDictionary ReadDictionary(std::istream &in);
void WriteDictionary(std::ostream &out, const WeightedDictionary &dict);

// Two-column "token\tlabel" BIO files, blank line between sentences.
std::vector<AnnotatedSentence> ReadBio(std::istream &in);
void WriteBio(std::ostream &out,
              const std::vector<AnnotatedSentence> &sentences);

// One whitespace-tokenized sentence per line.
std::vector<std::vector<std::string>> ReadTokenized(std::istream &in);
void WriteTokenized(std::ostream &out,
                    const std::vector<std::vector<std::string>> &sentences);

// Two-column TSV word pairs ("src\ttgt"), e.g. supervision dictionaries.
std::vector<std::pair<std::string, std::string>> ReadWordPairs(
    std::istream &in);

// Frequency table: "token<TAB>count" per line, count >= 0.
std::vector<std::pair<std::string, double>> ReadCounts(std::istream &in);

// Whitespace-separated real numbers.
std::vector<double> ReadNumbers(std::istream &in);

// File helpers; throw IoError when the file cannot be opened.
std::string ReadFile(const std::filesystem::path &path);
void WriteFile(const std::filesystem::path &path, const std::string &data);

}  // namespace xlrep::io

#endif  // XLREP_IO_H_
