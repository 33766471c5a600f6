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

#ifndef XLREP_TYPES_H_
#define XLREP_TYPES_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace xlrep {

// Vocabulary plus a d x n matrix whose column j is the vector of item j.
class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;

  // Throws ValidationError on duplicate items, count/column mismatch or
  // non-finite entries.
  EmbeddingSpace(std::vector<std::string> items, Eigen::MatrixXd vectors);

  const std::vector<std::string> &items() const { return items_; }
  const Eigen::MatrixXd &vectors() const { return vectors_; }
  Eigen::Index dimension() const { return vectors_.rows(); }
  Eigen::Index size() const { return vectors_.cols(); }

  std::optional<Eigen::Index> IndexOf(std::string_view item) const;

  // Same items, new vectors of the same column count.
  EmbeddingSpace WithVectors(Eigen::MatrixXd vectors) const;

 private:
  std::vector<std::string> items_;
  Eigen::MatrixXd vectors_;
  std::unordered_map<std::string, Eigen::Index> index_;
};

// A word-alignment link (source index, target index), both 0-based.
using Link = std::pair<int, int>;

// Word alignment of one sentence pair. Links are kept in row-major order.
class LinkSet {
 public:
  LinkSet() = default;
  LinkSet(int source_length, int target_length);

  // Lengths inferred as max index + 1 (0 when there are no links).
  static LinkSet FromLinks(const std::vector<Link> &links);

  // Throws ValidationError if an index is out of range. Duplicates are
  // ignored.
  void Add(int source, int target);
  void Add(const Link &link) { Add(link.first, link.second); }
  void Remove(const Link &link) { links_.erase(link); }
  bool Contains(int source, int target) const {
    return links_.count({source, target}) > 0;
  }

  const std::set<Link> &links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }
  int source_length() const { return source_length_; }
  int target_length() const { return target_length_; }

  bool operator==(const LinkSet &other) const = default;

 private:
  int source_length_ = 0;
  int target_length_ = 0;
  std::set<Link> links_;
};

// CoNLL-U columns the toolkit does not model, kept for round trips.
struct ConlluExtras {
  std::vector<std::string> comments;  // Full lines, including the '#'.
  // LEMMA, XPOS, FEATS, DEPS, MISC of each word line.
  std::vector<std::vector<std::string>> columns;
  // Multiword-token and empty-node lines, keyed by the index of the word
  // they precede (token count if they trail the sentence).
  std::vector<std::pair<std::size_t, std::string>> lines;

  bool operator==(const ConlluExtras &other) const = default;
};

// Tokens with optional word-level annotation layers. Heads are 1-based with
// 0 for the root.
struct AnnotatedSentence {
  std::vector<std::string> tokens;
  std::optional<std::vector<std::string>> pos;
  std::optional<std::vector<std::string>> bio;
  std::optional<std::vector<int>> heads;
  std::optional<std::vector<std::string>> deprels;
  ConlluExtras conllu;

  std::size_t size() const { return tokens.size(); }

  // Throws ValidationError unless every present layer matches the token
  // count and heads form a single-rooted tree.
  void Validate() const;

  bool operator==(const AnnotatedSentence &other) const = default;
};

// Throws ValidationError if `heads` (1-based, 0 = root) is not a tree with
// exactly one root.
void CheckDependencyTree(const std::vector<int> &heads);

// One named parameter array of a checkpoint.
struct ParamEntry {
  std::string name;
  std::vector<std::int64_t> shape;
  std::vector<double> data;  // Row-major.

  bool operator==(const ParamEntry &other) const = default;
};

// Named, shaped, flat parameter arrays in insertion order.
class ParamVector {
 public:
  // Throws ValidationError on duplicate or malformed name, shape/size
  // mismatch or non-finite data.
  void Add(std::string name, std::vector<std::int64_t> shape,
           std::vector<double> data);

  const std::vector<ParamEntry> &entries() const { return entries_; }
  const ParamEntry *Find(std::string_view name) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  std::size_t TotalElements() const;

  // Throws ValidationError unless both have the same names, order and
  // shapes.
  void CheckCompatible(const ParamVector &other) const;

  bool operator==(const ParamVector &other) const {
    return entries_ == other.entries_;
  }

 private:
  std::vector<ParamEntry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Translation {
  std::string target;
  double weight = 1.0;

  bool operator==(const Translation &other) const = default;
};

// Source word to weighted translations. Source order is insertion order.
class WeightedDictionary {
 public:
  // Throws ValidationError on empty words or negative/non-finite weight.
  void Add(const std::string &source, const std::string &target,
           double weight);

  // Throws ValidationError if some source word has only zero weights.
  void Validate() const;

  const std::vector<std::string> &sources() const { return sources_; }
  const std::vector<Translation> *Find(std::string_view source) const;
  std::size_t size() const { return sources_.size(); }

  bool operator==(const WeightedDictionary &other) const {
    return sources_ == other.sources_ && entries_ == other.entries_;
  }

 private:
  std::vector<std::string> sources_;
  std::map<std::string, std::vector<Translation>, std::less<>> entries_;
};

}  // namespace xlrep

#endif  // XLREP_TYPES_H_
