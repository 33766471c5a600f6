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

#include "xlrep/types.h"

#include <algorithm>
#include <cmath>

#include "xlrep/errors.h"

namespace xlrep {

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> items,
                               Eigen::MatrixXd vectors)
    : items_(std::move(items)), vectors_(std::move(vectors)) {
  if (static_cast<Eigen::Index>(items_.size()) != vectors_.cols()) {
    throw ValidationError("embedding space has " +
                          std::to_string(items_.size()) + " items but " +
                          std::to_string(vectors_.cols()) + " columns");
  }
  if (!vectors_.allFinite()) {
    throw ValidationError("embedding space contains non-finite values");
  }
  index_.reserve(items_.size());
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!index_.emplace(items_[i], static_cast<Eigen::Index>(i)).second) {
      throw ValidationError("duplicate item '" + items_[i] + "'");
    }
  }
}

std::optional<Eigen::Index> EmbeddingSpace::IndexOf(
    std::string_view item) const {
  auto it = index_.find(std::string(item));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

EmbeddingSpace EmbeddingSpace::WithVectors(Eigen::MatrixXd vectors) const {
  return EmbeddingSpace(items_, std::move(vectors));
}

LinkSet::LinkSet(int source_length, int target_length)
    : source_length_(source_length), target_length_(target_length) {
  if (source_length < 0 || target_length < 0) {
    throw ValidationError("negative sentence length");
  }
}

LinkSet LinkSet::FromLinks(const std::vector<Link> &links) {
  int src = 0;
  int tgt = 0;
  for (const Link &l : links) {
    if (l.first < 0 || l.second < 0) {
      throw ValidationError("negative alignment index");
    }
    src = std::max(src, l.first + 1);
    tgt = std::max(tgt, l.second + 1);
  }
  LinkSet result(src, tgt);
  for (const Link &l : links) result.Add(l);
  return result;
}

void LinkSet::Add(int source, int target) {
  if (source < 0 || source >= source_length_ || target < 0 ||
      target >= target_length_) {
    throw ValidationError("link " + std::to_string(source) + "-" +
                          std::to_string(target) + " outside " +
                          std::to_string(source_length_) + "x" +
                          std::to_string(target_length_));
  }
  links_.emplace(source, target);
}

void CheckDependencyTree(const std::vector<int> &heads) {
  const int n = static_cast<int>(heads.size());
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    if (heads[i] < 0 || heads[i] > n) {
      throw ValidationError("head " + std::to_string(heads[i]) +
                            " of token " + std::to_string(i + 1) +
                            " out of range");
    }
    if (heads[i] == i + 1) {
      throw ValidationError("token " + std::to_string(i + 1) +
                            " is its own head");
    }
    if (heads[i] == 0) ++roots;
  }
  if (n > 0 && roots != 1) {
    throw ValidationError("dependency tree has " + std::to_string(roots) +
                          " roots");
  }
  // 0 = unvisited, 1 = on current path, 2 = reaches root.
  std::vector<int> state(n, 0);
  for (int i = 0; i < n; ++i) {
    std::vector<int> path;
    int node = i;
    while (node >= 0 && state[node] == 0) {
      state[node] = 1;
      path.push_back(node);
      node = heads[node] - 1;
    }
    if (node >= 0 && state[node] == 1) {
      throw ValidationError("dependency heads contain a cycle through token " +
                            std::to_string(node + 1));
    }
    for (int p : path) state[p] = 2;
  }
}

void AnnotatedSentence::Validate() const {
  const std::size_t n = tokens.size();
  auto check = [n](const auto &layer, const char *name) {
    if (layer && layer->size() != n) {
      throw ValidationError(std::string(name) + " layer has " +
                            std::to_string(layer->size()) + " entries for " +
                            std::to_string(n) + " tokens");
    }
  };
  check(pos, "pos");
  check(bio, "bio");
  check(heads, "head");
  check(deprels, "deprel");
  if (heads) CheckDependencyTree(*heads);
}

void ParamVector::Add(std::string name, std::vector<std::int64_t> shape,
                      std::vector<double> data) {
  if (name.empty() || name.find_first_of("\t\n") != std::string::npos) {
    throw ValidationError("invalid parameter name '" + name + "'");
  }
  if (index_.count(name)) {
    throw ValidationError("duplicate parameter '" + name + "'");
  }
  std::int64_t expected = 1;
  for (std::int64_t dim : shape) {
    if (dim < 0) throw ValidationError("negative dimension in '" + name + "'");
    expected *= dim;
  }
  if (expected != static_cast<std::int64_t>(data.size())) {
    throw ValidationError("parameter '" + name + "' has " +
                          std::to_string(data.size()) +
                          " values for shape of size " +
                          std::to_string(expected));
  }
  for (double v : data) {
    if (!std::isfinite(v)) {
      throw ValidationError("parameter '" + name + "' has non-finite values");
    }
  }
  index_.emplace(name, entries_.size());
  entries_.push_back({std::move(name), std::move(shape), std::move(data)});
}

const ParamEntry *ParamVector::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

std::size_t ParamVector::TotalElements() const {
  std::size_t total = 0;
  for (const ParamEntry &e : entries_) total += e.data.size();
  return total;
}

void ParamVector::CheckCompatible(const ParamVector &other) const {
  if (entries_.size() != other.entries_.size()) {
    throw ValidationError("checkpoints have " +
                          std::to_string(entries_.size()) + " and " +
                          std::to_string(other.entries_.size()) +
                          " parameters");
  }
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const ParamEntry &a = entries_[i];
    const ParamEntry &b = other.entries_[i];
    if (a.name != b.name) {
      throw ValidationError("parameter " + std::to_string(i) + " is '" +
                            a.name + "' vs '" + b.name + "'");
    }
    if (a.shape != b.shape) {
      throw ValidationError("shape mismatch for parameter '" + a.name + "'");
    }
  }
}

void WeightedDictionary::Add(const std::string &source,
                             const std::string &target, double weight) {
  if (source.empty() || target.empty()) {
    throw ValidationError("empty dictionary word");
  }
  if (!std::isfinite(weight) || weight < 0) {
    throw ValidationError("invalid weight for '" + source + "' -> '" + target +
                          "'");
  }
  auto [it, inserted] = entries_.try_emplace(source);
  if (inserted) sources_.push_back(source);
  it->second.push_back({target, weight});
}

void WeightedDictionary::Validate() const {
  for (const auto &[source, translations] : entries_) {
    double total = 0;
    for (const Translation &t : translations) total += t.weight;
    if (!(total > 0)) {
      throw ValidationError("all translations of '" + source +
                            "' have zero weight");
    }
  }
}

const std::vector<Translation> *WeightedDictionary::Find(
    std::string_view source) const {
  auto it = entries_.find(source);
  return it == entries_.end() ? nullptr : &it->second;
}

}  // namespace xlrep
