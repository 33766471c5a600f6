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

#include "xlrep/projection.h"

#include <algorithm>
#include <array>
#include <limits>
#include <map>

#include "xlrep/errors.h"

namespace xlrep::projection {
namespace {

// Order in which grow-diag visits the neighbors of an aligned point.
constexpr std::array<std::pair<int, int>, 8> kNeighbors = {{
    {-1, 0}, {0, -1}, {1, 0}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};

void CheckTarget(const LinkSet &links, int target_length) {
  if (target_length < 0) throw ValidationError("negative target length");
  for (const auto &[s, t] : links.links()) {
    if (t >= target_length) {
      throw ValidationError("link " + std::to_string(s) + "-" +
                            std::to_string(t) + " beyond target length " +
                            std::to_string(target_length));
    }
  }
}

void CheckSource(const LinkSet &links, std::size_t source_length) {
  for (const auto &[s, t] : links.links()) {
    if (static_cast<std::size_t>(s) >= source_length) {
      throw ValidationError("link " + std::to_string(s) + "-" +
                            std::to_string(t) + " beyond source length " +
                            std::to_string(source_length));
    }
  }
}

struct Tag {
  char prefix;  // 'O', 'B' or 'I'
  std::string type;
};

Tag ParseTag(const std::string &label) {
  if (label == "O") return {'O', ""};
  if (label.size() > 2 && (label[0] == 'B' || label[0] == 'I') &&
      label[1] == '-') {
    return {label[0], label.substr(2)};
  }
  throw ValidationError("malformed BIO tag '" + label + "'");
}

}  // namespace

void GoldAlignment::Validate() const {
  if (sure.source_length() != possible.source_length() ||
      sure.target_length() != possible.target_length()) {
    throw ValidationError("sure and possible links disagree on lengths");
  }
  for (const Link &l : sure.links()) {
    if (!possible.Contains(l.first, l.second)) {
      throw ValidationError("sure link " + std::to_string(l.first) + "-" +
                            std::to_string(l.second) + " is not possible");
    }
  }
}

LinkSet SymmetrizeGdfa(const LinkSet &forward, const LinkSet &backward) {
  if (forward.source_length() != backward.source_length() ||
      forward.target_length() != backward.target_length()) {
    throw ValidationError("forward and backward alignments differ in length");
  }
  const int n = forward.source_length();
  const int m = forward.target_length();
  LinkSet uni(n, m);
  LinkSet result(n, m);
  std::vector<bool> src_aligned(n, false);
  std::vector<bool> tgt_aligned(m, false);
  auto add = [&](int i, int j) {
    result.Add(i, j);
    src_aligned[i] = true;
    tgt_aligned[j] = true;
  };
  for (const Link &l : forward.links()) {
    uni.Add(l);
    if (backward.Contains(l.first, l.second)) add(l.first, l.second);
  }
  for (const Link &l : backward.links()) uni.Add(l);

  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < m; ++j) {
        if (!result.Contains(i, j)) continue;
        for (const auto &[di, dj] : kNeighbors) {
          const int ni = i + di;
          const int nj = j + dj;
          if (ni < 0 || nj < 0 || ni >= n || nj >= m) continue;
          if ((!src_aligned[ni] || !tgt_aligned[nj]) && uni.Contains(ni, nj) &&
              !result.Contains(ni, nj)) {
            add(ni, nj);
            changed = true;
          }
        }
      }
    }
  }
  for (const auto &[i, j] : uni.links()) {
    if (!src_aligned[i] && !tgt_aligned[j]) add(i, j);
  }
  return result;
}

LinkSet FilterOneToOne(const LinkSet &links,
                       const std::vector<std::string> &source_tokens,
                       const std::vector<std::string> &target_tokens) {
  CheckSource(links, source_tokens.size());
  CheckTarget(links, static_cast<int>(target_tokens.size()));
  std::map<int, int> src_count;
  std::map<int, int> tgt_count;
  for (const auto &[s, t] : links.links()) {
    ++src_count[s];
    ++tgt_count[t];
  }
  LinkSet kept(links.source_length(), links.target_length());
  for (const auto &[s, t] : links.links()) {
    if (src_count[s] == 1 && tgt_count[t] == 1 &&
        source_tokens[s] != target_tokens[t]) {
      kept.Add(s, t);
    }
  }
  return kept;
}

std::vector<std::optional<std::string>> ProjectTokens(
    const std::vector<std::string> &labels, const LinkSet &links,
    int target_length) {
  CheckSource(links, labels.size());
  CheckTarget(links, target_length);
  std::vector<std::optional<std::string>> out(target_length);
  std::vector<int> best(target_length, std::numeric_limits<int>::max());
  for (const auto &[s, t] : links.links()) {
    if (s < best[t]) {
      best[t] = s;
      out[t] = labels[s];
    }
  }
  return out;
}

std::vector<Span> ProjectSpans(const std::vector<Span> &spans,
                               const LinkSet &links, int target_length,
                               double max_ratio) {
  CheckTarget(links, target_length);
  std::vector<Span> sorted = spans;
  std::sort(sorted.begin(), sorted.end(),
            [](const Span &a, const Span &b) { return a.start < b.start; });
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k].start < 0 || sorted[k].end < sorted[k].start) {
      throw ValidationError("invalid span [" + std::to_string(sorted[k].start) +
                            ", " + std::to_string(sorted[k].end) + "]");
    }
    if (k > 0 && sorted[k].start <= sorted[k - 1].end) {
      throw ValidationError("overlapping source spans");
    }
  }

  struct Candidate {
    Span target;
    int source_length;
  };
  std::vector<Candidate> candidates;
  for (const Span &span : spans) {
    int lo = std::numeric_limits<int>::max();
    int hi = -1;
    for (const auto &[s, t] : links.links()) {
      if (s >= span.start && s <= span.end) {
        lo = std::min(lo, t);
        hi = std::max(hi, t);
      }
    }
    if (hi < 0) continue;
    Span projected{lo, hi, span.label};
    if (projected.length() > max_ratio * span.length()) continue;
    candidates.push_back({std::move(projected), span.length()});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate &a, const Candidate &b) {
                     if (a.source_length != b.source_length) {
                       return a.source_length > b.source_length;
                     }
                     return a.target.start < b.target.start;
                   });
  std::vector<Span> kept;
  for (const Candidate &c : candidates) {
    const bool overlaps =
        std::any_of(kept.begin(), kept.end(), [&](const Span &k) {
          return !(c.target.end < k.start || k.end < c.target.start);
        });
    if (!overlaps) kept.push_back(c.target);
  }
  std::sort(kept.begin(), kept.end(),
            [](const Span &a, const Span &b) { return a.start < b.start; });
  return kept;
}

DependencyProjection ProjectDependencies(
    const std::vector<int> &heads, const std::vector<std::string> &deprels,
    const LinkSet &links, int target_length) {
  CheckDependencyTree(heads);
  if (deprels.size() != heads.size()) {
    throw ValidationError("deprels do not match heads");
  }
  const int n = static_cast<int>(heads.size());
  CheckSource(links, heads.size());
  CheckTarget(links, target_length);

  std::vector<int> depth(n, 0);
  for (int s = 0; s < n; ++s) {
    for (int h = heads[s]; h != 0; h = heads[h - 1]) ++depth[s];
  }
  // Source token each target token represents.
  std::vector<int> rep(target_length, -1);
  for (const auto &[s, t] : links.links()) {
    if (rep[t] < 0 || depth[s] < depth[rep[t]] ||
        (depth[s] == depth[rep[t]] && s < rep[t])) {
      rep[t] = s;
    }
  }
  // Lowest target index representing each source token.
  std::vector<int> image(n, -1);
  for (int t = 0; t < target_length; ++t) {
    if (rep[t] >= 0 && image[rep[t]] < 0) image[rep[t]] = t;
  }

  DependencyProjection out;
  out.heads.resize(target_length);
  out.deprels.resize(target_length);
  for (int t = 0; t < target_length; ++t) {
    const int s = rep[t];
    if (s < 0) continue;
    int h = heads[s];
    while (h != 0 && image[h - 1] < 0) h = heads[h - 1];
    out.heads[t] = h == 0 ? 0 : image[h - 1] + 1;
    out.deprels[t] = deprels[s];
  }
  return out;
}

std::vector<Span> SpansFromBio(const std::vector<std::string> &labels) {
  if (!IsValidBio(labels)) throw ValidationError("invalid BIO sequence");
  std::vector<Span> spans;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) {
    const Tag tag = ParseTag(labels[i]);
    if (tag.prefix == 'B') {
      spans.push_back({i, i, tag.type});
    } else if (tag.prefix == 'I') {
      spans.back().end = i;
    }
  }
  return spans;
}

std::vector<std::string> BioFromSpans(const std::vector<Span> &spans,
                                      int length) {
  std::vector<std::string> labels(length, "O");
  for (const Span &span : spans) {
    if (span.start < 0 || span.end >= length || span.end < span.start) {
      throw ValidationError("span outside sentence");
    }
    for (int i = span.start; i <= span.end; ++i) {
      if (labels[i] != "O") throw ValidationError("overlapping spans");
      labels[i] = (i == span.start ? "B-" : "I-") + span.label;
    }
  }
  return labels;
}

bool IsValidBio(const std::vector<std::string> &labels) {
  Tag prev{'O', ""};
  for (const std::string &label : labels) {
    Tag tag;
    try {
      tag = ParseTag(label);
    } catch (const ValidationError &) {
      return false;
    }
    if (tag.prefix == 'I' && (prev.prefix == 'O' || prev.type != tag.type)) {
      return false;
    }
    prev = std::move(tag);
  }
  return true;
}

std::vector<std::string> RepairBio(const std::vector<std::string> &labels) {
  std::vector<Tag> tags;
  tags.reserve(labels.size());
  for (const std::string &label : labels) tags.push_back(ParseTag(label));
  std::vector<std::string> out(labels.size(), "O");
  std::size_t i = 0;
  while (i < tags.size()) {
    if (tags[i].prefix == 'O') {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < tags.size() && tags[j].prefix == 'I') ++j;
    const std::string &type = tags[j - 1].type;
    out[i] = "B-" + type;
    for (std::size_t k = i + 1; k < j; ++k) out[k] = "I-" + type;
    i = j;
  }
  return out;
}

AlignmentCounts &AlignmentCounts::operator+=(const AlignmentCounts &other) {
  predicted += other.predicted;
  sure += other.sure;
  hit_sure += other.hit_sure;
  hit_possible += other.hit_possible;
  return *this;
}

AlignmentCounts CountAlignment(const LinkSet &predicted,
                               const GoldAlignment &gold) {
  gold.Validate();
  AlignmentCounts c;
  c.predicted = static_cast<long>(predicted.size());
  c.sure = static_cast<long>(gold.sure.size());
  for (const auto &[s, t] : predicted.links()) {
    if (gold.sure.Contains(s, t)) ++c.hit_sure;
    if (gold.possible.Contains(s, t)) ++c.hit_possible;
  }
  return c;
}

AlignmentScores ScoreAlignment(const AlignmentCounts &c) {
  if (c.sure == 0) throw ValidationError("gold alignment has no sure links");
  AlignmentScores scores;
  scores.empty_prediction = c.predicted == 0;
  scores.precision = scores.empty_prediction
                         ? 0.0
                         : static_cast<double>(c.hit_possible) / c.predicted;
  scores.recall = static_cast<double>(c.hit_sure) / c.sure;
  scores.aer = 1.0 - static_cast<double>(c.hit_sure + c.hit_possible) /
                         static_cast<double>(c.predicted + c.sure);
  const double pr = scores.precision + scores.recall;
  scores.f1 = pr > 0 ? 2.0 * scores.precision * scores.recall / pr : 0.0;
  return scores;
}

AlignmentScores EvaluateAlignment(const LinkSet &predicted,
                                  const GoldAlignment &gold) {
  return ScoreAlignment(CountAlignment(predicted, gold));
}

}  // namespace xlrep::projection
