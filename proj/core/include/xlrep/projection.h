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

#ifndef XLREP_PROJECTION_H_
#define XLREP_PROJECTION_H_

#include <optional>
#include <string>
#include <vector>

#include "xlrep/types.h"

// Annotation projection along word alignments, alignment symmetrization and
// alignment evaluation.
namespace xlrep::projection {

inline constexpr double kDefaultSpanRatio = 5.0;

// Token span [start, end] (inclusive, 0-based) with a label.
struct Span {
  int start = 0;
  int end = 0;
  std::string label;

  int length() const { return end - start + 1; }
  bool operator==(const Span &other) const = default;
};

// Gold alignment with sure links S and possible links P, S subset of P.
struct GoldAlignment {
  LinkSet sure;
  LinkSet possible;

  // Throws ValidationError unless sure is a subset of possible and the
  // lengths agree.
  void Validate() const;
  // Gold where every link is sure.
  static GoldAlignment SureOnly(const LinkSet &sure) { return {sure, sure}; }
};

// grow-diag-final-and. Starts from the intersection, repeatedly adds union
// links in the 8-neighborhood of an aligned point whose source or target is
// still unaligned (row-major sweeps until nothing changes), then adds union
// links whose source and target are both unaligned, in row-major order.
LinkSet SymmetrizeGdfa(const LinkSet &forward, const LinkSet &backward);

// Keeps only links whose source and target each occur in exactly one link
// and whose tokens differ.
LinkSet FilterOneToOne(const LinkSet &links,
                       const std::vector<std::string> &source_tokens,
                       const std::vector<std::string> &target_tokens);

// Each target token aligned to at least one source token takes the label of
// its lowest-index aligned source token.
std::vector<std::optional<std::string>> ProjectTokens(
    const std::vector<std::string> &labels, const LinkSet &links,
    int target_length);

// Projects each source span to the smallest contiguous target span covering
// its aligned target tokens. Spans with no aligned tokens, or longer than
// `max_ratio` times the source span, are dropped. Overlaps are resolved in
// favor of the longer source span, then the lower target start.
std::vector<Span> ProjectSpans(const std::vector<Span> &spans,
                               const LinkSet &links, int target_length,
                               double max_ratio = kDefaultSpanRatio);

struct DependencyProjection {
  std::vector<std::optional<int>> heads;  // 1-based, 0 = root
  std::vector<std::optional<std::string>> deprels;
};

// Token-based projection of a dependency tree. A target token aligned to
// several source tokens represents the one closest to the root. Its head is
// the image of the closest ancestor (of the represented source token) that
// represents some target token; the root maps to the root. Unaligned target
// tokens stay unannotated.
DependencyProjection ProjectDependencies(const std::vector<int> &heads,
                                         const std::vector<std::string> &deprels,
                                         const LinkSet &links,
                                         int target_length);

// Spans of a valid BIO sequence.
std::vector<Span> SpansFromBio(const std::vector<std::string> &labels);
// BIO labels of non-overlapping spans.
std::vector<std::string> BioFromSpans(const std::vector<Span> &spans,
                                      int length);

bool IsValidBio(const std::vector<std::string> &labels);

// Rewrites each entity segment (starting at a B- tag or at a non-O tag after
// O) into B-t I-t ... I-t where t is the type of the segment's last tag.
// Throws ValidationError on a tag outside {O, B-t, I-t}.
std::vector<std::string> RepairBio(const std::vector<std::string> &labels);

// Link counts behind the alignment metrics; sums over sentences give
// corpus-level scores.
struct AlignmentCounts {
  long predicted = 0;       // |A|
  long sure = 0;            // |S|
  long hit_sure = 0;        // |A n S|
  long hit_possible = 0;    // |A n P|

  AlignmentCounts &operator+=(const AlignmentCounts &other);
};

struct AlignmentScores {
  double aer = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  // Set when there are no predicted links; precision is then reported as 0.
  bool empty_prediction = false;
};

AlignmentCounts CountAlignment(const LinkSet &predicted,
                               const GoldAlignment &gold);
// Throws ValidationError when the sure set is empty.
AlignmentScores ScoreAlignment(const AlignmentCounts &counts);
AlignmentScores EvaluateAlignment(const LinkSet &predicted,
                                  const GoldAlignment &gold);

}  // namespace xlrep::projection

#endif  // XLREP_PROJECTION_H_
