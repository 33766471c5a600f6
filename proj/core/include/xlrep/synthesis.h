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

#ifndef XLREP_SYNTHESIS_H_
#define XLREP_SYNTHESIS_H_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xlrep/rng.h"
#include "xlrep/types.h"

// Synthetic corpus generation: code-switching, MLM mask plans and
// gold + silver combination.
namespace xlrep::synthesis {

using Corpus = std::vector<std::vector<std::string>>;

struct CodeSwitchOptions {
  double p_replace = 0.30;  // Probability of replacing a dictionary word.
  double cap = 0.15;        // Max fraction of batch tokens replaced.
};

struct CodeSwitchResult {
  Corpus sentences;
  long dictionary_tokens = 0;  // Tokens with a dictionary entry.
  long replaced = 0;
  long suppressed = 0;  // Replacements dropped because the cap was reached.
  long cap_limit = 0;   // floor(cap * batch token count).
};

// Visits tokens in corpus order. Each dictionary word is replaced with
// probability p_replace by a translation drawn with probability proportional
// to its weight, until floor(cap * token count) replacements have been made;
// later candidates are left unchanged.
CodeSwitchResult CodeSwitch(const Corpus &batch, const WeightedDictionary &dict,
                            Rng &rng, const CodeSwitchOptions &options = {});

enum class MaskAction { kKeep, kMask, kOriginal, kRandom };
enum class MaskScheme { kUniform, kRareFavoring };

const char *MaskActionName(MaskAction action);
MaskScheme ParseMaskScheme(std::string_view name);

struct MaskPlan {
  std::vector<MaskAction> actions;  // One per token.
  std::vector<int> replacements;    // Vocabulary index for kRandom, else -1.
  std::vector<std::size_t> selected;  // Ascending token indices.
};

// Number of tokens selected out of n: rate * n rounded to nearest, ties to
// even.
std::size_t MaskCount(std::size_t n, double rate);

using TokenCounts = std::unordered_map<std::string, double>;

// Selects MaskCount(n, rate) positions without replacement, uniformly or with
// probability proportional to count^-0.5, and assigns each one mask /
// original / random with probabilities 0.8 / 0.1 / 0.1. Random replacements
// are drawn uniformly from `vocabulary`.
MaskPlan MlmMask(const std::vector<std::string> &tokens,
                 const TokenCounts *counts,
                 const std::vector<std::string> &vocabulary, Rng &rng,
                 double rate = 0.15,
                 MaskScheme scheme = MaskScheme::kUniform);

// TSV with one "index\taction\treplacement" row per selected token; the
// replacement column is "_" unless the action is random.
void WriteMaskPlan(std::ostream &out, const MaskPlan &plan,
                   const std::vector<std::string> &vocabulary);

enum class Provenance { kGold, kSilverProjected, kSilverSelfTrained };

const char *ProvenanceName(Provenance provenance);
Provenance ParseSilverKind(std::string_view name);

struct TaggedSentence {
  AnnotatedSentence sentence;
  Provenance provenance;
};

// Gold sentences followed by silver sentences, each tagged with its origin.
// Throws ValidationError if the annotation layers differ between sentences.
std::vector<TaggedSentence> CombineGoldSilver(
    const std::vector<AnnotatedSentence> &gold,
    const std::vector<AnnotatedSentence> &silver, Provenance silver_kind);

}  // namespace xlrep::synthesis

#endif  // XLREP_SYNTHESIS_H_
