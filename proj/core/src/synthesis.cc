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

#include "xlrep/synthesis.h"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <numeric>
#include <ostream>

#include "xlrep/errors.h"

namespace xlrep::synthesis {
namespace {

constexpr double kMaskProbability = 0.8;
constexpr double kOriginalProbability = 0.1;

const std::string &SampleTranslation(const std::vector<Translation> &options,
                                     Rng &rng) {
  double total = 0;
  for (const Translation &t : options) total += t.weight;
  const double r = rng.Uniform() * total;
  double acc = 0;
  for (const Translation &t : options) {
    acc += t.weight;
    if (r < acc) return t.target;
  }
  // Rounding can leave r == total; fall back to the last positive weight.
  for (auto it = options.rbegin(); it != options.rend(); ++it) {
    if (it->weight > 0) return it->target;
  }
  return options.back().target;
}

struct Schema {
  bool pos;
  bool bio;
  bool heads;
  bool deprels;

  bool operator==(const Schema &other) const = default;

  static Schema Of(const AnnotatedSentence &s) {
    return {s.pos.has_value(), s.bio.has_value(), s.heads.has_value(),
            s.deprels.has_value()};
  }
};

}  // namespace

CodeSwitchResult CodeSwitch(const Corpus &batch, const WeightedDictionary &dict,
                            Rng &rng, const CodeSwitchOptions &options) {
  if (!(options.p_replace >= 0 && options.p_replace <= 1)) {
    throw ValidationError("p_replace must lie in [0, 1]");
  }
  if (!(options.cap > 0 && options.cap <= 1)) {
    throw ValidationError("cap must lie in (0, 1]");
  }
  dict.Validate();
  CodeSwitchResult result;
  result.sentences = batch;
  long total = 0;
  for (const auto &s : batch) total += static_cast<long>(s.size());
  // The epsilon absorbs representation error such as 0.15 * 100.
  result.cap_limit =
      static_cast<long>(std::floor(options.cap * total + 1e-9));
  for (auto &sentence : result.sentences) {
    for (std::string &token : sentence) {
      const std::vector<Translation> *translations = dict.Find(token);
      if (!translations) continue;
      ++result.dictionary_tokens;
      if (!(rng.Uniform() < options.p_replace)) continue;
      if (result.replaced >= result.cap_limit) {
        ++result.suppressed;
        continue;
      }
      token = SampleTranslation(*translations, rng);
      ++result.replaced;
    }
  }
  return result;
}

const char *MaskActionName(MaskAction action) {
  switch (action) {
    case MaskAction::kKeep:
      return "keep";
    case MaskAction::kMask:
      return "mask";
    case MaskAction::kOriginal:
      return "original";
    case MaskAction::kRandom:
      return "random";
  }
  return "?";
}

MaskScheme ParseMaskScheme(std::string_view name) {
  if (name == "uniform") return MaskScheme::kUniform;
  if (name == "rare" || name == "rare-favoring") {
    return MaskScheme::kRareFavoring;
  }
  throw ValidationError("unknown mask scheme '" + std::string(name) + "'");
}

std::size_t MaskCount(std::size_t n, double rate) {
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double k = std::nearbyint(rate * static_cast<double>(n));
  std::fesetround(saved);
  return static_cast<std::size_t>(k);
}

MaskPlan MlmMask(const std::vector<std::string> &tokens,
                 const TokenCounts *counts,
                 const std::vector<std::string> &vocabulary, Rng &rng,
                 double rate, MaskScheme scheme) {
  if (!(rate > 0 && rate < 1)) throw ValidationError("rate must lie in (0, 1)");
  if (vocabulary.empty()) {
    throw ValidationError("random replacement needs a non-empty vocabulary");
  }
  const std::size_t n = tokens.size();
  const std::size_t k = MaskCount(n, rate);
  MaskPlan plan;
  plan.actions.assign(n, MaskAction::kKeep);
  plan.replacements.assign(n, -1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (scheme == MaskScheme::kUniform) {
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + rng.UniformInt(n - i);
      std::swap(order[i], order[j]);
    }
  } else {
    if (!counts) throw ValidationError("rare-favoring masking needs counts");
    // Keys log(u) / w select without replacement with probability
    // proportional to w (Efraimidis-Spirakis).
    std::vector<double> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto it = counts->find(tokens[i]);
      if (it == counts->end()) {
        throw ValidationError("no count for token '" + tokens[i] + "'");
      }
      if (!(it->second > 0)) {
        throw ValidationError("zero count for token '" + tokens[i] + "'");
      }
      const double weight = 1.0 / std::sqrt(it->second);
      double u;
      do {
        u = rng.Uniform();
      } while (u == 0.0);
      keys[i] = std::log(u) / weight;
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (keys[a] != keys[b]) return keys[a] > keys[b];
                        return a < b;
                      });
  }
  plan.selected.assign(order.begin(), order.begin() + k);
  std::sort(plan.selected.begin(), plan.selected.end());
  for (std::size_t index : plan.selected) {
    const double u = rng.Uniform();
    if (u < kMaskProbability) {
      plan.actions[index] = MaskAction::kMask;
    } else if (u < kMaskProbability + kOriginalProbability) {
      plan.actions[index] = MaskAction::kOriginal;
    } else {
      plan.actions[index] = MaskAction::kRandom;
      plan.replacements[index] =
          static_cast<int>(rng.UniformInt(vocabulary.size()));
    }
  }
  return plan;
}

void WriteMaskPlan(std::ostream &out, const MaskPlan &plan,
                   const std::vector<std::string> &vocabulary) {
  for (std::size_t index : plan.selected) {
    out << index << '\t' << MaskActionName(plan.actions[index]) << '\t';
    if (plan.actions[index] == MaskAction::kRandom) {
      out << vocabulary.at(plan.replacements[index]);
    } else {
      out << '_';
    }
    out << '\n';
  }
}

const char *ProvenanceName(Provenance provenance) {
  switch (provenance) {
    case Provenance::kGold:
      return "gold";
    case Provenance::kSilverProjected:
      return "silver-projected";
    case Provenance::kSilverSelfTrained:
      return "silver-selftrained";
  }
  return "?";
}

Provenance ParseSilverKind(std::string_view name) {
  if (name == "projected" || name == "silver-projected") {
    return Provenance::kSilverProjected;
  }
  if (name == "selftrained" || name == "silver-selftrained") {
    return Provenance::kSilverSelfTrained;
  }
  throw ValidationError("unknown silver kind '" + std::string(name) + "'");
}

std::vector<TaggedSentence> CombineGoldSilver(
    const std::vector<AnnotatedSentence> &gold,
    const std::vector<AnnotatedSentence> &silver, Provenance silver_kind) {
  if (silver_kind == Provenance::kGold) {
    throw ValidationError("silver corpus cannot be tagged gold");
  }
  std::optional<Schema> schema;
  auto check = [&](const AnnotatedSentence &s, const char *which,
                   std::size_t index) {
    s.Validate();
    const Schema current = Schema::Of(s);
    if (!schema) {
      schema = current;
    } else if (!(*schema == current)) {
      throw ValidationError(std::string("annotation schema of ") + which +
                            " sentence " + std::to_string(index) +
                            " differs from the gold schema");
    }
  };
  std::vector<TaggedSentence> out;
  out.reserve(gold.size() + silver.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    check(gold[i], "gold", i);
    out.push_back({gold[i], Provenance::kGold});
  }
  for (std::size_t i = 0; i < silver.size(); ++i) {
    check(silver[i], "silver", i);
    out.push_back({silver[i], silver_kind});
  }
  return out;
}

}  // namespace xlrep::synthesis
