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

#ifndef XLREP_EMBEDDING_ALIGN_H_
#define XLREP_EMBEDDING_ALIGN_H_

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "xlrep/types.h"

// Orthogonal alignment of two embedding spaces and translation retrieval.
// Spaces are d x n with one column per item; a map W sends source columns
// into the target space (W X ~ Y).
namespace xlrep::align {

// A d x d linear map. Maps returned by the fit functions are orthogonal to
// ||W W^T - I||_F <= 1e-4 sqrt(d).
struct OrthogonalMap {
  Eigen::MatrixXd matrix;

  // ||W W^T - I||_F.
  double OrthogonalityError() const;

  // Applies W to every column of `space`.
  EmbeddingSpace Apply(const EmbeddingSpace &space) const;
};

// Tolerance that fit functions guarantee for OrthogonalityError().
double OrthogonalityTolerance(Eigen::Index dimension);

// (source column, target column) supervision pairs.
using SupervisionPairs = std::vector<std::pair<Eigen::Index, Eigen::Index>>;

// Resolves word pairs against both vocabularies. Pairs naming an unknown
// word are skipped and counted in `*skipped`.
SupervisionPairs ResolvePairs(
    const EmbeddingSpace &source, const EmbeddingSpace &target,
    const std::vector<std::pair<std::string, std::string>> &words,
    std::size_t *skipped);

struct NormalizeOptions {
  double tolerance = 1e-5;
  int max_iterations = 100;
};

// Alternates unit-length normalization of columns with mean-centering across
// columns until every column norm is within `tolerance` of 1 and the mean
// vector is smaller than `tolerance` (or the iteration budget runs out).
// Throws NumericalError on a zero column.
EmbeddingSpace IterativeNormalize(const EmbeddingSpace &space,
                                  const NormalizeOptions &options = {});

// Closed-form solution of argmin_{W orthogonal} ||W X_sup - Y_sup||_F via
// W = U V^T where U S V^T = SVD(Y_sup X_sup^T).
OrthogonalMap ProcrustesFit(const EmbeddingSpace &source,
                            const EmbeddingSpace &target,
                            const SupervisionPairs &pairs);

// Matrix form of the above on already-selected, equally sized d x m blocks.
Eigen::MatrixXd ProcrustesSolve(const Eigen::MatrixXd &x,
                                const Eigen::MatrixXd &y);

// ||W X - Y||_F^2 over the supervised columns.
double AlignmentObjective(const Eigen::MatrixXd &w, const Eigen::MatrixXd &x,
                          const Eigen::MatrixXd &y);

// One orthogonality retraction step W <- (1 + beta) W - beta (W W^T) W.
Eigen::MatrixXd RetractOrthogonal(const Eigen::MatrixXd &w, double beta);

struct GradientFitOptions {
  double learning_rate = 0.1;
  int steps = 2000;
  double beta = 0.01;
  // Retraction steps allowed after the last gradient step to bring the map
  // within OrthogonalityTolerance().
  int max_polish_steps = 100000;
};

struct GradientFitResult {
  OrthogonalMap map;
  // Mean squared residual (1/m) ||W X - Y||_F^2 after each gradient step.
  std::vector<double> objective_history;
  int polish_steps = 0;
};

// Gradient descent on (1/m) ||W X - Y||_F^2 from W = I, alternating each
// gradient step with one retraction step. Throws NumericalError if the
// objective becomes non-finite.
GradientFitResult GradientOrthogonalFit(const EmbeddingSpace &source,
                                        const EmbeddingSpace &target,
                                        const SupervisionPairs &pairs,
                                        const GradientFitOptions &options = {});

// Cross-domain similarity local scaling:
//   score(x, y) = 2 cos(x, y) - r_T(x) - r_S(y)
// with r_T(x) the mean cosine of x to its k nearest targets and r_S(y) the
// mean cosine of y to its k nearest mapped sources. Returns, per source,
// target indices by descending score (ties by ascending index), truncated
// to `limit` entries when limit > 0.
std::vector<std::vector<Eigen::Index>> CslsRetrieve(
    const EmbeddingSpace &mapped_source, const EmbeddingSpace &target,
    int k = 10, int limit = 0);

// Full CSLS score matrix (sources x targets).
Eigen::MatrixXd CslsScores(const Eigen::MatrixXd &mapped_source,
                           const Eigen::MatrixXd &target, int k);

// Gold translations: source index -> set of acceptable target indices.
using GoldTranslations = std::map<Eigen::Index, std::set<Eigen::Index>>;

// Fraction of gold sources whose top-k predictions hit a gold target.
// Throws ValidationError for a gold source without predictions.
double PrecisionAtK(const std::vector<std::vector<Eigen::Index>> &predictions,
                    const GoldTranslations &gold, int k);

}  // namespace xlrep::align

#endif  // XLREP_EMBEDDING_ALIGN_H_
