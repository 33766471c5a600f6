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

#include "xlrep/embedding_align.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xlrep/errors.h"

namespace xlrep::align {
namespace {

void CheckNoZeroColumns(const Eigen::MatrixXd &m, const char *what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (m.col(j).norm() == 0.0) {
      throw NumericalError(std::string("zero-norm vector at ") + what +
                           " column " + std::to_string(j));
    }
  }
}

Eigen::MatrixXd NormalizedColumns(const Eigen::MatrixXd &m, const char *what) {
  CheckNoZeroColumns(m, what);
  return m.colwise().normalized();
}

// Selected supervision columns of source and target.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> SelectPairs(
    const EmbeddingSpace &source, const EmbeddingSpace &target,
    const SupervisionPairs &pairs) {
  if (source.dimension() != target.dimension()) {
    throw ValidationError("dimension mismatch: " +
                          std::to_string(source.dimension()) + " vs " +
                          std::to_string(target.dimension()));
  }
  if (pairs.empty()) throw ValidationError("empty supervision");
  const Eigen::Index m = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd x(source.dimension(), m);
  Eigen::MatrixXd y(target.dimension(), m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const auto [s, t] = pairs[k];
    if (s < 0 || s >= source.size() || t < 0 || t >= target.size()) {
      throw ValidationError("supervision pair " + std::to_string(k) +
                            " out of range");
    }
    x.col(k) = source.vectors().col(s);
    y.col(k) = target.vectors().col(t);
  }
  return {std::move(x), std::move(y)};
}

// Mean of the k largest entries.
double TopKMean(std::vector<double> &values, int k) {
  std::nth_element(values.begin(), values.begin() + (k - 1), values.end(),
                   std::greater<>());
  double sum = 0;
  for (int i = 0; i < k; ++i) sum += values[i];
  return sum / k;
}

}  // namespace

double OrthogonalMap::OrthogonalityError() const {
  const Eigen::Index d = matrix.rows();
  return (matrix * matrix.transpose() - Eigen::MatrixXd::Identity(d, d))
      .norm();
}

EmbeddingSpace OrthogonalMap::Apply(const EmbeddingSpace &space) const {
  if (space.dimension() != matrix.cols()) {
    throw ValidationError("map of size " + std::to_string(matrix.cols()) +
                          " applied to dimension " +
                          std::to_string(space.dimension()));
  }
  return space.WithVectors(matrix * space.vectors());
}

double OrthogonalityTolerance(Eigen::Index dimension) {
  return 1e-4 * std::sqrt(static_cast<double>(dimension));
}

SupervisionPairs ResolvePairs(
    const EmbeddingSpace &source, const EmbeddingSpace &target,
    const std::vector<std::pair<std::string, std::string>> &words,
    std::size_t *skipped) {
  SupervisionPairs pairs;
  std::size_t missing = 0;
  for (const auto &[s, t] : words) {
    auto si = source.IndexOf(s);
    auto ti = target.IndexOf(t);
    if (!si || !ti) {
      ++missing;
      continue;
    }
    pairs.emplace_back(*si, *ti);
  }
  if (skipped) *skipped = missing;
  return pairs;
}

EmbeddingSpace IterativeNormalize(const EmbeddingSpace &space,
                                  const NormalizeOptions &options) {
  if (space.dimension() < 1 || space.size() < 1) {
    throw ValidationError("iterative normalization needs d >= 1 and n >= 1");
  }
  if (!(options.tolerance > 0)) {
    throw ValidationError("tolerance must be positive");
  }
  Eigen::MatrixXd v = space.vectors();
  auto converged = [&]() {
    const double norm_dev =
        (v.colwise().norm().array() - 1.0).abs().maxCoeff();
    const double mean = v.rowwise().mean().norm();
    return norm_dev < options.tolerance && mean < options.tolerance;
  };
  for (int it = 0; it < options.max_iterations && !converged(); ++it) {
    CheckNoZeroColumns(v, "normalization");
    v = v.colwise().normalized().eval();
    // Centering a single column would zero it.
    if (v.cols() > 1) v = (v.colwise() - v.rowwise().mean()).eval();
  }
  // The final pass must leave unit columns.
  if (!converged()) {
    CheckNoZeroColumns(v, "normalization");
    v = v.colwise().normalized().eval();
  }
  return space.WithVectors(std::move(v));
}

Eigen::MatrixXd ProcrustesSolve(const Eigen::MatrixXd &x,
                                const Eigen::MatrixXd &y) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(y * x.transpose(),
                                        Eigen::ComputeFullU |
                                            Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

OrthogonalMap ProcrustesFit(const EmbeddingSpace &source,
                            const EmbeddingSpace &target,
                            const SupervisionPairs &pairs) {
  auto [x, y] = SelectPairs(source, target, pairs);
  return {ProcrustesSolve(x, y)};
}

double AlignmentObjective(const Eigen::MatrixXd &w, const Eigen::MatrixXd &x,
                          const Eigen::MatrixXd &y) {
  return (w * x - y).squaredNorm();
}

Eigen::MatrixXd RetractOrthogonal(const Eigen::MatrixXd &w, double beta) {
  return (1.0 + beta) * w - beta * (w * w.transpose()) * w;
}

GradientFitResult GradientOrthogonalFit(const EmbeddingSpace &source,
                                        const EmbeddingSpace &target,
                                        const SupervisionPairs &pairs,
                                        const GradientFitOptions &options) {
  if (!(options.beta > 0 && options.beta < 1)) {
    throw ValidationError("beta must lie in (0, 1)");
  }
  if (options.steps < 1) throw ValidationError("steps must be >= 1");
  if (!(options.learning_rate >= 0)) {
    throw ValidationError("learning rate must be non-negative");
  }
  auto [x, y] = SelectPairs(source, target, pairs);
  const double scale = 1.0 / static_cast<double>(x.cols());
  const Eigen::Index d = x.rows();

  GradientFitResult result;
  result.objective_history.reserve(options.steps);
  Eigen::MatrixXd w = Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd xxt = x * x.transpose();
  const Eigen::MatrixXd yxt = y * x.transpose();
  for (int step = 0; step < options.steps; ++step) {
    // Gradient of (1/m)||WX - Y||^2 is (2/m)(W X X^T - Y X^T).
    w -= options.learning_rate * 2.0 * scale * (w * xxt - yxt);
    w = RetractOrthogonal(w, options.beta);
    const double objective = scale * AlignmentObjective(w, x, y);
    if (!std::isfinite(objective) || !w.allFinite()) {
      throw NumericalError("gradient fit diverged at step " +
                           std::to_string(step));
    }
    result.objective_history.push_back(objective);
  }

  // Further retraction steps until the map meets the orthogonality bound.
  const double target_error = 0.5 * OrthogonalityTolerance(d);
  OrthogonalMap map{std::move(w)};
  while (map.OrthogonalityError() > target_error) {
    if (result.polish_steps >= options.max_polish_steps) {
      throw NumericalError("orthogonality retraction did not converge");
    }
    map.matrix = RetractOrthogonal(map.matrix, options.beta);
    if (!map.matrix.allFinite()) {
      throw NumericalError("orthogonality retraction diverged");
    }
    ++result.polish_steps;
  }
  result.map = std::move(map);
  return result;
}

Eigen::MatrixXd CslsScores(const Eigen::MatrixXd &mapped_source,
                           const Eigen::MatrixXd &target, int k) {
  if (mapped_source.rows() != target.rows()) {
    throw ValidationError("dimension mismatch in CSLS");
  }
  const Eigen::Index ns = mapped_source.cols();
  const Eigen::Index nt = target.cols();
  if (k < 1 || k > nt || k > ns) {
    throw ValidationError("CSLS neighborhood k=" + std::to_string(k) +
                          " must be in [1, min(" + std::to_string(ns) + ", " +
                          std::to_string(nt) + ")]");
  }
  const Eigen::MatrixXd xs = NormalizedColumns(mapped_source, "source");
  const Eigen::MatrixXd yt = NormalizedColumns(target, "target");
  const Eigen::MatrixXd cos = xs.transpose() * yt;  // ns x nt

  Eigen::VectorXd r_target(ns);
  std::vector<double> buf(nt);
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < nt; ++j) buf[j] = cos(i, j);
    r_target(i) = TopKMean(buf, k);
  }
  Eigen::VectorXd r_source(nt);
  buf.resize(ns);
  for (Eigen::Index j = 0; j < nt; ++j) {
    for (Eigen::Index i = 0; i < ns; ++i) buf[i] = cos(i, j);
    r_source(j) = TopKMean(buf, k);
  }
  Eigen::MatrixXd scores = 2.0 * cos;
  scores.colwise() -= r_target;
  scores.rowwise() -= r_source.transpose();
  return scores;
}

std::vector<std::vector<Eigen::Index>> CslsRetrieve(
    const EmbeddingSpace &mapped_source, const EmbeddingSpace &target, int k,
    int limit) {
  const Eigen::MatrixXd scores =
      CslsScores(mapped_source.vectors(), target.vectors(), k);
  const Eigen::Index nt = scores.cols();
  const Eigen::Index keep = limit > 0 ? std::min<Eigen::Index>(limit, nt) : nt;
  std::vector<std::vector<Eigen::Index>> ranked(scores.rows());
  std::vector<Eigen::Index> order(nt);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    std::iota(order.begin(), order.end(), 0);
    auto by_score = [&](Eigen::Index a, Eigen::Index b) {
      if (scores(i, a) != scores(i, b)) return scores(i, a) > scores(i, b);
      return a < b;
    };
    std::partial_sort(order.begin(), order.begin() + keep, order.end(),
                      by_score);
    ranked[i].assign(order.begin(), order.begin() + keep);
  }
  return ranked;
}

double PrecisionAtK(const std::vector<std::vector<Eigen::Index>> &predictions,
                    const GoldTranslations &gold, int k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (gold.empty()) throw ValidationError("empty gold set");
  std::size_t hits = 0;
  for (const auto &[source, targets] : gold) {
    if (targets.empty()) {
      throw ValidationError("gold source " + std::to_string(source) +
                            " has no gold target");
    }
    if (source < 0 || source >= static_cast<Eigen::Index>(predictions.size()) ||
        predictions[source].empty()) {
      throw ValidationError("no predictions for gold source " +
                            std::to_string(source));
    }
    const auto &ranked = predictions[source];
    const std::size_t top = std::min<std::size_t>(k, ranked.size());
    for (std::size_t r = 0; r < top; ++r) {
      if (targets.count(ranked[r])) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

}  // namespace xlrep::align
