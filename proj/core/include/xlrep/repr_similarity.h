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

#ifndef XLREP_REPR_SIMILARITY_H_
#define XLREP_REPR_SIMILARITY_H_

#include <vector>

#include <Eigen/Dense>

#include "xlrep/types.h"

// Similarity statistics between hidden-state matrices. Sentence
// representations are n x d with one row per sentence.
namespace xlrep::similarity {

// Mean of the rows of `tokens` (m x d) whose `excluded` flag is false.
// Throws ValidationError if every row is excluded.
Eigen::VectorXd MeanPool(const Eigen::MatrixXd &tokens,
                         const std::vector<bool> &excluded);

// Linear centered kernel alignment
//   CKA(X, Y) = ||Y^T X||_F^2 / (||X^T X||_F ||Y^T Y||_F)
// evaluated after mean-centering the columns of both matrices. The result is
// clamped into [0, 1].
double LinearCka(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y);

// For each row of x, the index of the row of y with the largest cosine
// similarity (lowest index on ties).
std::vector<Eigen::Index> CosineNearest(const Eigen::MatrixXd &x,
                                        const Eigen::MatrixXd &y);

// Running mean of d-dimensional vectors added in batches.
class StreamingMean {
 public:
  explicit StreamingMean(Eigen::Index dimension);

  void Add(const Eigen::VectorXd &v);
  // Adds every row of `rows`.
  void AddRows(const Eigen::MatrixXd &rows);

  long count() const { return count_; }
  // Throws ValidationError when nothing was added.
  Eigen::VectorXd Mean() const;

 private:
  Eigen::VectorXd sum_;
  long count_ = 0;
};

// Rows of the `.vec` space as an n x d matrix.
Eigen::MatrixXd RowsOf(const EmbeddingSpace &space);

// Stacks every 2-D entry of `params` (in order) into one n x d matrix.
Eigen::MatrixXd RowsOf(const ParamVector &params);

}  // namespace xlrep::similarity

#endif  // XLREP_REPR_SIMILARITY_H_
