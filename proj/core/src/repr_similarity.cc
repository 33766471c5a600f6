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

#include "xlrep/repr_similarity.h"

#include <algorithm>

#include "xlrep/errors.h"

namespace xlrep::similarity {

Eigen::VectorXd MeanPool(const Eigen::MatrixXd &tokens,
                         const std::vector<bool> &excluded) {
  if (static_cast<Eigen::Index>(excluded.size()) != tokens.rows()) {
    throw ValidationError("exclusion mask does not match token count");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(tokens.cols());
  long kept = 0;
  for (Eigen::Index i = 0; i < tokens.rows(); ++i) {
    if (excluded[i]) continue;
    sum += tokens.row(i).transpose();
    ++kept;
  }
  if (kept == 0) throw ValidationError("all tokens excluded from pooling");
  return sum / static_cast<double>(kept);
}

double LinearCka(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y) {
  if (x.rows() != y.rows()) {
    throw ValidationError("CKA inputs have " + std::to_string(x.rows()) +
                          " and " + std::to_string(y.rows()) + " rows");
  }
  if (x.rows() < 2) throw ValidationError("CKA needs at least 2 rows");
  if (!x.allFinite() || !y.allFinite()) {
    throw ValidationError("CKA inputs must be finite");
  }
  const Eigen::MatrixXd xc = x.rowwise() - x.colwise().mean();
  const Eigen::MatrixXd yc = y.rowwise() - y.colwise().mean();
  const double xx = (xc.transpose() * xc).norm();
  const double yy = (yc.transpose() * yc).norm();
  if (xx == 0.0 || yy == 0.0) {
    throw ValidationError("CKA undefined for a matrix that is zero after "
                          "centering");
  }
  const double cross = (yc.transpose() * xc).squaredNorm();
  return std::clamp(cross / (xx * yy), 0.0, 1.0);
}

std::vector<Eigen::Index> CosineNearest(const Eigen::MatrixXd &x,
                                        const Eigen::MatrixXd &y) {
  if (x.cols() != y.cols()) {
    throw ValidationError("retrieval inputs differ in dimension");
  }
  if (y.rows() == 0) throw ValidationError("empty retrieval target");
  auto normalized = [](const Eigen::MatrixXd &m, const char *what) {
    Eigen::VectorXd norms = m.rowwise().norm();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (norms(i) == 0.0) {
        throw ValidationError(std::string("zero-norm row ") +
                              std::to_string(i) + " in " + what);
      }
    }
    return Eigen::MatrixXd(norms.cwiseInverse().asDiagonal() * m);
  };
  const Eigen::MatrixXd cos =
      normalized(x, "queries") * normalized(y, "candidates").transpose();
  std::vector<Eigen::Index> best(x.rows());
  for (Eigen::Index i = 0; i < cos.rows(); ++i) {
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < cos.cols(); ++j) {
      if (cos(i, j) > cos(i, arg)) arg = j;
    }
    best[i] = arg;
  }
  return best;
}

StreamingMean::StreamingMean(Eigen::Index dimension)
    : sum_(Eigen::VectorXd::Zero(dimension)) {}

void StreamingMean::Add(const Eigen::VectorXd &v) {
  if (v.size() != sum_.size()) {
    throw ValidationError("streaming mean dimension mismatch");
  }
  sum_ += v;
  ++count_;
}

void StreamingMean::AddRows(const Eigen::MatrixXd &rows) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) Add(rows.row(i).transpose());
}

Eigen::VectorXd StreamingMean::Mean() const {
  if (count_ == 0) throw ValidationError("mean of an empty stream");
  return sum_ / static_cast<double>(count_);
}

Eigen::MatrixXd RowsOf(const EmbeddingSpace &space) {
  return space.vectors().transpose();
}

Eigen::MatrixXd RowsOf(const ParamVector &params) {
  Eigen::Index rows = 0;
  Eigen::Index cols = -1;
  for (const ParamEntry &e : params.entries()) {
    if (e.shape.size() != 2) {
      throw ValidationError("entry '" + e.name + "' is not a 2-D matrix");
    }
    if (cols >= 0 && e.shape[1] != cols) {
      throw ValidationError("entry '" + e.name + "' has width " +
                            std::to_string(e.shape[1]) + ", expected " +
                            std::to_string(cols));
    }
    cols = e.shape[1];
    rows += e.shape[0];
  }
  if (cols < 0) throw ValidationError("no hidden-state entries");
  Eigen::MatrixXd out(rows, cols);
  Eigen::Index r = 0;
  for (const ParamEntry &e : params.entries()) {
    for (std::int64_t i = 0; i < e.shape[0]; ++i, ++r) {
      for (std::int64_t j = 0; j < cols; ++j) {
        out(r, j) = e.data[i * cols + j];
      }
    }
  }
  return out;
}

}  // namespace xlrep::similarity
