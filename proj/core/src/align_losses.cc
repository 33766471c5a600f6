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

#include "xlrep/align_losses.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "xlrep/errors.h"

namespace xlrep::losses {
namespace {

void CheckTemperature(double temperature) {
  if (!(temperature > 0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be positive");
  }
}

Eigen::MatrixXd EntryMatrix(const ParamEntry &e) {
  if (e.shape.size() != 2) {
    throw ValidationError("entry '" + e.name + "' must be 2-D");
  }
  Eigen::MatrixXd m(e.shape[0], e.shape[1]);
  for (std::int64_t i = 0; i < e.shape[0]; ++i) {
    for (std::int64_t j = 0; j < e.shape[1]; ++j) {
      m(i, j) = e.data[i * e.shape[1] + j];
    }
  }
  return m;
}

Eigen::VectorXd EntryVector(const ParamEntry &e) {
  if (e.shape.size() != 1) {
    throw ValidationError("entry '" + e.name + "' must be 1-D");
  }
  return Eigen::Map<const Eigen::VectorXd>(e.data.data(), e.shape[0]);
}

const ParamEntry &Require(const ParamVector &p, const char *name) {
  const ParamEntry *e = p.Find(name);
  if (!e) throw ValidationError(std::string("missing entry '") + name + "'");
  return *e;
}

std::vector<double> RowMajor(const Eigen::MatrixXd &m) {
  std::vector<double> out;
  out.reserve(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(m(i, j));
  }
  return out;
}

double LogSumExp(const Eigen::Ref<const Eigen::VectorXd> &v) {
  const double hi = v.maxCoeff();
  return hi + std::log((v.array() - hi).exp().sum());
}

// Softmax of v, excluding index `skip` (which gets probability 0) when
// skip >= 0.
Eigen::VectorXd Softmax(const Eigen::Ref<const Eigen::VectorXd> &v,
                        Eigen::Index skip = -1) {
  double hi = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k != skip) hi = std::max(hi, v(k));
  }
  Eigen::VectorXd e(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    e(k) = k == skip ? 0.0 : std::exp(v(k) - hi);
  }
  return e / e.sum();
}

// Unit-normalized features of a set of hidden states (one per row), with
// the intermediate values backpropagation needs.
struct Encoded {
  Eigen::MatrixXd inputs;  // n x d
  Eigen::MatrixXd pre;     // n x h (MLP only)
  Eigen::MatrixXd act;     // n x h (MLP only)
  Eigen::VectorXd norms;   // ||z_i||
  Eigen::MatrixXd unit;    // n x p
};

Encoded Encode(const Eigen::MatrixXd &rows, const MlpExtractor *mlp) {
  Encoded enc;
  enc.inputs = rows;
  Eigen::MatrixXd z;
  if (mlp) {
    if (rows.cols() != mlp->input_dim()) {
      throw ValidationError("extractor expects dimension " +
                            std::to_string(mlp->input_dim()) + ", got " +
                            std::to_string(rows.cols()));
    }
    enc.pre = (rows * mlp->w1.transpose()).rowwise() + mlp->b1.transpose();
    enc.act = enc.pre.cwiseMax(0.0);
    z = (enc.act * mlp->w2.transpose()).rowwise() + mlp->b2.transpose();
  } else {
    z = rows;
  }
  enc.norms = z.rowwise().norm();
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    if (enc.norms(i) == 0.0) {
      throw NumericalError("zero-norm feature vector in similarity");
    }
  }
  enc.unit = enc.norms.cwiseInverse().asDiagonal() * z;
  return enc;
}

// Maps d loss / d unit back to d loss / d inputs, accumulating extractor
// gradients into `grad` when an extractor is used.
Eigen::MatrixXd Backprop(const Encoded &enc, const Eigen::MatrixXd &d_unit,
                         const MlpExtractor *mlp, MlpGradient *grad) {
  Eigen::MatrixXd dz(d_unit.rows(), d_unit.cols());
  for (Eigen::Index i = 0; i < d_unit.rows(); ++i) {
    const auto u = enc.unit.row(i);
    const auto du = d_unit.row(i);
    dz.row(i) = (du - u * u.dot(du)) / enc.norms(i);
  }
  if (!mlp) return dz;
  grad->w2 += dz.transpose() * enc.act;
  grad->b2 += dz.colwise().sum().transpose();
  Eigen::MatrixXd dpre = dz * mlp->w2;
  dpre = dpre.cwiseProduct((enc.pre.array() > 0.0).cast<double>().matrix());
  grad->w1 += dpre.transpose() * enc.inputs;
  grad->b1 += dpre.colwise().sum().transpose();
  return dpre * mlp->w1;
}

MlpGradient ZeroGradient(const MlpExtractor &mlp) {
  return {Eigen::MatrixXd::Zero(mlp.w1.rows(), mlp.w1.cols()),
          Eigen::VectorXd::Zero(mlp.b1.size()),
          Eigen::MatrixXd::Zero(mlp.w2.rows(), mlp.w2.cols()),
          Eigen::VectorXd::Zero(mlp.b2.size())};
}

// d loss / d logits for the weak loss.
Eigen::MatrixXd WeakLogitGradient(const Eigen::MatrixXd &logits) {
  const Eigen::Index b = logits.rows();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(b, b);
  for (Eigen::Index i = 0; i < b; ++i) {
    g.row(i) += Softmax(logits.row(i).transpose()).transpose();
    g.col(i) += Softmax(logits.col(i));
  }
  g.diagonal().array() -= 2.0;
  return g / (2.0 * static_cast<double>(b));
}

Eigen::MatrixXd StrongLogitGradient(const Eigen::MatrixXd &logits) {
  const Eigen::Index n = logits.rows();
  const Eigen::Index b = n / 2;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    g.row(a) = Softmax(logits.row(a).transpose(), a).transpose();
    g(a, a < b ? a + b : a - b) -= 1.0;
  }
  return g / static_cast<double>(n);
}

void CheckContrastive(const LossBatch &batch, double temperature) {
  batch.Validate();
  CheckTemperature(temperature);
}

}  // namespace

void LossBatch::Validate() const {
  if (source.rows() < 1) throw ValidationError("batch needs B >= 1 pairs");
  if (source.rows() != target.rows() || source.cols() != target.cols()) {
    throw ValidationError("S and T must have the same shape");
  }
  if (source_full && source_full_pretrained &&
      (source_full->rows() != source_full_pretrained->rows() ||
       source_full->cols() != source_full_pretrained->cols())) {
    throw ValidationError("S_full and S_full_pre must have the same shape");
  }
  if (!source.allFinite() || !target.allFinite()) {
    throw ValidationError("batch contains non-finite values");
  }
}

LossBatch LossBatch::FromParams(const ParamVector &params) {
  LossBatch batch;
  batch.source = EntryMatrix(Require(params, "S"));
  batch.target = EntryMatrix(Require(params, "T"));
  if (const ParamEntry *e = params.Find("S_full")) {
    batch.source_full = EntryMatrix(*e);
  }
  if (const ParamEntry *e = params.Find("S_full_pre")) {
    batch.source_full_pretrained = EntryMatrix(*e);
  }
  batch.Validate();
  return batch;
}

void MlpExtractor::Validate() const {
  if (w1.rows() != b1.size() || w2.cols() != w1.rows() ||
      w2.rows() != b2.size() || w1.cols() < 1 || w2.rows() < 1) {
    throw ValidationError("inconsistent extractor shapes");
  }
  if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() ||
      !b2.allFinite()) {
    throw ValidationError("extractor contains non-finite values");
  }
}

Eigen::VectorXd MlpExtractor::Forward(const Eigen::VectorXd &x) const {
  return w2 * (w1 * x + b1).cwiseMax(0.0) + b2;
}

ParamVector MlpExtractor::ToParams() const {
  ParamVector p;
  p.Add("W1", {w1.rows(), w1.cols()}, RowMajor(w1));
  p.Add("b1", {b1.size()}, std::vector<double>(b1.begin(), b1.end()));
  p.Add("W2", {w2.rows(), w2.cols()}, RowMajor(w2));
  p.Add("b2", {b2.size()}, std::vector<double>(b2.begin(), b2.end()));
  return p;
}

MlpExtractor MlpExtractor::FromParams(const ParamVector &params) {
  MlpExtractor f{EntryMatrix(Require(params, "W1")),
                 EntryVector(Require(params, "b1")),
                 EntryMatrix(Require(params, "W2")),
                 EntryVector(Require(params, "b2"))};
  f.Validate();
  return f;
}

MlpExtractor MlpExtractor::Random(Eigen::Index input, Eigen::Index hidden,
                                  Eigen::Index projection, Rng &rng) {
  auto fill = [&rng](Eigen::Index r, Eigen::Index c) {
    Eigen::MatrixXd m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < c; ++j) m(i, j) = rng.Uniform(-0.1, 0.1);
    }
    return m;
  };
  MlpExtractor f;
  f.w1 = fill(hidden, input);
  f.b1 = fill(hidden, 1).col(0);
  f.w2 = fill(projection, hidden);
  f.b2 = fill(projection, 1).col(0);
  return f;
}

LossKind ParseLossKind(std::string_view name) {
  if (name == "l2") return LossKind::kL2;
  if (name == "weak") return LossKind::kWeak;
  if (name == "strong") return LossKind::kStrong;
  throw ValidationError("unknown loss '" + std::string(name) + "'");
}

const char *LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kL2:
      return "l2";
    case LossKind::kWeak:
      return "weak";
    case LossKind::kStrong:
      return "strong";
  }
  return "?";
}

double L2Loss(const LossBatch &batch) {
  batch.Validate();
  return (batch.source - batch.target).rowwise().squaredNorm().mean();
}

double RegHidden(const LossBatch &batch) {
  if (!batch.source_full || !batch.source_full_pretrained) {
    throw ValidationError("reg-hidden needs S_full and S_full_pre");
  }
  batch.Validate();
  return (*batch.source_full - *batch.source_full_pretrained).squaredNorm();
}

double RegParam(const ParamVector &theta, const ParamVector &pretrained) {
  theta.CheckCompatible(pretrained);
  double total = 0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    const auto &a = theta.entries()[k].data;
    const auto &b = pretrained.entries()[k].data;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double diff = a[i] - b[i];
      total += diff * diff;
    }
  }
  return total;
}

double L2WithParamRegularizer(const LossBatch &batch, const ParamVector &theta,
                              const ParamVector &pretrained, double lambda) {
  return L2Loss(batch) + lambda * RegParam(theta, pretrained);
}

double Cosine(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  if (a.size() != b.size()) throw ValidationError("cosine size mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    throw NumericalError("cosine of a zero vector");
  }
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

double MlpCosine(const MlpExtractor &f, const Eigen::VectorXd &a,
                 const Eigen::VectorXd &b) {
  f.Validate();
  if (a.size() != f.input_dim() || b.size() != f.input_dim()) {
    throw ValidationError("extractor input size mismatch");
  }
  return Cosine(f.Forward(a), f.Forward(b));
}

double WeakLossFromLogits(const Eigen::MatrixXd &logits) {
  const Eigen::Index b = logits.rows();
  if (b < 1 || logits.cols() != b) {
    throw ValidationError("weak loss needs a square B x B logit matrix");
  }
  double total = 0;
  for (Eigen::Index i = 0; i < b; ++i) {
    total += LogSumExp(logits.row(i).transpose()) - logits(i, i);
    total += LogSumExp(logits.col(i)) - logits(i, i);
  }
  return total / (2.0 * static_cast<double>(b));
}

double StrongLossFromLogits(const Eigen::MatrixXd &logits) {
  const Eigen::Index n = logits.rows();
  if (n < 2 || n % 2 != 0 || logits.cols() != n) {
    throw ValidationError("strong loss needs a square 2B x 2B logit matrix");
  }
  const Eigen::Index b = n / 2;
  double total = 0;
  Eigen::VectorXd others(n - 1);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index k = 0, o = 0; k < n; ++k) {
      if (k != a) others(o++) = logits(a, k);
    }
    total += LogSumExp(others) - logits(a, a < b ? a + b : a - b);
  }
  return total / static_cast<double>(n);
}

double WeakLoss(const LossBatch &batch, const MlpExtractor *mlp,
                double temperature) {
  CheckContrastive(batch, temperature);
  if (mlp) mlp->Validate();
  const Encoded s = Encode(batch.source, mlp);
  const Encoded t = Encode(batch.target, mlp);
  return WeakLossFromLogits(s.unit * t.unit.transpose() / temperature);
}

double StrongLoss(const LossBatch &batch, const MlpExtractor *mlp,
                  double temperature) {
  CheckContrastive(batch, temperature);
  if (mlp) mlp->Validate();
  Eigen::MatrixXd all(2 * batch.size(), batch.source.cols());
  all << batch.source, batch.target;
  const Encoded h = Encode(all, mlp);
  return StrongLossFromLogits(h.unit * h.unit.transpose() / temperature);
}

double Loss(LossKind kind, const LossBatch &batch, const MlpExtractor *mlp,
            double temperature) {
  switch (kind) {
    case LossKind::kL2:
      return L2Loss(batch);
    case LossKind::kWeak:
      return WeakLoss(batch, mlp, temperature);
    case LossKind::kStrong:
      return StrongLoss(batch, mlp, temperature);
  }
  throw ValidationError("unknown loss kind");
}

LossGradient LossGrad(LossKind kind, const LossBatch &batch,
                      const MlpExtractor *mlp, double temperature) {
  batch.Validate();
  if (mlp) mlp->Validate();
  LossGradient grad;
  if (mlp) grad.mlp = ZeroGradient(*mlp);
  MlpGradient *mlp_grad = grad.mlp ? &*grad.mlp : nullptr;
  const Eigen::Index b = batch.size();

  switch (kind) {
    case LossKind::kL2: {
      grad.value = L2Loss(batch);
      grad.source = (2.0 / static_cast<double>(b)) *
                    (batch.source - batch.target);
      grad.target = -grad.source;
      break;
    }
    case LossKind::kWeak: {
      CheckTemperature(temperature);
      const Encoded s = Encode(batch.source, mlp);
      const Encoded t = Encode(batch.target, mlp);
      const Eigen::MatrixXd logits = s.unit * t.unit.transpose() / temperature;
      grad.value = WeakLossFromLogits(logits);
      const Eigen::MatrixXd g = WeakLogitGradient(logits) / temperature;
      grad.source = Backprop(s, g * t.unit, mlp, mlp_grad);
      grad.target = Backprop(t, g.transpose() * s.unit, mlp, mlp_grad);
      break;
    }
    case LossKind::kStrong: {
      CheckTemperature(temperature);
      Eigen::MatrixXd all(2 * b, batch.source.cols());
      all << batch.source, batch.target;
      const Encoded h = Encode(all, mlp);
      const Eigen::MatrixXd logits = h.unit * h.unit.transpose() / temperature;
      grad.value = StrongLossFromLogits(logits);
      const Eigen::MatrixXd g = StrongLogitGradient(logits) / temperature;
      const Eigen::MatrixXd dx =
          Backprop(h, (g + g.transpose()) * h.unit, mlp, mlp_grad);
      grad.source = dx.topRows(b);
      grad.target = dx.bottomRows(b);
      break;
    }
  }
  return grad;
}

double MinPreactivationMagnitude(const MlpExtractor &mlp,
                                 const LossBatch &batch) {
  Eigen::MatrixXd all(2 * batch.size(), batch.source.cols());
  all << batch.source, batch.target;
  const Eigen::MatrixXd pre =
      (all * mlp.w1.transpose()).rowwise() + mlp.b1.transpose();
  return pre.cwiseAbs().minCoeff();
}

GradientCheckReport CheckGradient(LossKind kind, const LossBatch &batch,
                                  const MlpExtractor *mlp, double temperature,
                                  double step) {
  const LossGradient analytic = LossGrad(kind, batch, mlp, temperature);
  LossBatch probe = batch;
  MlpExtractor f = mlp ? *mlp : MlpExtractor{};
  const MlpExtractor *fp = mlp ? &f : nullptr;
  auto eval = [&]() { return Loss(kind, probe, fp, temperature); };
  auto worst = [&](auto &values, const auto &expected) {
    double err = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      const double saved = values.data()[i];
      values.data()[i] = saved + step;
      const double up = eval();
      values.data()[i] = saved - step;
      const double down = eval();
      values.data()[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = expected.data()[i];
      err = std::max(err, std::abs(a - numeric) / std::max(1.0, std::abs(a)));
    }
    return err;
  };
  GradientCheckReport report;
  report.source = worst(probe.source, analytic.source);
  report.target = worst(probe.target, analytic.target);
  if (mlp) {
    report.mlp = std::max({worst(f.w1, analytic.mlp->w1),
                           worst(f.b1, analytic.mlp->b1),
                           worst(f.w2, analytic.mlp->w2),
                           worst(f.b2, analytic.mlp->b2)});
  }
  return report;
}

}  // namespace xlrep::losses
