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

#ifndef XLREP_ALIGN_LOSSES_H_
#define XLREP_ALIGN_LOSSES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "xlrep/rng.h"
#include "xlrep/types.h"

// Explicit alignment objectives over paired hidden states and their
// analytic gradients.
//
// Sign convention: the contrastive objectives are returned as negative
// log-likelihoods (>= 0, lower is better), i.e. the negation of the
// log-softmax sums they are built from.
namespace xlrep::losses {

inline constexpr double kDefaultTemperature = 0.1;
inline constexpr double kDefaultLambda = 1.0;

// Row i of `source` and `target` are the hidden states of the i-th aligned
// word pair (B x d). `source_full` holds all source states including
// unaligned words, `source_full_pretrained` the same states under the
// pretrained encoder.
struct LossBatch {
  Eigen::MatrixXd source;
  Eigen::MatrixXd target;
  std::optional<Eigen::MatrixXd> source_full;
  std::optional<Eigen::MatrixXd> source_full_pretrained;

  // Throws ValidationError on shape mismatch or B < 1.
  void Validate() const;
  Eigen::Index size() const { return source.rows(); }

  // Reads entries "S", "T" and optional "S_full", "S_full_pre".
  static LossBatch FromParams(const ParamVector &params);
};

// One-hidden-layer ReLU feature extractor
//   f(x) = W2 relu(W1 x + b1) + b2
// with W1: h x d, W2: p x h.
struct MlpExtractor {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;

  void Validate() const;
  Eigen::Index input_dim() const { return w1.cols(); }
  Eigen::VectorXd Forward(const Eigen::VectorXd &x) const;

  // Entries "W1", "b1", "W2", "b2".
  ParamVector ToParams() const;
  static MlpExtractor FromParams(const ParamVector &params);

  // Weights and biases uniform in [-0.1, 0.1].
  static MlpExtractor Random(Eigen::Index input, Eigen::Index hidden,
                             Eigen::Index projection, Rng &rng);

  // Projection width used when none is given: max(1, floor(d / 6)).
  static Eigen::Index DefaultProjection(Eigen::Index input) {
    return std::max<Eigen::Index>(1, input / 6);
  }
};

enum class LossKind { kL2, kWeak, kStrong };

// Parses "l2", "weak" or "strong".
LossKind ParseLossKind(std::string_view name);
const char *LossKindName(LossKind kind);

// mean_i ||s_i - t_i||^2.
double L2Loss(const LossBatch &batch);

// ||S_full - S_full_pretrained||_F^2. Throws if either matrix is missing.
double RegHidden(const LossBatch &batch);

// ||theta - theta_pretrained||^2 over all parameters.
double RegParam(const ParamVector &theta, const ParamVector &pretrained);

// L2Loss + lambda * RegParam.
double L2WithParamRegularizer(const LossBatch &batch, const ParamVector &theta,
                              const ParamVector &pretrained,
                              double lambda = kDefaultLambda);

double Cosine(const Eigen::VectorXd &a, const Eigen::VectorXd &b);

// cos(f(a), f(b)). Throws NumericalError if a projection is zero.
double MlpCosine(const MlpExtractor &f, const Eigen::VectorXd &a,
                 const Eigen::VectorXd &b);

// Contrastive losses over precomputed logits. For the weak loss
// logits(i, j) = sim(s_i, t_j) / T (B x B). For the strong loss logits is
// the 2B x 2B matrix over H = (s_1..s_B, t_1..t_B); the diagonal is ignored.
double WeakLossFromLogits(const Eigen::MatrixXd &logits);
double StrongLossFromLogits(const Eigen::MatrixXd &logits);

// Weak alignment: s_i against all t_j and t_i against all s_j. `mlp` selects
// the learned cosine similarity; nullptr means plain cosine.
double WeakLoss(const LossBatch &batch, const MlpExtractor *mlp = nullptr,
                double temperature = kDefaultTemperature);

// Strong alignment: every h in H against all other members of H.
double StrongLoss(const LossBatch &batch, const MlpExtractor *mlp = nullptr,
                  double temperature = kDefaultTemperature);

double Loss(LossKind kind, const LossBatch &batch, const MlpExtractor *mlp,
            double temperature = kDefaultTemperature);

struct MlpGradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;
};

struct LossGradient {
  double value = 0;
  Eigen::MatrixXd source;  // d loss / d S
  Eigen::MatrixXd target;  // d loss / d T
  // Present whenever an extractor was supplied. The L2 loss does not use the
  // similarity function, so its extractor gradient is zero.
  std::optional<MlpGradient> mlp;
};

// Analytic gradient of the selected loss. ReLU'(0) is taken as 0.
LossGradient LossGrad(LossKind kind, const LossBatch &batch,
                      const MlpExtractor *mlp,
                      double temperature = kDefaultTemperature);

// Smallest |pre-activation| of the extractor over every state in the batch.
double MinPreactivationMagnitude(const MlpExtractor &mlp,
                                 const LossBatch &batch);

struct GradientCheckReport {
  // max |analytic - numeric| / max(1, |analytic|) per parameter block.
  double source = 0;
  double target = 0;
  double mlp = 0;
  double Max() const { return std::max({source, target, mlp}); }
};

// Compares LossGrad against central finite differences with step `step`.
GradientCheckReport CheckGradient(LossKind kind, const LossBatch &batch,
                                  const MlpExtractor *mlp, double temperature,
                                  double step = 1e-4);

}  // namespace xlrep::losses

#endif  // XLREP_ALIGN_LOSSES_H_
