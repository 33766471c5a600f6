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

#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"
#include "test_util.h"
#include "xlrep/align_losses.h"
#include "xlrep/errors.h"

namespace xlrep::losses {
namespace {

using xlrep::testing::TestRandom;

LossBatch Batch(const Eigen::MatrixXd &s, const Eigen::MatrixXd &t) {
  LossBatch b;
  b.source = s;
  b.target = t;
  return b;
}

oracle::Sim PlainSim() {
  return [](const std::vector<double> &a, const std::vector<double> &b) {
    return oracle::Cos(a, b);
  };
}

oracle::Sim MlpSim(const MlpExtractor &f) {
  return [f](const std::vector<double> &a, const std::vector<double> &b) {
    return oracle::Cos(oracle::Mlp(f.w1, f.b1, f.w2, f.b2, a),
                       oracle::Mlp(f.w1, f.b1, f.w2, f.b2, b));
  };
}

TEST(L2Loss, Examples) {
  TestRandom t(1);
  const Eigen::MatrixXd s = t.Matrix(3, 4);
  EXPECT_EQ(L2Loss(Batch(s, s)), 0.0);
  EXPECT_EQ(L2Loss(Batch(Eigen::RowVector2d(1, 0), Eigen::RowVector2d(0, 1))),
            2.0);
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1, 0, 0, 0;
  b << 0, 1, 2, 0;  // squared distances 2 and 4
  EXPECT_EQ(L2Loss(Batch(a, b)), 3.0);
  Eigen::MatrixXd c = s;
  c(2, 3) = std::nextafter(c(2, 3), 10.0);
  EXPECT_GT(L2Loss(Batch(s, c)), 0.0);
}

TEST(Regularizers, Examples) {
  TestRandom t(2);
  LossBatch batch = Batch(t.Matrix(1, 2), t.Matrix(1, 2));
  EXPECT_THROW(RegHidden(batch), ValidationError);
  batch.source_full = t.Matrix(4, 2);
  batch.source_full_pretrained = batch.source_full;
  EXPECT_EQ(RegHidden(batch), 0.0);
  (*batch.source_full_pretrained)(0, 0) += 2.0;
  EXPECT_NEAR(RegHidden(batch), 4.0, 1e-12);

  ParamVector theta, pre;
  theta.Add("w", {2}, {1.0, 5.0});
  pre.Add("w", {2}, {1.0, 2.0});
  EXPECT_EQ(RegParam(theta, pre), 9.0);
  EXPECT_EQ(L2WithParamRegularizer(batch, theta, pre, 0.0), L2Loss(batch));
  EXPECT_EQ(L2WithParamRegularizer(batch, theta, pre),
            L2Loss(batch) + 9.0);
  ParamVector other;
  other.Add("v", {2}, {1.0, 2.0});
  EXPECT_THROW(RegParam(theta, other), ValidationError);
}

TEST(ContrastiveLoss, SinglePairIsZero) {
  TestRandom t(3);
  const LossBatch batch = Batch(t.Matrix(1, 5), t.Matrix(1, 5));
  Rng rng(3);
  const MlpExtractor f = MlpExtractor::Random(5, 5, 2, rng);
  EXPECT_EQ(WeakLoss(batch), 0.0);
  EXPECT_EQ(StrongLoss(batch), 0.0);
  EXPECT_EQ(WeakLoss(batch, &f), 0.0);
  EXPECT_EQ(StrongLoss(batch, &f), 0.0);
}

TEST(ContrastiveLoss, WeakHandEvaluation) {
  // sim = 1 on the diagonal, 0 elsewhere, T = 1: every softmax term is
  // e / (e + 1), so the loss is log(1 + 1/e).
  const double expected = 0.31326168751822286;
  EXPECT_NEAR(WeakLossFromLogits(Eigen::Matrix2d::Identity()), expected,
              1e-15);
  EXPECT_NEAR(WeakLoss(Batch(Eigen::Matrix2d::Identity(),
                             Eigen::Matrix2d::Identity()),
                       nullptr, 1.0),
              expected, 1e-15);
}

TEST(ContrastiveLoss, TemperatureIsDivision) {
  TestRandom t(4);
  const Eigen::MatrixXd sims = t.Matrix(3, 3);
  EXPECT_NEAR(WeakLossFromLogits(sims / 0.1), WeakLossFromLogits(10.0 * sims),
              1e-12);
}

TEST(ContrastiveLoss, StrongOrthonormalEnumeration) {
  // H = e1..e4: all similarities vanish, each anchor has 3 equal
  // candidates and the loss is log 3.
  const Eigen::MatrixXd i4 = Eigen::MatrixXd::Identity(4, 4);
  const double expected = 1.0986122886681098;
  const LossBatch batch = Batch(i4.topRows(2), i4.bottomRows(2));
  EXPECT_NEAR(StrongLoss(batch, nullptr, 1.0), expected, 1e-15);
  EXPECT_NEAR(oracle::StrongLoss(oracle::ToRows(batch.source),
                                 oracle::ToRows(batch.target), PlainSim(), 1.0),
              expected, 1e-15);
}

TEST(ContrastiveLoss, MatchesNaiveFormulas) {
  TestRandom t(5);
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const int b = 2 + trial % 3;
    const LossBatch batch = Batch(t.Matrix(b, 6), t.Matrix(b, 6));
    const auto s = oracle::ToRows(batch.source);
    const auto y = oracle::ToRows(batch.target);
    const MlpExtractor f = MlpExtractor::Random(6, 6, 3, rng);
    EXPECT_NEAR(WeakLoss(batch), oracle::WeakLoss(s, y, PlainSim(), 0.1),
                1e-10);
    EXPECT_NEAR(StrongLoss(batch), oracle::StrongLoss(s, y, PlainSim(), 0.1),
                1e-10);
    EXPECT_NEAR(WeakLoss(batch, &f, 0.5),
                oracle::WeakLoss(s, y, MlpSim(f), 0.5), 1e-10);
    EXPECT_NEAR(StrongLoss(batch, &f, 0.5),
                oracle::StrongLoss(s, y, MlpSim(f), 0.5), 1e-10);
  }
}

TEST(ContrastiveLoss, PermutationAndScaleInvariance) {
  TestRandom t(6);
  const LossBatch batch = Batch(t.Matrix(4, 5), t.Matrix(4, 5));
  Eigen::PermutationMatrix<Eigen::Dynamic> perm(4);
  perm.indices() << 2, 0, 3, 1;
  const LossBatch permuted = Batch(perm * batch.source, perm * batch.target);
  const LossBatch scaled = Batch(3.0 * batch.source, 3.0 * batch.target);
  for (LossKind kind : {LossKind::kL2, LossKind::kWeak, LossKind::kStrong}) {
    EXPECT_NEAR(Loss(kind, batch, nullptr), Loss(kind, permuted, nullptr),
                1e-12);
  }
  EXPECT_NEAR(WeakLoss(batch), WeakLoss(scaled), 1e-12);
  EXPECT_NEAR(StrongLoss(batch), StrongLoss(scaled), 1e-12);
}

TEST(ContrastiveLoss, Errors) {
  TestRandom t(7);
  const LossBatch batch = Batch(t.Matrix(2, 3), t.Matrix(2, 3));
  EXPECT_THROW(WeakLoss(batch, nullptr, 0.0), ValidationError);
  EXPECT_THROW(StrongLoss(batch, nullptr, -1.0), ValidationError);
  EXPECT_THROW(WeakLoss(Batch(t.Matrix(2, 3), t.Matrix(3, 3))),
               ValidationError);
  EXPECT_THROW(WeakLoss(Batch(Eigen::MatrixXd::Zero(2, 3), t.Matrix(2, 3))),
               NumericalError);
}

TEST(MlpCosine, Examples) {
  Rng rng(8);
  TestRandom t(8);
  const MlpExtractor f = MlpExtractor::Random(4, 4, 2, rng);
  const Eigen::VectorXd a = t.Matrix(4, 1);
  const Eigen::VectorXd b = t.Matrix(4, 1);
  EXPECT_NEAR(MlpCosine(f, a, a), 1.0, 1e-15);

  MlpExtractor identity{Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3),
                        Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Zero(3)};
  EXPECT_EQ(MlpCosine(identity, Eigen::Vector3d(2, 0, 0),
                      Eigen::Vector3d(0, 0, 5)),
            0.0);

  std::vector<double> av(a.data(), a.data() + 4), bv(b.data(), b.data() + 4);
  EXPECT_NEAR(MlpCosine(f, a, b), MlpSim(f)(av, bv), 1e-14);

  MlpExtractor dead = f;
  dead.w2.setZero();
  dead.b2.setZero();
  EXPECT_THROW(MlpCosine(dead, a, b), NumericalError);
}

TEST(MlpExtractor, ParamsRoundTripAndDefaults) {
  Rng rng(9);
  const MlpExtractor f = MlpExtractor::Random(12, 12, 2, rng);
  EXPECT_LE(f.w1.cwiseAbs().maxCoeff(), 0.1);
  const MlpExtractor g = MlpExtractor::FromParams(f.ToParams());
  EXPECT_EQ(g.w1, f.w1);
  EXPECT_EQ(g.b2, f.b2);
  EXPECT_EQ(MlpExtractor::DefaultProjection(768), 128);
  EXPECT_EQ(MlpExtractor::DefaultProjection(5), 1);
}

TEST(LossGradient, L2AtMinimumIsZero) {
  TestRandom t(10);
  const Eigen::MatrixXd s = t.Matrix(3, 4);
  const LossGradient g = LossGrad(LossKind::kL2, Batch(s, s), nullptr);
  EXPECT_EQ(g.source.norm(), 0.0);
  EXPECT_EQ(g.target.norm(), 0.0);
}

TEST(LossGradient, WeakSinglePairIsZero) {
  TestRandom t(11);
  const LossBatch batch = Batch(t.Matrix(1, 4), t.Matrix(1, 4));
  const LossGradient g = LossGrad(LossKind::kWeak, batch, nullptr);
  EXPECT_LT(g.source.norm(), 1e-15);
  EXPECT_LT(g.target.norm(), 1e-15);
  auto f = [&](const Eigen::MatrixXd &s) {
    return WeakLoss(Batch(s, batch.target));
  };
  EXPECT_LT(oracle::NumericGradient(f, batch.source, 1e-4).norm(), 1e-12);
}

// Finite differences over every block, computed here from loss values only.
double MaxFiniteDifferenceError(LossKind kind, const LossBatch &batch,
                                const MlpExtractor *mlp, double temp) {
  const double h = 1e-4;
  const LossGradient g = LossGrad(kind, batch, mlp, temp);
  double worst = oracle::RelativeError(
      g.source, oracle::NumericGradient(
                    [&](const Eigen::MatrixXd &s) {
                      return Loss(kind, Batch(s, batch.target), mlp, temp);
                    },
                    batch.source, h));
  worst = std::max(worst, oracle::RelativeError(
                              g.target, oracle::NumericGradient(
                                            [&](const Eigen::MatrixXd &y) {
                                              return Loss(kind,
                                                          Batch(batch.source, y),
                                                          mlp, temp);
                                            },
                                            batch.target, h)));
  if (mlp) {
    EXPECT_TRUE(g.mlp.has_value());
    auto block = [&](auto member, const Eigen::MatrixXd &analytic) {
      const Eigen::MatrixXd start = mlp->*member;
      return oracle::RelativeError(
          analytic, oracle::NumericGradient(
                        [&](const Eigen::MatrixXd &p) {
                          MlpExtractor f = *mlp;
                          f.*member = p;
                          return Loss(kind, batch, &f, temp);
                        },
                        start, h));
    };
    worst = std::max(worst, block(&MlpExtractor::w1, g.mlp->w1));
    worst = std::max(worst, block(&MlpExtractor::w2, g.mlp->w2));
    auto vblock = [&](auto member, const Eigen::VectorXd &analytic) {
      const Eigen::MatrixXd start = mlp->*member;
      return oracle::RelativeError(
          analytic, oracle::NumericGradient(
                        [&](const Eigen::MatrixXd &p) {
                          MlpExtractor f = *mlp;
                          f.*member = p.col(0);
                          return Loss(kind, batch, &f, temp);
                        },
                        start, h));
    };
    worst = std::max(worst, vblock(&MlpExtractor::b1, g.mlp->b1));
    worst = std::max(worst, vblock(&MlpExtractor::b2, g.mlp->b2));
  }
  return worst;
}

TEST(LossGradient, WeakMlpMatchesFiniteDifferences) {
  TestRandom t(12);
  Rng rng(12);
  LossBatch batch;
  MlpExtractor f;
  do {
    batch = Batch(t.Matrix(3, 5), t.Matrix(3, 5));
    f = MlpExtractor::Random(5, 5, 2, rng);
  } while (MinPreactivationMagnitude(f, batch) < 1e-6);
  EXPECT_LT(MaxFiniteDifferenceError(LossKind::kWeak, batch, &f, 0.1), 1e-4);
}

TEST(LossGradient, AllKindsMatchFiniteDifferences) {
  TestRandom t(13);
  Rng rng(13);
  for (LossKind kind : {LossKind::kL2, LossKind::kWeak, LossKind::kStrong}) {
    for (bool use_mlp : {false, true}) {
      LossBatch batch;
      MlpExtractor f;
      do {
        batch = Batch(t.Matrix(4, 6), t.Matrix(4, 6));
        f = MlpExtractor::Random(6, 6, 3, rng);
      } while (MinPreactivationMagnitude(f, batch) < 1e-6);
      const MlpExtractor *mlp = use_mlp ? &f : nullptr;
      EXPECT_LT(MaxFiniteDifferenceError(kind, batch, mlp, 0.1), 1e-4)
          << LossKindName(kind) << " mlp=" << use_mlp;
      EXPECT_LT(CheckGradient(kind, batch, mlp, 0.1).Max(), 1e-4);
    }
  }
}

TEST(LossGradient, L2ExtractorGradientIsZero) {
  TestRandom t(14);
  Rng rng(14);
  const MlpExtractor f = MlpExtractor::Random(3, 3, 1, rng);
  const LossGradient g =
      LossGrad(LossKind::kL2, Batch(t.Matrix(2, 3), t.Matrix(2, 3)), &f);
  ASSERT_TRUE(g.mlp.has_value());
  EXPECT_EQ(g.mlp->w1.norm() + g.mlp->b1.norm() + g.mlp->w2.norm() +
                g.mlp->b2.norm(),
            0.0);
}

TEST(LossKind, Parse) {
  EXPECT_EQ(ParseLossKind("strong"), LossKind::kStrong);
  EXPECT_STREQ(LossKindName(LossKind::kWeak), "weak");
  EXPECT_THROW(ParseLossKind("l1"), ValidationError);
}

TEST(LossBatch, FromParams) {
  ParamVector p;
  p.Add("S", {1, 2}, {1, 2});
  p.Add("T", {1, 2}, {3, 4});
  const LossBatch b = LossBatch::FromParams(p);
  EXPECT_EQ(b.target(0, 1), 4.0);
  EXPECT_FALSE(b.source_full.has_value());
  ParamVector missing;
  missing.Add("S", {1, 2}, {1, 2});
  EXPECT_THROW(LossBatch::FromParams(missing), ValidationError);
}

}  // namespace
}  // namespace xlrep::losses
