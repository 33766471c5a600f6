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

#include "xlrep/overlap_stats.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "xlrep/errors.h"

namespace xlrep::stats {
namespace {

// Continued fraction for I_x(a, b) by the modified Lentz method.
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEpsilon = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEpsilon) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace

OverlapReport Overlap(const std::unordered_set<std::string> &train_vocab,
                      const std::vector<std::string> &test_tokens) {
  if (test_tokens.empty()) throw ValidationError("empty test corpus");
  std::unordered_map<std::string, long> counts;
  for (const std::string &w : test_tokens) ++counts[w];
  OverlapReport report;
  report.test_types = static_cast<long>(counts.size());
  report.test_tokens = static_cast<long>(test_tokens.size());
  for (const auto &[w, c] : counts) {
    if (train_vocab.count(w)) {
      ++report.observed_types;
      report.observed_tokens += c;
    }
  }
  report.p_type = 100.0 * static_cast<double>(report.observed_types) /
                  static_cast<double>(report.test_types);
  report.p_token = 100.0 * static_cast<double>(report.observed_tokens) /
                   static_cast<double>(report.test_tokens);
  return report;
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0 && b > 0)) throw ValidationError("beta parameters must be > 0");
  if (!(x >= 0 && x <= 1)) throw ValidationError("x must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) -
                                std::lgamma(b) + a * std::log(x) +
                                b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTTwoSided(double t, double dof) {
  if (!(dof > 0)) throw ValidationError("degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  return RegularizedIncompleteBeta(0.5 * dof, 0.5, dof / (dof + t * t));
}

PearsonResult Pearson(const std::vector<double> &xs,
                      const std::vector<double> &ys) {
  if (xs.size() != ys.size()) {
    throw ValidationError("Pearson inputs differ in length");
  }
  const std::size_t n = xs.size();
  if (n < 3) throw ValidationError("Pearson needs at least 3 points");
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0;
  double sxx = 0;
  double syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ValidationError("Pearson undefined for a constant sequence");
  }
  PearsonResult result;
  result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(n - 2);
  const double one_minus = 1.0 - result.r * result.r;
  if (one_minus <= 0.0) {
    result.p_value = 0.0;
  } else {
    const double t = result.r * std::sqrt(dof / one_minus);
    result.p_value = StudentTTwoSided(t, dof);
  }
  return result;
}

}  // namespace xlrep::stats
