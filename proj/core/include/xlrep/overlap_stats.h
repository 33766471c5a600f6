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

#ifndef XLREP_OVERLAP_STATS_H_
#define XLREP_OVERLAP_STATS_H_

#include <string>
#include <unordered_set>
#include <vector>

// Subword overlap between training and test corpora, and correlation tests.
namespace xlrep::stats {

struct OverlapReport {
  double p_type = 0;    // 100 |V_obs| / |V_test|
  double p_token = 0;   // 100 sum_{w in V_obs} c_w / sum_{w in V_test} c_w
  long observed_types = 0;  // |V_obs| = |V_train n V_test|
  long test_types = 0;      // |V_test|
  long observed_tokens = 0;
  long test_tokens = 0;
};

// Throws ValidationError for an empty test corpus.
OverlapReport Overlap(const std::unordered_set<std::string> &train_vocab,
                      const std::vector<std::string> &test_tokens);

struct PearsonResult {
  double r = 0;
  double p_value = 1;  // Two-sided, Student t with n - 2 degrees of freedom.
};

// Sample Pearson correlation. Needs n >= 3 and non-constant inputs.
PearsonResult Pearson(const std::vector<double> &xs,
                      const std::vector<double> &ys);

// Regularized incomplete beta function I_x(a, b).
double RegularizedIncompleteBeta(double a, double b, double x);

// P(|T| >= |t|) for Student's t with `dof` degrees of freedom.
double StudentTTwoSided(double t, double dof);

}  // namespace xlrep::stats

#endif  // XLREP_OVERLAP_STATS_H_
