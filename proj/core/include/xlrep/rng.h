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

#ifndef XLREP_RNG_H_
#define XLREP_RNG_H_

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace xlrep {

// Deterministic random stream. The same seed yields the same sequence on
// every platform: only the mt19937_64 engine is used, and the conversions
// to doubles and bounded integers are done here rather than through the
// implementation-defined standard distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n); n must be positive.
  std::uint64_t UniformInt(std::uint64_t n);

  // Standard normal via Box-Muller.
  double Normal();

  // Independent child stream; advances this stream by one draw.
  Rng Split();

  std::uint64_t seed() const { return seed_; }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

// Matrix with i.i.d. standard normal entries.
Eigen::MatrixXd RandomNormalMatrix(Eigen::Index rows, Eigen::Index cols,
                                   Rng &rng);

// Haar-random orthogonal matrix (QR of a Gaussian matrix with the signs of
// R's diagonal folded into Q).
Eigen::MatrixXd RandomOrthogonalMatrix(Eigen::Index d, Rng &rng);

}  // namespace xlrep

#endif  // XLREP_RNG_H_
