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

#ifndef XLREP_PARAM_INTERP_H_
#define XLREP_PARAM_INTERP_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "xlrep/types.h"

// Linear interpolation between checkpoints and the geometry of the
// interpolation directions.
namespace xlrep::interp {

// Restricts interpolation to parameters whose name starts with one of the
// prefixes. Empty means every parameter. Excluded parameters keep the value
// of the base checkpoint (a for 1-D, theta_bi for 2-D).
using IncludeList = std::vector<std::string>;

// alpha * b + (1 - alpha) * a. alpha = 0 and alpha = 1 return a and b
// exactly; alpha outside [0, 1] extrapolates.
ParamVector Interp1d(const ParamVector &a, const ParamVector &b, double alpha,
                     const IncludeList &include = {});

// theta_bi + alpha1 (theta_src - theta_bi) + alpha2 (theta_tgt - theta_bi).
// The corners (0,0), (1,0), (0,1) reproduce theta_bi, theta_src, theta_tgt.
ParamVector Interp2d(const ParamVector &bi, const ParamVector &src,
                     const ParamVector &tgt, double alpha1, double alpha2,
                     const IncludeList &include = {});

struct DeltaStats {
  double norm_src = 0;   // ||theta_src - theta_bi||
  double norm_tgt = 0;   // ||theta_tgt - theta_bi||
  double norm_ratio = 0;  // norm_src / norm_tgt
  double angle_degrees = 0;
};

// Norms and angle of the two interpolation directions over all concatenated
// parameters. Throws ValidationError if either direction is zero.
DeltaStats ComputeDeltaStats(const ParamVector &bi, const ParamVector &src,
                             const ParamVector &tgt,
                             const IncludeList &include = {});

// Sorted, strictly increasing interpolation axis.
class InterpGrid {
 public:
  // Throws ValidationError if empty or if two values format to the same
  // 3-decimal name.
  explicit InterpGrid(std::vector<double> alphas);

  // -0.5, -0.4, ..., 1.5, optionally with the extra points near the
  // endpoints (0.025, ..., 0.975).
  static InterpGrid Default(bool extras = false);

  const std::vector<double> &alphas() const { return alphas_; }
  std::size_t size() const { return alphas_.size(); }

 private:
  std::vector<double> alphas_;
};

// alpha formatted with 3 decimals ("-0.500", "0.025").
std::string FormatAlpha(double alpha);

struct ManifestRow {
  std::string file;
  std::vector<double> coordinates;  // alpha, or (alpha1, alpha2)
};

// Writes interp_a{alpha}.pvec for each grid point plus manifest.tsv
// ("file\talpha"). Returns the manifest rows in write order.
std::vector<ManifestRow> Sweep1d(const ParamVector &a, const ParamVector &b,
                                 const InterpGrid &grid,
                                 const std::filesystem::path &dir,
                                 const IncludeList &include = {});

// Writes interp_a1{alpha1}_a2{alpha2}.pvec for the Cartesian grid, row-major
// in alpha1, plus manifest.tsv ("file\talpha1\talpha2").
std::vector<ManifestRow> Sweep2d(const ParamVector &bi, const ParamVector &src,
                                 const ParamVector &tgt, const InterpGrid &grid1,
                                 const InterpGrid &grid2,
                                 const std::filesystem::path &dir,
                                 const IncludeList &include = {});

void WriteManifest(std::ostream &out, const std::vector<ManifestRow> &rows);
std::vector<ManifestRow> ReadManifest(std::istream &in);

// One score reported by an external evaluator for a checkpoint file.
struct EvalResult {
  std::string file;
  double score = 0;
  long seed = 0;
};

// Evaluator output: TSV "file\tscore\tseed" (the seed column is optional,
// default 0). Lines starting with '#' are ignored.
std::vector<EvalResult> ReadResults(std::istream &in);

// CSV "alpha,score,seed" (or "alpha1,alpha2,score,seed") with one line per
// result, ordered by manifest position then seed. Throws ValidationError for
// a result whose file is not in the manifest.
void MergeResults(std::ostream &out, const std::vector<ManifestRow> &manifest,
                  const std::vector<EvalResult> &results);

}  // namespace xlrep::interp

#endif  // XLREP_PARAM_INTERP_H_
