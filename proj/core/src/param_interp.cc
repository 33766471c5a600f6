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

#include "xlrep/param_interp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

#include "xlrep/errors.h"
#include "xlrep/io.h"

namespace xlrep::interp {
namespace {

bool Included(const std::string &name, const IncludeList &include) {
  if (include.empty()) return true;
  return std::any_of(include.begin(), include.end(),
                     [&](const std::string &prefix) {
                       return name.compare(0, prefix.size(), prefix) == 0;
                     });
}

// Applies `combine(index, values...)` entry by entry, copying excluded
// entries from the first checkpoint.
template <typename Fn>
ParamVector CombineEntries(const std::vector<const ParamVector *> &inputs,
                    const IncludeList &include, Fn combine) {
  for (std::size_t k = 1; k < inputs.size(); ++k) {
    inputs[0]->CheckCompatible(*inputs[k]);
  }
  ParamVector out;
  const auto &base = inputs[0]->entries();
  for (std::size_t e = 0; e < base.size(); ++e) {
    std::vector<double> data = base[e].data;
    if (Included(base[e].name, include)) {
      std::vector<const std::vector<double> *> sources;
      for (const ParamVector *p : inputs) sources.push_back(&p->entries()[e].data);
      for (std::size_t i = 0; i < data.size(); ++i) {
        data[i] = combine(sources, i);
      }
    }
    out.Add(base[e].name, base[e].shape, std::move(data));
  }
  return out;
}

std::string TrimCr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> parts;
  std::stringstream ss(line);
  std::string part;
  while (std::getline(ss, part, '\t')) parts.push_back(part);
  if (!line.empty() && line.back() == '\t') parts.emplace_back();
  return parts;
}

double ParseNumber(const std::string &s, std::size_t line) {
  std::istringstream in(s);
  auto values = io::ReadNumbers(in);
  if (values.size() != 1) {
    throw ParseError(line, "expected a number, got '" + s + "'");
  }
  return values[0];
}

}  // namespace

ParamVector Interp1d(const ParamVector &a, const ParamVector &b, double alpha,
                     const IncludeList &include) {
  if (!std::isfinite(alpha)) throw ValidationError("alpha must be finite");
  return CombineEntries({&a, &b}, include, [alpha](const auto &v, std::size_t i) {
    const double x = (*v[0])[i];
    const double y = (*v[1])[i];
    if (alpha == 0.0) return x;
    if (alpha == 1.0) return y;
    return alpha * y + (1.0 - alpha) * x;
  });
}

ParamVector Interp2d(const ParamVector &bi, const ParamVector &src,
                     const ParamVector &tgt, double alpha1, double alpha2,
                     const IncludeList &include) {
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2)) {
    throw ValidationError("alphas must be finite");
  }
  return CombineEntries({&bi, &src, &tgt}, include,
                 [alpha1, alpha2](const auto &v, std::size_t i) {
                   const double base = (*v[0])[i];
                   if (alpha2 == 0.0) {
                     if (alpha1 == 0.0) return base;
                     if (alpha1 == 1.0) return (*v[1])[i];
                   }
                   if (alpha1 == 0.0 && alpha2 == 1.0) return (*v[2])[i];
                   return base + alpha1 * ((*v[1])[i] - base) +
                          alpha2 * ((*v[2])[i] - base);
                 });
}

DeltaStats ComputeDeltaStats(const ParamVector &bi, const ParamVector &src,
                             const ParamVector &tgt,
                             const IncludeList &include) {
  bi.CheckCompatible(src);
  bi.CheckCompatible(tgt);
  std::vector<double> ds;
  std::vector<double> dt;
  for (std::size_t e = 0; e < bi.size(); ++e) {
    const ParamEntry &base = bi.entries()[e];
    if (!Included(base.name, include)) continue;
    for (std::size_t i = 0; i < base.data.size(); ++i) {
      ds.push_back(src.entries()[e].data[i] - base.data[i]);
      dt.push_back(tgt.entries()[e].data[i] - base.data[i]);
    }
  }
  const Eigen::Map<const Eigen::VectorXd> u(ds.data(), ds.size());
  const Eigen::Map<const Eigen::VectorXd> v(dt.data(), dt.size());
  DeltaStats stats;
  stats.norm_src = u.norm();
  stats.norm_tgt = v.norm();
  if (stats.norm_src == 0.0 || stats.norm_tgt == 0.0) {
    throw ValidationError("interpolation direction is zero");
  }
  stats.norm_ratio = stats.norm_src / stats.norm_tgt;
  // 2 atan2(|u' - v'|, |u' + v'|) stays accurate near 0 and 180 degrees,
  // where acos of the cosine loses half the digits.
  const Eigen::VectorXd un = u / stats.norm_src;
  const Eigen::VectorXd vn = v / stats.norm_tgt;
  stats.angle_degrees =
      2.0 * std::atan2((un - vn).norm(), (un + vn).norm()) * 180.0 /
      std::numbers::pi;
  return stats;
}

InterpGrid::InterpGrid(std::vector<double> alphas) : alphas_(std::move(alphas)) {
  if (alphas_.empty()) throw ValidationError("empty interpolation grid");
  for (double a : alphas_) {
    if (!std::isfinite(a)) throw ValidationError("non-finite grid value");
  }
  std::sort(alphas_.begin(), alphas_.end());
  std::set<std::string> names;
  for (double a : alphas_) {
    if (!names.insert(FormatAlpha(a)).second) {
      throw ValidationError("duplicate grid point " + FormatAlpha(a));
    }
  }
}

InterpGrid InterpGrid::Default(bool extras) {
  std::vector<double> alphas;
  for (int i = -5; i <= 15; ++i) alphas.push_back(i / 10.0);
  if (extras) {
    for (double a : {0.025, 0.05, 0.075, 0.125, 0.15, 0.175, 0.825, 0.85,
                     0.875, 0.925, 0.95, 0.975}) {
      alphas.push_back(a);
    }
  }
  return InterpGrid(std::move(alphas));
}

std::string FormatAlpha(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", alpha);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::vector<ManifestRow> Sweep1d(const ParamVector &a, const ParamVector &b,
                                 const InterpGrid &grid,
                                 const std::filesystem::path &dir,
                                 const IncludeList &include) {
  a.CheckCompatible(b);
  std::vector<ManifestRow> rows;
  for (double alpha : grid.alphas()) {
    ManifestRow row{"interp_a" + FormatAlpha(alpha) + ".pvec", {alpha}};
    std::ostringstream buf;
    io::WritePvec(buf, Interp1d(a, b, alpha, include));
    io::WriteFile(dir / row.file, buf.str());
    rows.push_back(std::move(row));
  }
  std::ostringstream manifest;
  WriteManifest(manifest, rows);
  io::WriteFile(dir / "manifest.tsv", manifest.str());
  return rows;
}

std::vector<ManifestRow> Sweep2d(const ParamVector &bi, const ParamVector &src,
                                 const ParamVector &tgt, const InterpGrid &grid1,
                                 const InterpGrid &grid2,
                                 const std::filesystem::path &dir,
                                 const IncludeList &include) {
  bi.CheckCompatible(src);
  bi.CheckCompatible(tgt);
  std::vector<ManifestRow> rows;
  for (double a1 : grid1.alphas()) {
    for (double a2 : grid2.alphas()) {
      ManifestRow row{
          "interp_a1" + FormatAlpha(a1) + "_a2" + FormatAlpha(a2) + ".pvec",
          {a1, a2}};
      std::ostringstream buf;
      io::WritePvec(buf, Interp2d(bi, src, tgt, a1, a2, include));
      io::WriteFile(dir / row.file, buf.str());
      rows.push_back(std::move(row));
    }
  }
  std::ostringstream manifest;
  WriteManifest(manifest, rows);
  io::WriteFile(dir / "manifest.tsv", manifest.str());
  return rows;
}

void WriteManifest(std::ostream &out, const std::vector<ManifestRow> &rows) {
  const bool two_d = !rows.empty() && rows.front().coordinates.size() == 2;
  out << (two_d ? "file\talpha1\talpha2\n" : "file\talpha\n");
  for (const ManifestRow &row : rows) {
    out << row.file;
    for (double c : row.coordinates) out << '\t' << FormatAlpha(c);
    out << '\n';
  }
}

std::vector<ManifestRow> ReadManifest(std::istream &in) {
  std::vector<ManifestRow> rows;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = TrimCr(std::move(line));
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (line_no == 1 && fields[0] == "file") {
      width = fields.size() - 1;
      continue;
    }
    if (fields.size() < 2 || fields.size() > 3 ||
        (width && fields.size() - 1 != width)) {
      throw ParseError(line_no, "expected 'file\\talpha[\\talpha2]'");
    }
    ManifestRow row{fields[0], {}};
    for (std::size_t k = 1; k < fields.size(); ++k) {
      row.coordinates.push_back(ParseNumber(fields[k], line_no));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EvalResult> ReadResults(std::istream &in) {
  std::vector<EvalResult> results;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = TrimCr(std::move(line));
    if (line.empty() || line.front() == '#') continue;
    auto fields = SplitTabs(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError(line_no, "expected 'file\\tscore[\\tseed]'");
    }
    EvalResult r{fields[0], ParseNumber(fields[1], line_no), 0};
    if (fields.size() == 3) {
      const double seed = ParseNumber(fields[2], line_no);
      if (seed != std::floor(seed)) {
        throw ParseError(line_no, "seed must be an integer");
      }
      r.seed = static_cast<long>(seed);
    }
    results.push_back(std::move(r));
  }
  return results;
}

void MergeResults(std::ostream &out, const std::vector<ManifestRow> &manifest,
                  const std::vector<EvalResult> &results) {
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < manifest.size(); ++i) {
    position.emplace(manifest[i].file, i);
  }
  std::vector<std::pair<std::size_t, const EvalResult *>> merged;
  for (const EvalResult &r : results) {
    auto it = position.find(r.file);
    if (it == position.end()) {
      throw ValidationError("result for unknown checkpoint '" + r.file + "'");
    }
    merged.emplace_back(it->second, &r);
  }
  std::stable_sort(merged.begin(), merged.end(),
                   [](const auto &a, const auto &b) {
                     if (a.first != b.first) return a.first < b.first;
                     return a.second->seed < b.second->seed;
                   });
  const bool two_d = !manifest.empty() && manifest[0].coordinates.size() == 2;
  out << (two_d ? "alpha1,alpha2,score,seed\n" : "alpha,score,seed\n");
  for (const auto &[pos, r] : merged) {
    for (double c : manifest[pos].coordinates) out << FormatAlpha(c) << ',';
    out << io::FormatDouble(r->score) << ',' << r->seed << '\n';
  }
}

}  // namespace xlrep::interp
