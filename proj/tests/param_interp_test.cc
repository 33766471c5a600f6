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
#include <cstring>
#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "xlrep/errors.h"
#include "xlrep/io.h"
#include "xlrep/param_interp.h"

namespace xlrep::interp {
namespace {

using xlrep::testing::ScratchDir;
using xlrep::testing::Slurp;
using xlrep::testing::TestRandom;

ParamVector Vec(std::vector<double> values, std::string name = "w") {
  ParamVector p;
  const auto n = static_cast<std::int64_t>(values.size());
  p.Add(std::move(name), {n}, std::move(values));
  return p;
}

ParamVector Random(TestRandom &r) {
  ParamVector p;
  std::vector<double> w(6), b(3);
  for (double &v : w) v = r.Uniform(-2, 2);
  for (double &v : b) v = r.Uniform(-2, 2);
  p.Add("encoder.w", {2, 3}, w);
  p.Add("head.b", {3}, b);
  return p;
}

bool BitEqual(const ParamVector &a, const ParamVector &b) {
  if (a.size() != b.size()) return false;
  for (std::size_t e = 0; e < a.size(); ++e) {
    const auto &x = a.entries()[e].data;
    const auto &y = b.entries()[e].data;
    if (x.size() != y.size() ||
        std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) != 0) {
      return false;
    }
  }
  return true;
}

TEST(Interp1d, Examples) {
  TestRandom r(1);
  const ParamVector a = Random(r);
  const ParamVector b = Random(r);
  EXPECT_TRUE(BitEqual(Interp1d(a, b, 0.0), a));
  EXPECT_TRUE(BitEqual(Interp1d(a, b, 1.0), b));
  EXPECT_EQ(Interp1d(Vec({1, 1}), Vec({3, 3}), 0.5).entries()[0].data,
            (std::vector<double>{2, 2}));
  EXPECT_EQ(Interp1d(Vec({0}), Vec({2}), 1.5).entries()[0].data,
            (std::vector<double>{3}));
}

TEST(Interp1d, NegativeZeroEndpointIsBitExact) {
  EXPECT_TRUE(BitEqual(Interp1d(Vec({-0.0}), Vec({1.0}), 0.0), Vec({-0.0})));
}

TEST(Interp1d, AffineSymmetry) {
  TestRandom r(2);
  const ParamVector a = Random(r);
  const ParamVector b = Random(r);
  for (double alpha : {-0.5, -0.1, 0.3, 0.5, 0.75, 1.2, 1.5}) {
    const auto p = Interp1d(a, b, alpha);
    const auto q = Interp1d(a, b, 1.0 - alpha);
    const auto swapped = Interp1d(b, a, 1.0 - alpha);
    for (std::size_t e = 0; e < a.size(); ++e) {
      for (std::size_t i = 0; i < a.entries()[e].data.size(); ++i) {
        const double ai = a.entries()[e].data[i];
        const double bi = b.entries()[e].data[i];
        EXPECT_NEAR(p.entries()[e].data[i] + q.entries()[e].data[i], ai + bi,
                    1e-12);
        EXPECT_NEAR(p.entries()[e].data[i], swapped.entries()[e].data[i],
                    1e-12);
      }
    }
  }
}

TEST(Interp1d, IncludeListCopiesExcludedFromA) {
  TestRandom r(3);
  const ParamVector a = Random(r);
  const ParamVector b = Random(r);
  const auto out = Interp1d(a, b, 1.0, {"encoder."});
  EXPECT_EQ(out.entries()[0].data, b.entries()[0].data);
  EXPECT_EQ(out.entries()[1].data, a.entries()[1].data);
}

TEST(Interp1d, Mismatch) {
  EXPECT_THROW(Interp1d(Vec({1, 2}), Vec({1}), 0.5), ValidationError);
  EXPECT_THROW(Interp1d(Vec({1}, "a"), Vec({1}, "b"), 0.5), ValidationError);
}

TEST(Interp2d, CornersAndArithmetic) {
  TestRandom r(4);
  const ParamVector bi = Random(r);
  const ParamVector src = Random(r);
  const ParamVector tgt = Random(r);
  EXPECT_TRUE(BitEqual(Interp2d(bi, src, tgt, 0, 0), bi));
  EXPECT_TRUE(BitEqual(Interp2d(bi, src, tgt, 1, 0), src));
  EXPECT_TRUE(BitEqual(Interp2d(bi, src, tgt, 0, 1), tgt));
  EXPECT_EQ(Interp2d(Vec({0}), Vec({2}), Vec({4}), 0.5, 0.5).entries()[0].data,
            (std::vector<double>{3}));
  EXPECT_THROW(Interp2d(Vec({0}), Vec({2}), Vec({4, 1}), 0.5, 0.5),
               ValidationError);
}

TEST(DeltaStats, TrivialGeometries) {
  const ParamVector bi = Vec({1, 1});
  const auto same = ComputeDeltaStats(bi, Vec({2, 3}), Vec({2, 3}));
  EXPECT_NEAR(same.norm_ratio, 1.0, 1e-15);
  EXPECT_NEAR(same.angle_degrees, 0.0, 1e-9);
  const auto orthogonal = ComputeDeltaStats(bi, Vec({2, 1}), Vec({1, 2}));
  EXPECT_NEAR(orthogonal.norm_ratio, 1.0, 1e-15);
  EXPECT_NEAR(orthogonal.angle_degrees, 90.0, 1e-9);
  const auto opposite = ComputeDeltaStats(bi, Vec({3, 4}), Vec({-1, -2}));
  EXPECT_NEAR(opposite.angle_degrees, 180.0, 1e-9);
  EXPECT_THROW(ComputeDeltaStats(bi, bi, Vec({2, 3})), ValidationError);
}

TEST(DeltaStats, RangeOnRandomInputs) {
  TestRandom r(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = ComputeDeltaStats(Random(r), Random(r), Random(r));
    EXPECT_GE(s.angle_degrees, 0.0);
    EXPECT_LE(s.angle_degrees, 180.0);
    EXPECT_GT(s.norm_ratio, 0.0);
    EXPECT_NEAR(s.norm_ratio, s.norm_src / s.norm_tgt, 1e-15);
  }
}

TEST(InterpGrid, Defaults) {
  const auto grid = InterpGrid::Default();
  ASSERT_EQ(grid.size(), 21u);
  EXPECT_EQ(FormatAlpha(grid.alphas().front()), "-0.500");
  EXPECT_EQ(FormatAlpha(grid.alphas()[5]), "0.000");
  EXPECT_EQ(FormatAlpha(grid.alphas().back()), "1.500");
  EXPECT_EQ(InterpGrid::Default(true).size(), 33u);
  EXPECT_THROW(InterpGrid({0.1, 0.1}), ValidationError);
  EXPECT_THROW(InterpGrid({}), ValidationError);
  EXPECT_EQ(FormatAlpha(-0.0001), "0.000");
}

TEST(Sweep, OneDimensionalFiles) {
  const auto dir = ScratchDir("sweep1d");
  TestRandom r(6);
  ParamVector a, b;
  {
    // Round through float32 so files compare exactly with the inputs.
    std::stringstream sa, sb;
    io::WritePvec(sa, Random(r));
    io::WritePvec(sb, Random(r));
    a = io::ReadPvec(sa);
    b = io::ReadPvec(sb);
  }
  const auto rows = Sweep1d(a, b, InterpGrid({0, 1}), dir);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].file, "interp_a0.000.pvec");
  std::ostringstream wa, wb;
  io::WritePvec(wa, a);
  io::WritePvec(wb, b);
  EXPECT_EQ(Slurp(dir / "interp_a0.000.pvec"), wa.str());
  EXPECT_EQ(Slurp(dir / "interp_a1.000.pvec"), wb.str());
  EXPECT_EQ(Slurp(dir / "manifest.tsv"),
            "file\talpha\ninterp_a0.000.pvec\t0.000\ninterp_a1.000.pvec\t1.000\n");

  const auto full = Sweep1d(a, b, InterpGrid::Default(), dir);
  EXPECT_EQ(full.size(), 21u);
  const std::string first = Slurp(dir / "interp_a0.300.pvec");
  Sweep1d(a, b, InterpGrid::Default(), dir);
  EXPECT_EQ(Slurp(dir / "interp_a0.300.pvec"), first);
}

TEST(Sweep, TwoDimensionalGrid) {
  const auto dir = ScratchDir("sweep2d");
  TestRandom r(7);
  const InterpGrid grid({0, 0.5, 1});
  const auto rows = Sweep2d(Random(r), Random(r), Random(r), grid, grid, dir);
  EXPECT_EQ(rows.size(), 9u);
  EXPECT_EQ(rows[1].file, "interp_a10.000_a20.500.pvec");
  std::istringstream manifest(Slurp(dir / "manifest.tsv"));
  const auto parsed = ReadManifest(manifest);
  ASSERT_EQ(parsed.size(), 9u);
  EXPECT_EQ(parsed[5].coordinates, (std::vector<double>{0.5, 1.0}));
}

TEST(Sweep, UnwritableDirectory) {
  EXPECT_THROW(Sweep1d(Vec({0}), Vec({1}), InterpGrid({0}),
                       "/nonexistent/xlrep/dir"),
               IoError);
}

TEST(MergeResults, OrdersByManifestThenSeed) {
  const std::vector<ManifestRow> manifest{{"interp_a0.000.pvec", {0.0}},
                                          {"interp_a0.500.pvec", {0.5}}};
  std::istringstream in(
      "# file\tscore\tseed\n"
      "interp_a0.500.pvec\t0.75\t2\n"
      "interp_a0.000.pvec\t0.5\t1\n"
      "interp_a0.500.pvec\t0.25\t1\n");
  std::ostringstream out;
  MergeResults(out, manifest, ReadResults(in));
  EXPECT_EQ(out.str(),
            "alpha,score,seed\n0.000,0.5,1\n0.500,0.25,1\n0.500,0.75,2\n");
  std::istringstream unknown("other.pvec\t1\n");
  std::ostringstream sink;
  EXPECT_THROW(MergeResults(sink, manifest, ReadResults(unknown)),
               ValidationError);
  std::istringstream bad("x\tnot-a-number\n");
  EXPECT_THROW(ReadResults(bad), ParseError);
}

}  // namespace
}  // namespace xlrep::interp
