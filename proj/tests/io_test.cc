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

#include <sstream>

#include <gtest/gtest.h>

#include "test_util.h"
#include "xlrep/errors.h"
#include "xlrep/io.h"

namespace xlrep::io {
namespace {

using xlrep::testing::Slurp;
using xlrep::testing::TestData;

template <typename Read, typename Write>
void ExpectByteRoundTrip(const std::string &name, Read read, Write write) {
  const std::string original = Slurp(TestData(name));
  ASSERT_FALSE(original.empty()) << name;
  std::istringstream in(original);
  auto first = read(in);
  std::ostringstream out;
  write(out, first);
  EXPECT_EQ(out.str(), original) << name;
  std::istringstream again(out.str());
  std::ostringstream twice;
  write(twice, read(again));
  EXPECT_EQ(twice.str(), original) << name;
}

TEST(ReadVec, ParsesItemsAsColumns) {
  std::istringstream in("2 2\na 1 0\nb 0 1\n");
  EmbeddingSpace space = ReadVec(in);
  ASSERT_EQ(space.items(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(space.vectors(), Eigen::Matrix2d::Identity());
}

TEST(ReadVec, SingleItem) {
  std::istringstream in("1 3\nx 0.5 -0.5 2.0");
  EmbeddingSpace space = ReadVec(in);
  EXPECT_EQ(space.size(), 1);
  EXPECT_EQ(space.dimension(), 3);
  EXPECT_DOUBLE_EQ(space.vectors()(1, 0), -0.5);
}

TEST(ReadVec, DuplicateTokenReportsLine) {
  std::istringstream in("2 2\na 1 0\na 0 1\n");
  try {
    ReadVec(in);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ReadVec, RejectsBadRows) {
  std::istringstream short_row("1 3\nx 1 2\n");
  EXPECT_THROW(ReadVec(short_row), ParseError);
  std::istringstream text("1 2\nx 1 y\n");
  EXPECT_THROW(ReadVec(text), ParseError);
  std::istringstream count("3 1\nx 1\n");
  EXPECT_THROW(ReadVec(count), ParseError);
  std::istringstream nan("1 1\nx nan\n");
  EXPECT_THROW(ReadVec(nan), ValidationError);
}

TEST(ReadPharaoh, Pairs) {
  std::istringstream in("0-0 1-2\n");
  auto sets = ReadPharaoh(in);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0].links(), (std::set<Link>{{0, 0}, {1, 2}}));
  EXPECT_EQ(sets[0].source_length(), 2);
  EXPECT_EQ(sets[0].target_length(), 3);
}

TEST(ReadPharaoh, EmptyLineIsEmptySet) {
  std::istringstream in("\n");
  auto sets = ReadPharaoh(in);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_TRUE(sets[0].empty());
}

TEST(ReadPharaoh, Deduplicates) {
  std::istringstream in("0-0 0-0\n");
  EXPECT_EQ(ReadPharaoh(in)[0].size(), 1u);
}

TEST(ReadPharaoh, ExplicitLengths) {
  std::istringstream in("0-0\n");
  std::vector<std::pair<int, int>> lengths{{4, 5}};
  auto sets = ReadPharaoh(in, &lengths);
  EXPECT_EQ(sets[0].source_length(), 4);
  EXPECT_EQ(sets[0].target_length(), 5);
  std::istringstream too_long("0-7\n");
  EXPECT_THROW(ReadPharaoh(too_long, &lengths), ValidationError);
}

TEST(ReadPharaoh, Malformed) {
  for (const char *text : {"0-\n", "a-1\n", "0-0 -1-2\n", "1:2\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ReadPharaoh(in), ParseError) << text;
  }
}

TEST(ReadConllu, Basic) {
  std::istringstream in(
      "1\tHe\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tate\t_\tVERB\t_\t_\t0\troot\t_\t_\n\n");
  auto sentences = ReadConllu(in);
  ASSERT_EQ(sentences.size(), 1u);
  EXPECT_EQ(sentences[0].tokens, (std::vector<std::string>{"He", "ate"}));
  EXPECT_EQ(*sentences[0].heads, (std::vector<int>{2, 0}));
  EXPECT_EQ(*sentences[0].pos, (std::vector<std::string>{"PRON", "VERB"}));
  EXPECT_EQ(*sentences[0].deprels,
            (std::vector<std::string>{"nsubj", "root"}));
}

TEST(ReadConllu, NonIntegerHeadReportsLine) {
  std::istringstream in(
      "# c\n1\tHe\t_\tPRON\t_\t_\tx\tnsubj\t_\t_\n\n");
  try {
    ReadConllu(in);
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ReadConllu, ColumnCount) {
  std::istringstream in("1\tHe\t_\tPRON\t_\t_\t0\n\n");
  EXPECT_THROW(ReadConllu(in), ParseError);
}

TEST(ReadConllu, RejectsCyclicHeads) {
  std::istringstream in(
      "1\ta\t_\t_\t_\t_\t2\tx\t_\t_\n"
      "2\tb\t_\t_\t_\t_\t1\tx\t_\t_\n\n");
  EXPECT_THROW(ReadConllu(in), ValidationError);
}

TEST(ReadConllu, SkipsMultiwordAndEmptyNodes) {
  std::istringstream in(Slurp(TestData("golden.conllu")));
  auto sentences = ReadConllu(in);
  ASSERT_EQ(sentences.size(), 3u);
  EXPECT_EQ(sentences[1].tokens, (std::vector<std::string>{"vamos", "nos"}));
  EXPECT_FALSE(sentences[2].heads.has_value());
  EXPECT_FALSE(sentences[2].pos.has_value());
}

TEST(Pvec, RoundTripOfValues) {
  ParamVector p;
  p.Add("w", {2}, {1.0, 2.0});
  std::stringstream buf;
  WritePvec(buf, p);
  EXPECT_TRUE(ReadPvec(buf) == p);
}

TEST(Pvec, EmptyIsHeaderOnly) {
  std::stringstream buf;
  WritePvec(buf, ParamVector());
  EXPECT_EQ(buf.str(), "PVEC 1\n\n");
  EXPECT_TRUE(ReadPvec(buf).empty());
}

TEST(Pvec, TruncatedPayload) {
  ParamVector p;
  p.Add("w", {2}, {1.0, 2.0});
  std::ostringstream out;
  WritePvec(out, p);
  std::string bytes = out.str();
  bytes.pop_back();
  std::istringstream in(bytes);
  EXPECT_THROW(ReadPvec(in), ParseError);
}

TEST(Pvec, BadMagic) {
  std::istringstream in("PVEC 2\n\n");
  EXPECT_THROW(ReadPvec(in), ParseError);
}

TEST(Pvec, LittleEndianFloat32Layout) {
  ParamVector p;
  p.Add("x", {1}, {1.0});
  std::ostringstream out;
  WritePvec(out, p);
  EXPECT_EQ(out.str(), std::string("PVEC 1\nx\t1\n\n\x00\x00\x80\x3f", 16));
}

TEST(Dictionary, GroupsBySource) {
  std::istringstream in("dog\tchien\t0.9\ndog\tchienne\t0.1\n");
  auto dict = ReadDictionary(in);
  const auto *t = dict.Find("dog");
  ASSERT_NE(t, nullptr);
  ASSERT_EQ(t->size(), 2u);
  EXPECT_EQ((*t)[0], (Translation{"chien", 0.9}));
  EXPECT_EQ((*t)[1], (Translation{"chienne", 0.1}));
}

TEST(Dictionary, DefaultWeight) {
  std::istringstream in("cat\tchat\n");
  EXPECT_EQ((*ReadDictionary(in).Find("cat"))[0].weight, 1.0);
}

TEST(Dictionary, Errors) {
  for (const char *text :
       {"cat\tchat\t-1\n", "cat\t\t1\n", "cat\n", "cat\tchat\t0\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(ReadDictionary(in), ParseError) << text;
  }
}

TEST(Bio, ReadsSentences) {
  std::istringstream in(Slurp(TestData("golden.bio")));
  auto sentences = ReadBio(in);
  ASSERT_EQ(sentences.size(), 2u);
  EXPECT_EQ(*sentences[0].bio,
            (std::vector<std::string>{"B-PER", "I-PER", "O", "B-LOC"}));
}

TEST(GoldenFixtures, ByteIdenticalRoundTrips) {
  ExpectByteRoundTrip(
      "golden.vec", [](std::istream &in) { return ReadVec(in); },
      [](std::ostream &out, const EmbeddingSpace &s) { WriteVec(out, s); });
  ExpectByteRoundTrip(
      "golden.pharaoh", [](std::istream &in) { return ReadPharaoh(in); },
      [](std::ostream &out, const std::vector<LinkSet> &s) {
        WritePharaoh(out, s);
      });
  ExpectByteRoundTrip(
      "golden.conllu", [](std::istream &in) { return ReadConllu(in); },
      [](std::ostream &out, const std::vector<AnnotatedSentence> &s) {
        WriteConllu(out, s);
      });
  ExpectByteRoundTrip(
      "golden.pvec", [](std::istream &in) { return ReadPvec(in); },
      [](std::ostream &out, const ParamVector &p) { WritePvec(out, p); });
  ExpectByteRoundTrip(
      "golden.dict.tsv", [](std::istream &in) { return ReadDictionary(in); },
      [](std::ostream &out, const WeightedDictionary &d) {
        WriteDictionary(out, d);
      });
  ExpectByteRoundTrip(
      "golden.bio", [](std::istream &in) { return ReadBio(in); },
      [](std::ostream &out, const std::vector<AnnotatedSentence> &s) {
        WriteBio(out, s);
      });
}

TEST(EmbeddingSpace, ExactDoublesSurviveText) {
  Eigen::MatrixXd v(1, 3);
  v << 0.1, 1.0 / 3.0, -2.5e-300;
  EmbeddingSpace space({"a", "b", "c"}, v);
  std::stringstream buf;
  WriteVec(buf, space);
  EXPECT_EQ(ReadVec(buf).vectors(), v);
}

TEST(Files, MissingFileIsIoError) {
  EXPECT_THROW(ReadFile("/nonexistent/xlrep/file"), IoError);
}

}  // namespace
}  // namespace xlrep::io
