// Copyright 2026 The FAN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fan/data.h"

#include <cmath>
#include <filesystem>

#include <gtest/gtest.h>

#include "fan/error.h"
#include "fan/rng.h"

namespace fan {
namespace {

Dataset FromText(const std::string& csv, const std::string& prot,
                 const LoadOptions& options = {},
                 LoadReport* report = nullptr) {
  return BuildDataset(ParseCsv(csv), prot, options, report);
}

TEST(CsvTest, ParsesQuotesAndCrlf) {
  const Table t = ParseCsv("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n2,\n");
  ASSERT_EQ(t.header, (std::vector<std::string>{"a", "b"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][0], "x,1");
  EXPECT_EQ(t.rows[0][1], "say \"hi\"");
  EXPECT_EQ(t.rows[1][1], "");
}

TEST(CsvTest, CustomDelimiter) {
  const Table t = ParseCsv("a;b\n1;2\n", {';'});
  EXPECT_EQ(t.rows[0][1], "2");
}

TEST(CsvTest, RaggedRecordIsDataError) {
  try {
    ParseCsv("a,b\n1,2,3\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(CsvTest, FormatQuotesOnlyWhenNeeded) {
  Table t{{"a", "b"}, {{"plain", "needs,quote"}, {"q\"", "x"}}};
  EXPECT_EQ(FormatCsv(t), "a,b\nplain,\"needs,quote\"\n\"q\"\"\",x\n");
  const Table back = ParseCsv(FormatCsv(t));
  EXPECT_EQ(back.rows, t.rows);
}

TEST(CsvTest, FormatDoubleRoundTrips) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const double v = rng.Normal() * std::pow(10.0, rng.Uniform(-8, 8));
    double back;
    ASSERT_TRUE(ParseDouble(FormatDouble(v), back));
    EXPECT_EQ(back, v);
  }
  double v;
  EXPECT_FALSE(ParseDouble("1.5x", v));
  EXPECT_FALSE(ParseDouble("", v));
  EXPECT_TRUE(ParseDouble(" 2 ", v));
  EXPECT_EQ(v, 2.0);
}

TEST(LoadTest, ThreeRowExample) {
  const Dataset ds = FromText("a,b,prot\n1,u,0\n2,v,1\n3,u,0\n", "prot");
  EXPECT_EQ(ds.rows(), 3u);
  EXPECT_EQ(ds.x.cols(), 3u);  // 1 numeric + 2 levels
  EXPECT_EQ(ds.protected_attr.num_classes(), 2u);
  EXPECT_EQ(ds.protected_attr.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(ds.schema.EncodedNames(),
            (std::vector<std::string>{"a", "b=u", "b=v"}));
}

TEST(LoadTest, WrongProtectedNameIsConfigError) {
  try {
    FromText("a,b,prot\n1,u,0\n2,v,1\n", "sex");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kConfig);
  }
}

TEST(LoadTest, MissingFileIsDataErrorNamingPath) {
  try {
    LoadCsv("/nonexistent/input.csv", "prot");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/input.csv"),
              std::string::npos);
  }
}

TEST(LoadTest, ZeroUsableRowsIsDataError) {
  try {
    FromText("a,prot\n1,\n2,?\n", "prot");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

TEST(LoadTest, MissingValuePolicy) {
  LoadReport report;
  const Dataset ds =
      FromText("a,b,prot\n1,u,0\n,v,1\n3,,0\n5,u,\n", "prot", {}, &report);
  EXPECT_EQ(report.dropped_rows, 1u);
  ASSERT_EQ(ds.rows(), 3u);
  // a: mean of {1, 3} = 2 imputed -> z = 0
  EXPECT_EQ(ds.x(1, 0), 0.0);
  const ColumnSpec& b = ds.schema.columns[1];
  EXPECT_EQ(b.levels, (std::vector<std::string>{"u", "v", "__missing__"}));
  EXPECT_EQ(ds.x(2, 3), 1.0);
}

TEST(LoadTest, OverridesWin) {
  LoadOptions opts;
  opts.overrides["code"] = ColumnKind::kCategorical;
  const Dataset ds = FromText("code,prot\n10,a\n20,b\n10,a\n", "prot", opts);
  EXPECT_EQ(ds.schema.columns[0].kind, ColumnKind::kCategorical);
  EXPECT_EQ(ds.x.cols(), 2u);

  LoadOptions bad;
  bad.overrides["name"] = ColumnKind::kNumeric;
  EXPECT_THROW(FromText("name,prot\nx,a\ny,b\n", "prot", bad), Error);
}

TEST(LoadTest, ConstantColumnsDroppedWithWarning) {
  LoadReport report;
  const Dataset ds =
      FromText("a,k,c,prot\n1,5,z,0\n2,5,z,1\n3,5,z,0\n", "prot", {}, &report);
  EXPECT_EQ(ds.x.cols(), 1u);
  EXPECT_EQ(report.warnings.size(), 2u);
  const Table back = Decode(ds.x, ds.schema);
  EXPECT_EQ(back.rows[0], (std::vector<std::string>{"1", "5", "z"}));
}

TEST(LoadTest, ContinuousProtectedIsQuantileBinned) {
  std::string csv = "f,age\n";
  for (int i = 0; i < 40; ++i) {
    csv += std::to_string(i % 7) + "," + std::to_string(20 + i) + "\n";
  }
  LoadReport report;
  const Dataset ds = FromText(csv, "age", {}, &report);
  EXPECT_EQ(ds.protected_attr.num_classes(), 4u);
  std::vector<int> counts(4, 0);
  for (int l : ds.protected_attr.labels) ++counts[l];
  EXPECT_EQ(counts, (std::vector<int>{10, 10, 10, 10}));

  LoadOptions reg;
  reg.mode = ProtectedMode::kRegression;
  const Dataset rd = FromText(csv, "age", reg);
  EXPECT_EQ(rd.protected_attr.values.size(), 40u);
  EXPECT_EQ(rd.protected_attr.values[3], 23.0);
}

TEST(LoadTest, RegressionNeedsNumericProtected) {
  LoadOptions reg;
  reg.mode = ProtectedMode::kRegression;
  EXPECT_THROW(FromText("a,p\n1,x\n2,y\n", "p", reg), Error);
}

TEST(LoadTest, ProtectedColumnNeverInFeatures) {
  const Dataset ds = FromText("a,prot,b\n1,7,x\n2,9,y\n4,7,y\n", "prot");
  for (const auto& name : ds.schema.EncodedNames()) {
    EXPECT_EQ(name.find("prot"), std::string::npos);
  }
  EXPECT_EQ(ds.x.cols(), 3u);
}

TEST(EncodeTest, Examples) {
  const Dataset ds = FromText("n,c,p\n1,u,0\n2,v,1\n3,u,0\n", "p");
  // mean 2, population stddev sqrt(2/3)
  EXPECT_EQ(ds.x(1, 0), 0.0);
  EXPECT_NEAR(ds.x(0, 0), -1.0 / std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_EQ(ds.x(1, 1), 0.0);
  EXPECT_EQ(ds.x(1, 2), 1.0);
}

TEST(EncodeTest, UnseenLevelIsDataErrorListingLevel) {
  const Dataset ds = FromText("c,p\nu,0\nv,1\n", "p");
  const Table other{{"c", "p"}, {{"w", "0"}}};
  try {
    Encode(other, ds.schema);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("'w'"), std::string::npos);
  }
}

TEST(EncodeTest, OneHotBlocksSumToOne) {
  const Dataset ds =
      FromText("c,d,p\nu,x,0\nv,y,1\nw,x,0\nu,z,1\n", "p");
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    double block1 = 0, block2 = 0;
    for (std::size_t c = 0; c < 3; ++c) block1 += ds.x(r, c);
    for (std::size_t c = 3; c < 6; ++c) block2 += ds.x(r, c);
    EXPECT_EQ(block1, 1.0);
    EXPECT_EQ(block2, 1.0);
  }
}

TEST(DecodeTest, ArgmaxAndTies) {
  const Dataset ds = FromText("c,p\nu,0\nv,1\n", "p");
  const Table t = Decode(Matrix{{0.2, 0.8}, {0.5, 0.5}}, ds.schema);
  EXPECT_EQ(t.header, (std::vector<std::string>{"c"}));
  EXPECT_EQ(t.rows[0][0], "v");
  EXPECT_EQ(t.rows[1][0], "u");
}

TEST(DecodeTest, WidthMismatchIsShapeError) {
  const Dataset ds = FromText("c,p\nu,0\nv,1\n", "p");
  try {
    Decode(Matrix(1, 3), ds.schema);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kShape);
  }
}

TEST(DecodeTest, ReattachesProtectedInOriginalPosition) {
  const Dataset ds = FromText("a,p,c\n1,m,u\n2,f,v\n", "p");
  const Table t = Decode(ds.x, ds.schema, &ds.protected_attr.raw);
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "p", "c"}));
  EXPECT_EQ(t.rows[1], (std::vector<std::string>{"2", "f", "v"}));
}

// Property: decode(encode(t)) reproduces random schema-conformant tables.
TEST(DecodeTest, EncodeDecodeIdentity) {
  Rng rng(17);
  const char* levels[] = {"red", "green", "blue"};
  for (int trial = 0; trial < 10; ++trial) {
    Table t{{"x", "col", "y", "p"}, {}};
    for (int r = 0; r < 30; ++r) {
      t.rows.push_back({FormatDouble(rng.Normal() * 100),
                        levels[rng.Below(3)], FormatDouble(rng.Uniform()),
                        std::to_string(rng.Below(2))});
    }
    const Dataset ds = BuildDataset(t, "p", {});
    const Table back = Decode(ds.x, ds.schema);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      double a, b;
      ASSERT_TRUE(ParseDouble(back.rows[r][0], a));
      ASSERT_TRUE(ParseDouble(t.rows[r][0], b));
      EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(b)));
      EXPECT_EQ(back.rows[r][1], t.rows[r][1]);
      ASSERT_TRUE(ParseDouble(back.rows[r][2], a));
      ASSERT_TRUE(ParseDouble(t.rows[r][2], b));
      EXPECT_NEAR(a, b, 1e-9);
    }
  }
}

Dataset Balanced(std::size_t n) {
  std::string csv = "f,p\n";
  for (std::size_t i = 0; i < n; ++i) {
    csv += std::to_string(i) + "," + std::to_string(i % 2) + "\n";
  }
  return FromText(csv, "p");
}

TEST(SplitTest, Sizes) {
  const Dataset ds = SplitDataset(Balanced(10), 0.2, 1);
  EXPECT_EQ(ds.split.validation.size(), 2u);
  EXPECT_EQ(ds.split.train.size(), 8u);
}

TEST(SplitTest, DeterministicPerSeed) {
  const Dataset a = SplitDataset(Balanced(50), 0.3, 7);
  const Dataset b = SplitDataset(Balanced(50), 0.3, 7);
  const Dataset c = SplitDataset(Balanced(50), 0.3, 8);
  EXPECT_EQ(a.split.validation, b.split.validation);
  EXPECT_NE(a.split.validation, c.split.validation);
}

TEST(SplitTest, DisjointAndCovering) {
  const Dataset ds = SplitDataset(Balanced(37), 0.25, 3);
  std::vector<int> seen(37, 0);
  for (auto i : ds.split.train) ++seen[i];
  for (auto i : ds.split.validation) ++seen[i];
  for (int s : seen) EXPECT_EQ(s, 1);
}

// Counting argument: with k of n validation rows drawn from a 50/50
// population, each class should contribute k/2 rows, +-1 for odd k.
TEST(SplitTest, StratificationPreservesBalance) {
  for (std::size_t n : {20u, 51u, 100u, 333u}) {
    for (double f : {0.1, 0.2, 0.3, 0.5}) {
      const Dataset ds = SplitDataset(Balanced(n), f, n);
      const auto& labels = ds.protected_attr.labels;
      for (const auto* part : {&ds.split.train, &ds.split.validation}) {
        std::size_t ones = 0;
        for (auto i : *part) ones += labels[i];
        const double half = part->size() / 2.0;
        EXPECT_LE(std::abs(static_cast<double>(ones) - half), 1.0)
            << "n=" << n << " f=" << f;
      }
    }
  }
}

TEST(SplitTest, RareClassStaysInTraining) {
  const Dataset ds = SplitDataset(
      FromText("f,p\n1,a\n2,a\n3,a\n4,a\n5,b\n6,a\n", "p"), 0.5, 1);
  bool b_in_train = false;
  for (auto i : ds.split.train) b_in_train |= ds.protected_attr.labels[i] == 1;
  EXPECT_TRUE(b_in_train);
}

TEST(SplitTest, InvalidFraction) {
  EXPECT_THROW(SplitDataset(Balanced(10), 0.0, 1), Error);
  EXPECT_THROW(SplitDataset(Balanced(10), 1.0, 1), Error);
}

TEST(HeartDataTest, LoadsPublicFile) {
  const std::string path = std::string(FAN_DATA_DIR) + "/heart.csv";
  ASSERT_TRUE(std::filesystem::exists(path)) << path;
  const Dataset ds = LoadCsv(path, "sex");
  EXPECT_EQ(ds.rows(), 303u);
  EXPECT_EQ(ds.protected_attr.num_classes(), 2u);
  // 12 numeric columns + 5 levels of 'thal'
  EXPECT_EQ(ds.x.cols(), 17u);
  std::size_t males = 0;
  for (int l : ds.protected_attr.labels) males += l;
  EXPECT_EQ(males, 205u);
}

}  // namespace
}  // namespace fan
