// Copyright 2026 The Tiers Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tiers/rng.hpp"
#include "tiers/thalamo.hpp"

namespace tiers::thalamo {
namespace {

double norm(const Vector& v) { return std::sqrt(dot(v, v)); }

Vector random_vector(Rng& rng, std::size_t dim) {
  Vector v(dim);
  for (double& c : v) c = 2 * rng.uniform01() - 1;
  return v;
}

TEST(CoreStep, FixedPointAtExistingRow) {
  CategoryBank bank({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 0.3);
  const CoreStep step = core_step(bank, {0, 1, 0});
  EXPECT_EQ(step.responders, (std::vector<std::size_t>{1}));
  EXPECT_EQ(bank.row(1), (Vector{0, 1, 0}));
  EXPECT_EQ(step.residual, (Vector{0, 0, 0}));
}

TEST(CoreStep, ExactTiesUpdateBoth) {
  CategoryBank bank({{1, 0}, {0, 1}, {-1, -1}}, 0.5);
  const CoreStep step = core_step(bank, {2, 2});
  EXPECT_EQ(step.responders, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(bank.row(0), (Vector{1.5, 1}));
  EXPECT_EQ(bank.row(1), (Vector{1, 1.5}));
  EXPECT_EQ(bank.row(2), (Vector{-1, -1}));
  EXPECT_EQ(step.residual, (Vector{2 - 1.25, 2 - 1.25}));
}

TEST(CoreStep, ConvexUpdateAndResidualIdentity) {
  Rng rng(17);
  std::vector<Vector> rows;
  for (int i = 0; i < 6; ++i) rows.push_back(random_vector(rng, 5));
  CategoryBank bank(rows, 0.2);
  for (int i = 0; i < 1000; ++i) {
    const Vector x = random_vector(rng, 5);
    const std::vector<Vector> before = bank.rows();
    double max_before = 0;
    for (const Vector& r : before) max_before = std::max(max_before, norm(r));
    const CoreStep step = core_step(bank, x);
    double max_after = 0;
    for (const Vector& r : bank.rows()) max_after = std::max(max_after, norm(r));
    EXPECT_LE(max_after, std::max(max_before, norm(x)) + 1e-12);
    for (std::size_t j : step.responders) {
      // On the segment from the old row to x: new = old + k (x - old).
      for (std::size_t d = 0; d < x.size(); ++d) {
        EXPECT_NEAR(bank.row(j)[d], before[j][d] + 0.2 * (x[d] - before[j][d]), 1e-15);
      }
    }
    for (std::size_t d = 0; d < x.size(); ++d) {
      double mean = 0;
      for (std::size_t j : step.responders) mean += bank.row(j)[d];
      mean /= static_cast<double>(step.responders.size());
      EXPECT_NEAR(step.residual[d] + mean, x[d], 1e-15);
    }
  }
}

TEST(CoreStep, ZeroRateNeverLearns) {
  Rng rng(2);
  CategoryBank bank({{1, 2}, {3, 4}}, 0.0);
  const auto before = bank.rows();
  for (int i = 0; i < 100; ++i) core_step(bank, random_vector(rng, 2));
  EXPECT_EQ(bank.rows(), before);
}

TEST(CoreStep, Validation) {
  EXPECT_THROW(CategoryBank({}, 0.1), Error);
  EXPECT_THROW(CategoryBank({{1, 2}, {3}}, 0.1), Error);
  EXPECT_THROW(CategoryBank({{1, 2}}, 1.5), Error);
  EXPECT_THROW(CategoryBank({{std::nan(""), 2}}, 0.5), Error);
  CategoryBank bank({{1, 2}}, 0.5);
  try {
    core_step(bank, {1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDimension);
  }
}

TEST(CoreLoop, SingleClusterPrototypesConvergeInside) {
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    const Clusters c = synthetic_clusters(200, 3, 1.0, seed);
    EXPECT_EQ(c.points.size(), 600u);
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      EXPECT_LE(distance(c.points[i], c.centers[c.labels[i]]), c.radius + 1e-12);
    }
    CategoryBank bank = CategoryBank::from_data_box(3, c.points, 0.1, seed);
    train_core(bank, c.points, 100, seed);
    std::map<std::size_t, std::set<std::size_t>> labels_won;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      labels_won[winner(bank, c.points[i])].insert(c.labels[i]);
    }
    std::set<std::size_t> covered;
    for (const auto& [row, labels] : labels_won) {
      covered.insert(labels.begin(), labels.end());
      // A prototype fed by one ball is a convex average of its points.
      if (labels.size() == 1) {
        EXPECT_LT(distance(bank.row(row), c.centers[*labels.begin()]), c.radius) << seed;
      }
    }
    EXPECT_EQ(covered.size(), 3u);
  }
  EXPECT_THROW(synthetic_clusters(10, 2, 1.0, 0), Error);
}

TEST(MatrixLoop, ChainRecall) {
  SequenceMemory mem;
  std::vector<std::size_t> chain;
  for (int i = 0; i < 10; ++i) chain.insert(chain.end(), {0, 1, 2});
  train_sequence(mem, chain);
  EXPECT_EQ(mem.recall(0), 1u);
  EXPECT_EQ(mem.recall(1), 2u);
  EXPECT_EQ(mem.recall(2), 0u);
  EXPECT_EQ(mem.weight(0, 1), 10.0);
  EXPECT_EQ(mem.weight(1, 0), 0.0);
}

TEST(MatrixLoop, MajorityWins) {
  SequenceMemory mem;
  for (int i = 0; i < 9; ++i) matrix_step(mem, 0, 1);
  matrix_step(mem, 0, 2);
  EXPECT_EQ(mem.recall(0), 1u);
}

TEST(MatrixLoop, SingleElementChangesNothing) {
  SequenceMemory mem;
  train_sequence(mem, {4});
  EXPECT_TRUE(mem.transitions().empty());
  EXPECT_FALSE(mem.recall(4));
}

TEST(MatrixLoop, TiesGoToLowestColumn) {
  SequenceMemory mem;
  matrix_step(mem, 0, 5);
  matrix_step(mem, 0, 3);
  EXPECT_EQ(mem.recall(0), 3u);
}

TEST(MatrixLoop, RecallEqualsBigramOracle) {
  Rng rng(8);
  for (int stream = 0; stream < 100; ++stream) {
    std::vector<std::size_t> cols(1 + rng.index(60));
    for (auto& c : cols) c = rng.index(6);
    SequenceMemory mem;
    train_sequence(mem, cols);
    std::map<std::pair<std::size_t, std::size_t>, int> counts;
    for (std::size_t i = 1; i < cols.size(); ++i) ++counts[{cols[i - 1], cols[i]}];
    for (std::size_t prev = 0; prev < 6; ++prev) {
      std::optional<std::size_t> best;
      int best_count = 0;
      for (std::size_t next = 0; next < 6; ++next) {
        const auto it = counts.find({prev, next});
        const int n = it == counts.end() ? 0 : it->second;
        if (n > best_count) {
          best_count = n;
          best = next;
        }
      }
      EXPECT_EQ(mem.recall(prev), best);
    }
  }
}

TEST(NestedDemo, SeparatesWordClasses) {
  std::vector<std::string> stream;
  std::map<std::string, std::string> word_class;
  for (const ToyToken& t : toy_stream(200, 3)) {
    stream.push_back(t.word);
    word_class[t.word] = t.word_class;
  }
  DemoOptions options;
  options.seed = 3;
  const DemoResult demo = nested_demo(stream, options);
  ASSERT_EQ(demo.categories.size(), stream.size());
  std::map<std::size_t, std::set<std::string>> classes_of;
  std::map<std::string, std::set<std::size_t>> categories_of;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    classes_of[demo.categories[i]].insert(word_class[stream[i]]);
    categories_of[word_class[stream[i]]].insert(demo.categories[i]);
  }
  for (const auto& [cat, classes] : classes_of) EXPECT_EQ(classes.size(), 1u) << cat;
  bool n_to_v = false;
  for (const auto& [edge, w] : demo.transitions.transitions()) {
    n_to_v = n_to_v || (categories_of["N"].count(edge.first) && categories_of["V"].count(edge.second));
  }
  EXPECT_TRUE(n_to_v);
  EXPECT_EQ(demo.vocabulary.size(), word_class.size());
}

TEST(NestedDemo, ConstantStream) {
  const DemoResult demo = nested_demo(std::vector<std::string>(20, "time"), DemoOptions{});
  EXPECT_EQ(std::set<std::size_t>(demo.categories.begin(), demo.categories.end()).size(), 1u);
  ASSERT_EQ(demo.transitions.transitions().size(), 1u);
  const auto& [edge, w] = *demo.transitions.transitions().begin();
  EXPECT_EQ(edge.first, edge.second);
  EXPECT_EQ(w, 19.0);
}

TEST(NestedDemo, EmptyStreamIsAnError) {
  try {
    nested_demo({}, DemoOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoData);
  }
}

TEST(NestedDemo, Deterministic) {
  std::vector<std::string> stream;
  for (const ToyToken& t : toy_stream(50, 1)) stream.push_back(t.word);
  DemoOptions options;
  options.one_hot = false;
  EXPECT_EQ(nested_demo(stream, options).labels(), nested_demo(stream, options).labels());
}

}  // namespace
}  // namespace tiers::thalamo
