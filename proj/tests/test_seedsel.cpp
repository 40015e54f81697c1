// Copyright 2026 The LSGM Authors.
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

#include <chrono>

#include <gtest/gtest.h>

#include "lsgm/errors.hpp"
#include "lsgm/seedsel.hpp"
#include "test_util.hpp"

namespace lsgm {
namespace {

BinaryMatrix binary(std::initializer_list<std::initializer_list<int>> rows) {
  BinaryMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (int v : r) m(i, j++) = static_cast<std::uint8_t>(v);
    ++i;
  }
  return m;
}

BinaryMatrix example_a() {
  return binary({{1, 0, 1, 0}, {0, 1, 1, 0}, {1, 1, 1, 0}, {0, 1, 0, 0}});
}

BinaryMatrix example_b() {
  return binary({{1, 1, 1, 0}, {1, 0, 1, 0}, {1, 1, 0, 0}, {1, 1, 1, 0}});
}

BinaryMatrix rows_of(const BinaryMatrix& m, std::initializer_list<int> rows) {
  BinaryMatrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  Eigen::Index i = 0;
  for (int r : rows) out.row(i++) = m.row(r);
  return out;
}

TEST(EntropyTest, Basics) {
  EXPECT_DOUBLE_EQ(column_entropy(binary({{1, 1, 1}, {0, 0, 0}})), 0.0);
  EXPECT_DOUBLE_EQ(column_entropy(binary({{0, 0, 1, 1}, {0, 1, 0, 1}})), 2.0);
  EXPECT_DOUBLE_EQ(column_entropy(BinaryMatrix(0, 5)), 0.0);
  EXPECT_THROW(column_entropy(binary({{0, 2}})), ParameterError);
}

TEST(EntropyTest, WorkedExampleBlocks) {
  // Rows {2, 1} in 1-based labels are rows {1, 0} here.
  EXPECT_DOUBLE_EQ(column_entropy(rows_of(example_a(), {1, 0})), 2.0);
  EXPECT_DOUBLE_EQ(column_entropy(rows_of(example_b(), {1, 0})), 1.5);
}

TEST(SelectTest, WorkedExampleOrderAndTie) {
  const auto start = std::chrono::steady_clock::now();
  const SeedSelection sel = select_seeds(example_a(), example_b(), 3);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(sel.order, (std::vector<int>{1, 0, 2}));
  ASSERT_EQ(sel.maximizers.size(), 3u);
  EXPECT_EQ(sel.maximizers[0], (std::vector<int>{1}));
  EXPECT_EQ(sel.maximizers[1], (std::vector<int>{0, 2}));
  EXPECT_DOUBLE_EQ(sel.entropy1[1] + sel.entropy2[1], 3.5);
  EXPECT_LT(ms, 1.0);
}

TEST(SelectTest, FirstPickIsExhaustiveArgmax) {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int s = 1 + static_cast<int>(rng.below(6));
    const int m = 1 + static_cast<int>(rng.below(10));
    BinaryMatrix a(s, m), b(s, m);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < m; ++j) {
        a(i, j) = rng.bernoulli(0.5);
        b(i, j) = rng.bernoulli(0.5);
      }
    }
    double best = -1;
    int arg = -1;
    for (int i = 0; i < s; ++i) {
      const double h = column_entropy(a.row(i)) + column_entropy(b.row(i));
      if (h > best + 1e-12) {
        best = h;
        arg = i;
      }
    }
    const SeedSelection sel = select_seeds(a, b, s);
    EXPECT_EQ(sel.order[0], arg);
    // Entropy never decreases and is capped by log2 of the column count.
    for (std::size_t t = 0; t < sel.order.size(); ++t) {
      EXPECT_LE(sel.entropy1[t], std::log2(m) + 1e-12);
      EXPECT_LE(sel.entropy2[t], std::log2(m) + 1e-12);
      if (t > 0) {
        EXPECT_GE(sel.entropy1[t], sel.entropy1[t - 1] - 1e-12);
        EXPECT_GE(sel.entropy2[t], sel.entropy2[t - 1] - 1e-12);
      }
    }
    // Entropy recomputed from scratch on the chosen rows.
    BinaryMatrix chosen_a(static_cast<Eigen::Index>(sel.order.size()), m), chosen_b = chosen_a;
    for (std::size_t t = 0; t < sel.order.size(); ++t) {
      chosen_a.row(static_cast<Eigen::Index>(t)) = a.row(sel.order[t]);
      chosen_b.row(static_cast<Eigen::Index>(t)) = b.row(sel.order[t]);
    }
    EXPECT_NEAR(sel.entropy1.back(), column_entropy(chosen_a), 1e-12);
    EXPECT_NEAR(sel.entropy2.back(), column_entropy(chosen_b), 1e-12);
    EXPECT_EQ(select_seeds(a, b, s).order, sel.order);
  }
}

TEST(SelectTest, IdenticalRowsGiveAscendingOrder) {
  const BinaryMatrix a = binary({{1, 0, 1}, {1, 0, 1}, {1, 0, 1}});
  const SeedSelection sel = select_seeds(a, a, 3);
  EXPECT_EQ(sel.order, (std::vector<int>{0, 1, 2}));
}

TEST(SelectTest, GraphOverloadBuildsBlocks) {
  // Seeds 0..3 in both graphs; cluster vertices 4..7 carry the example.
  const BinaryMatrix a = example_a(), b = example_b();
  std::vector<Edge> ea, eb;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (a(i, j)) ea.push_back({i, 4 + j});
      if (b(i, j)) eb.push_back({i, 4 + j});
    }
  }
  const SparseGraph ga(8, ea), gb(8, eb);
  const std::vector<Vertex> cluster = {4, 5, 6, 7};
  const SeedSelection sel = select_seeds(ga, gb, testing::identity_seeds(4), cluster, cluster, 3);
  EXPECT_EQ(sel.order, (std::vector<int>{1, 0, 2}));
  ASSERT_EQ(sel.seeds.size(), 3u);
  EXPECT_EQ(sel.seeds.pairs[0], (std::pair<Vertex, Vertex>{1, 1}));
  const SeedSelection all = select_seeds(ga, gb, testing::identity_seeds(4), cluster, cluster, 4);
  EXPECT_EQ(all.order.size(), 4u);
  EXPECT_THROW(select_seeds(ga, gb, testing::identity_seeds(4), std::vector<Vertex>{}, cluster, 2),
               ParameterError);
}

TEST(SelectTest, BudgetBounds) {
  EXPECT_THROW(select_seeds(example_a(), example_b(), 5), ParameterError);
  EXPECT_THROW(select_seeds(example_a(), example_b(), -1), ParameterError);
  EXPECT_TRUE(select_seeds(example_a(), example_b(), 0).order.empty());
}

}  // namespace
}  // namespace lsgm
