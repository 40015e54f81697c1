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

#include <gtest/gtest.h>

#include "lsgm/errors.hpp"
#include "lsgm/lap.hpp"
#include "test_util.hpp"

namespace lsgm {
namespace {

Eigen::MatrixXd random_integer_costs(int m, int range, Rng& rng) {
  Eigen::MatrixXd c(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) c(i, j) = static_cast<double>(rng.below(static_cast<std::uint64_t>(range)));
  }
  return c;
}

// Lexicographically first permutation among the exhaustive minima.
std::vector<int> lexicographic_optimum(const Eigen::MatrixXd& cost) {
  std::vector<int> perm(static_cast<std::size_t>(cost.rows()));
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> arg;
  do {
    double total = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) total += cost(static_cast<Eigen::Index>(i), perm[i]);
    if (total < best) {
      best = total;
      arg = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return arg;
}

TEST(LapTest, IdentityDominant) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Ones(5, 5) - Eigen::MatrixXd::Identity(5, 5);
  const Assignment a = lap_solve(c);
  const std::vector<int> identity = {0, 1, 2, 3, 4};
  EXPECT_EQ(a.col_of_row, identity);
  EXPECT_EQ(a.total, 0.0);
}

TEST(LapTest, TwoByTwo) {
  Eigen::MatrixXd c(2, 2);
  c << 1, 2, 2, 1;
  const Assignment a = lap_solve(c);
  EXPECT_EQ(a.col_of_row, (std::vector<int>{0, 1}));
  EXPECT_EQ(a.total, 2.0);
  const Assignment b = lap_solve(c, true);
  EXPECT_EQ(b.col_of_row, (std::vector<int>{1, 0}));
  EXPECT_EQ(b.total, 4.0);
}

TEST(LapTest, MatchesExhaustiveOnSixBySix) {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd c = random_integer_costs(6, 100, rng);
    EXPECT_EQ(lap_solve(c).total, testing::exhaustive_assignment(c));
    EXPECT_EQ(lap_solve(c, true).total, -testing::exhaustive_assignment(-c));
  }
}

TEST(LapTest, ContinuousCostsMatchExhaustive) {
  Rng rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(7));
    const Eigen::MatrixXd c = testing::random_matrix(m, m, rng);
    EXPECT_NEAR(lap_solve(c).total, testing::exhaustive_assignment(c), 1e-12);
  }
}

TEST(LapTest, TiesResolveToLexicographicallySmallest) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(7));
    const Eigen::MatrixXd c = random_integer_costs(m, 1 + static_cast<int>(rng.below(3)), rng);
    EXPECT_EQ(lap_solve(c).col_of_row, lexicographic_optimum(c)) << c;
  }
  EXPECT_EQ(lap_solve(Eigen::MatrixXd::Zero(4, 4)).col_of_row, (std::vector<int>{0, 1, 2, 3}));
}

TEST(LapTest, LargerInstanceIsAPermutation) {
  Rng rng(8);
  const Eigen::MatrixXd c = testing::random_matrix(150, 150, rng);
  const Assignment a = lap_solve(c);
  std::vector<int> sorted = a.col_of_row;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 150; ++i) EXPECT_EQ(sorted[i], i);
  // Swapping any two rows' columns never improves an optimal assignment.
  for (int i = 0; i < 150; i += 7) {
    for (int j = i + 1; j < 150; j += 11) {
      const double now = c(i, a.col_of_row[i]) + c(j, a.col_of_row[j]);
      const double swapped = c(i, a.col_of_row[j]) + c(j, a.col_of_row[i]);
      EXPECT_LE(now, swapped + 1e-12);
    }
  }
}

TEST(LapTest, Errors) {
  EXPECT_THROW(lap_solve(Eigen::MatrixXd::Zero(2, 3)), ParameterError);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(2, 2);
  c(1, 0) = std::nan("");
  EXPECT_THROW(lap_solve(c), NumericalError);
  c(1, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(lap_solve(c), NumericalError);
  EXPECT_TRUE(lap_solve(Eigen::MatrixXd(0, 0)).col_of_row.empty());
}

}  // namespace
}  // namespace lsgm
