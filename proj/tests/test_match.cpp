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

#include <sstream>

#include <gtest/gtest.h>

#include "lsgm/errors.hpp"
#include "lsgm/match.hpp"
#include "test_util.hpp"

namespace lsgm {
namespace {

using testing::dense_disagreements;
using testing::erdos_renyi;
using testing::identity_seeds;

// Random doubly stochastic interior point: mixture of permutations.
Eigen::MatrixXd random_doubly_stochastic(int m, Rng& rng) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(m, m);
  double total = 0;
  for (int r = 0; r < m + 3; ++r) {
    const double w = 0.1 + rng.uniform();
    const auto perm = rng.permutation(m);
    for (int i = 0; i < m; ++i) p(i, perm[i]) += w;
    total += w;
  }
  return p / total;
}

TEST(DisagreementTest, Basics) {
  Rng rng(1);
  const SparseGraph a = erdos_renyi(10, 0.4, rng);
  std::vector<Vertex> identity(10);
  std::iota(identity.begin(), identity.end(), 0);
  EXPECT_EQ(edge_disagreements(a, a, identity), 0u);
  const SparseGraph edge(2, std::vector<Edge>{{0, 1}});
  const SparseGraph empty(2, std::vector<Edge>{});
  EXPECT_EQ(edge_disagreements(edge, empty, std::vector<Vertex>{0, 1}), 1u);
  EXPECT_EQ(edge_disagreements(edge, empty, std::vector<Vertex>{1, 0}), 1u);
  EXPECT_THROW(edge_disagreements(edge, empty, std::vector<Vertex>{0, kUnmatched}), ParameterError);
  EXPECT_THROW(edge_disagreements(edge, empty, std::vector<Vertex>{0, 0}), ParameterError);
}

TEST(DisagreementTest, MatchesDenseOracle) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const SparseGraph a = erdos_renyi(8, 0.5, rng);
    const SparseGraph b = erdos_renyi(8, 0.5, rng);
    const auto perm = rng.permutation(8);
    EXPECT_EQ(static_cast<double>(edge_disagreements(a, b, perm)), dense_disagreements(a, b, perm));
  }
}

TEST(ObjectiveTest, GradientMatchesCentralDifferences) {
  Rng rng(3);
  for (int m = 1; m <= 6; ++m) {
    const int s = static_cast<int>(rng.below(3));
    const SparseGraph a = erdos_renyi(s + m, 0.5, rng);
    const SparseGraph b = erdos_renyi(s + m, 0.5, rng);
    const SeededQuadraticObjective f(a, b, s);
    for (int point = 0; point < 5; ++point) {
      const Eigen::MatrixXd p = random_doubly_stochastic(m, rng);
      const Eigen::MatrixXd g = f.gradient(p);
      Eigen::MatrixXd fd(m, m);
      const double h = 1e-5;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          Eigen::MatrixXd plus = p, minus = p;
          plus(i, j) += h;
          minus(i, j) -= h;
          fd(i, j) = (f.value(plus) - f.value(minus)) / (2 * h);
        }
      }
      EXPECT_LE((g - fd).norm(), 1e-5 * std::max(1.0, g.norm())) << "m=" << m;
    }
  }
}

// g(P) = <A22 P B22, P> + 2 <A21 B21^T, P> evaluated densely.
TEST(ObjectiveTest, ValueAndCurvatureMatchDenseFormulas) {
  Rng rng(4);
  const int s = 2, m = 5;
  const SparseGraph a = erdos_renyi(s + m, 0.5, rng);
  const SparseGraph b = erdos_renyi(s + m, 0.5, rng);
  const Eigen::MatrixXd da = a.dense_adjacency(), db = b.dense_adjacency();
  const Eigen::MatrixXd a22 = da.bottomRightCorner(m, m), b22 = db.bottomRightCorner(m, m);
  const Eigen::MatrixXd a21 = da.bottomLeftCorner(m, s), b21 = db.bottomLeftCorner(m, s);
  const SeededQuadraticObjective f(a, b, s);
  const Eigen::MatrixXd p = random_doubly_stochastic(m, rng);
  const double expected = (a22 * p * b22).cwiseProduct(p).sum() + 2 * (a21 * b21.transpose()).cwiseProduct(p).sum();
  EXPECT_NEAR(f.value(p), expected, 1e-12);
  const Eigen::MatrixXd d = random_doubly_stochastic(m, rng) - p;
  EXPECT_NEAR(f.curvature(d), (a22 * d * b22).cwiseProduct(d).sum(), 1e-12);
}

// Permutation objective ties to disagreements: for a permutation P,
// g(P) = 2 (shared edges touching unseeded vertices) minus the seed-seed part.
TEST(SgmTest, TraceIsMonotoneAndDoublyStochastic) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 10 + static_cast<int>(rng.below(30));
    const SparseGraph a = erdos_renyi(n, 0.3, rng);
    const SparseGraph b = apply_permutation(a, rng.permutation(n));
    SgmTrace trace;
    sgm_match(a, b, SeedSet{}, {}, &trace);
    ASSERT_FALSE(trace.relaxed_objective.empty());
    for (std::size_t i = 1; i < trace.relaxed_objective.size(); ++i) {
      EXPECT_GE(trace.relaxed_objective[i], trace.relaxed_objective[i - 1] - 1e-9);
    }
    for (double e : trace.stochastic_error) EXPECT_LE(e, 1e-7);
    for (double step : trace.step_sizes) {
      EXPECT_GE(step, 0.0);
      EXPECT_LE(step, 1.0);
    }
  }
}

TEST(SgmTest, RecoversIsomorphismWithThreeSeeds) {
  int recovered = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    const SparseGraph a = erdos_renyi(20, 0.5, rng);
    const Permutation pi = rng.permutation(20);
    const SparseGraph b = apply_permutation(a, pi);
    const SeedSet seeds = SeedSet::from_truth(pi, std::vector<Vertex>{0, 1, 2});
    const Matching m = sgm_match(a, b, seeds);
    EXPECT_EQ(m.objective, 0u);
    recovered += m.alignment == pi;
  }
  EXPECT_EQ(recovered, 20);
}

TEST(SgmTest, SelfMatchIsIdentity) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(7));
    const SparseGraph a = erdos_renyi(m, 0.5, rng);
    const Matching out = sgm_match(a, a, SeedSet{});
    EXPECT_EQ(out.objective, 0u);
    EXPECT_EQ(out.objective, brute_force_match(a, a, SeedSet{}).objective);
  }
}

TEST(SgmTest, NeverBeatsBruteForceAndUsuallyTies) {
  Rng rng(7);
  int ties = 0;
  const int trials = 100;
  for (int trial = 0; trial < trials; ++trial) {
    const int s = trial % 2 == 0 ? 0 : 2;
    const int m = 2 + static_cast<int>(rng.below(6));
    const SparseGraph a = erdos_renyi(s + m, 0.5, rng);
    const Permutation pi = rng.permutation(s + m);
    // Noisy copy: flip a few pairs.
    std::vector<Edge> edges;
    for (const Edge& e : apply_permutation(a, pi).edges()) {
      if (!rng.bernoulli(0.15)) edges.push_back(e);
    }
    const SparseGraph b(s + m, edges);
    const SeedSet seeds = SeedSet::from_truth(pi, std::vector<Vertex>(testing::identity_seeds(s).first()));
    const Matching heuristic = sgm_match(a, b, seeds);
    const Matching exact = brute_force_match(a, b, seeds);
    EXPECT_GE(heuristic.objective, exact.objective);
    ties += heuristic.objective == exact.objective;
    for (auto [u, v] : seeds.pairs) EXPECT_EQ(heuristic.alignment[u], v);
  }
  EXPECT_GE(ties, 80);
}

TEST(SgmTest, SeedsAreRespected) {
  Rng rng(8);
  const SparseGraph a = erdos_renyi(30, 0.3, rng);
  const SparseGraph b = erdos_renyi(30, 0.3, rng);
  SeedSet seeds;
  seeds.pairs = {{4, 9}, {0, 17}, {29, 3}};
  const Matching m = sgm_match(a, b, seeds);
  for (auto [u, v] : seeds.pairs) {
    EXPECT_EQ(m.alignment[u], v);
    EXPECT_TRUE(m.seeded[u]);
  }
  std::vector<Vertex> sorted = m.alignment;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 30; ++i) EXPECT_EQ(sorted[i], i);
  EXPECT_EQ(m.objective, edge_disagreements(a, b, m.alignment));
}

TEST(SgmTest, Errors) {
  const SparseGraph a(3, std::vector<Edge>{{0, 1}});
  const SparseGraph b(4, std::vector<Edge>{{0, 1}});
  EXPECT_THROW(sgm_match(a, b, SeedSet{}), ParameterError);
  SeedSet dup;
  dup.pairs = {{0, 1}, {0, 2}};
  EXPECT_THROW(sgm_match(a, a, dup), ParameterError);
}

TEST(PadTest, ExtraIsolatedVertices) {
  Rng rng(9);
  const SparseGraph a = erdos_renyi(12, 0.4, rng);
  const SparseGraph b = a.with_isolated_vertices(3);
  const Matching m = pad_and_match(a, b, identity_seeds(3));
  EXPECT_EQ(m.matched_count(), 12u);
  EXPECT_EQ(m.objective, 0u);
  EXPECT_EQ(m.num_vertices2, 15);
  // Restricted to real vertices this is an automorphism-respecting copy.
  std::vector<Vertex> image = m.alignment;
  for (Vertex v : image) EXPECT_LT(v, 15);
  EXPECT_EQ(matched_disagreements(a, b, m.alignment), 0u);
}

TEST(PadTest, OneVersusTwo) {
  const SparseGraph a(1, std::vector<Edge>{});
  const SparseGraph b(2, std::vector<Edge>{{0, 1}});
  const Matching m = pad_and_match(a, b, SeedSet{});
  EXPECT_EQ(m.alignment.size(), 1u);
  EXPECT_LE(m.matched_count(), 1u);
  std::ostringstream out;
  write_matching_tsv(m, out);
  int matched_lines = 0;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line)) matched_lines += line.find("\tmatched") != std::string::npos;
  EXPECT_LE(matched_lines, 1);
}

TEST(PadTest, SmallerSecondGraphLeavesUnmatched) {
  Rng rng(10);
  const SparseGraph b = erdos_renyi(8, 0.5, rng);
  const SparseGraph a = b.with_isolated_vertices(2);
  const Matching m = pad_and_match(a, b, identity_seeds(2));
  EXPECT_EQ(m.matched_count(), 8u);
  EXPECT_EQ(std::count(m.alignment.begin(), m.alignment.end(), kUnmatched), 2);
}

TEST(PadTest, EqualSizesDelegate) {
  Rng rng(11);
  const SparseGraph a = erdos_renyi(15, 0.4, rng);
  const SparseGraph b = erdos_renyi(15, 0.4, rng);
  EXPECT_EQ(pad_and_match(a, b, identity_seeds(2)).alignment, sgm_match(a, b, identity_seeds(2)).alignment);
}

TEST(BruteForceTest, IdentityAndSwap) {
  const SparseGraph path(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(brute_force_match(path, path, identity_seeds(1)).objective, 0u);
  // With seeds pinning 0->0 and 1->2, the best completion still loses edges.
  SeedSet seeds;
  seeds.pairs = {{0, 0}, {1, 2}};
  const Matching m = brute_force_match(path, path, seeds);
  EXPECT_EQ(m.objective, edge_disagreements(path, path, m.alignment));
  EXPECT_EQ(m.objective, 4u);
}

TEST(BruteForceTest, RecountOnRandomInstance) {
  Rng rng(12);
  const SparseGraph a = erdos_renyi(5, 0.5, rng);
  const SparseGraph b = erdos_renyi(5, 0.5, rng);
  const Matching m = brute_force_match(a, b, SeedSet{});
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> perm = {0, 1, 2, 3, 4};
  do {
    best = std::min(best, dense_disagreements(a, b, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  EXPECT_EQ(static_cast<double>(m.objective), best);
  EXPECT_EQ(m.objective, edge_disagreements(a, b, m.alignment));
}

TEST(BruteForceTest, RefusesLargeProblems) {
  const SparseGraph a(10, std::vector<Edge>{});
  EXPECT_THROW(brute_force_match(a, a, SeedSet{}), ParameterError);
  EXPECT_NO_THROW(brute_force_match(a, a, identity_seeds(1)));
}

TEST(ExportTest, MatchingTsv) {
  Matching m;
  m.alignment = {2, kUnmatched, 0};
  m.seeded = {true, false, false};
  m.num_vertices2 = 4;
  std::ostringstream out;
  write_matching_tsv(m, out);
  EXPECT_EQ(out.str(),
            "g1_vertex\tg2_vertex\tstatus\n0\t2\tseed\n1\t-\tunmatched\n2\t0\tmatched\n"
            "-\t1\tunmatched\n-\t3\tunmatched\n");
}

}  // namespace
}  // namespace lsgm
