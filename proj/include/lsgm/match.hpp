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

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "lsgm/graph.hpp"
#include "lsgm/seeds.hpp"

namespace lsgm {

inline constexpr Vertex kUnmatched = -1;

// Alignment of graph-1 vertices onto graph-2 vertices. Seeds are included
// and flagged; vertices without a partner hold kUnmatched.
struct Matching {
  std::vector<Vertex> alignment;
  std::vector<bool> seeded;
  int num_vertices2 = 0;
  std::size_t objective = 0;  // edge disagreements over matched pairs
  int iterations = 0;

  std::size_t matched_count() const;
};

// Exact number of unordered vertex pairs whose adjacency differs under the
// alignment; equals ||A - P B P^T||_F^2 / 2. The alignment must be total
// and injective. Throws ParameterError otherwise.
std::size_t edge_disagreements(const SparseGraph& a, const SparseGraph& b,
                               std::span<const Vertex> alignment);

// Disagreements restricted to the vertices that are matched.
std::size_t matched_disagreements(const SparseGraph& a, const SparseGraph& b,
                                  std::span<const Vertex> alignment);

// Relaxed seeded QAP objective on graphs whose seeds occupy vertices
// 0..s-1 in both graphs (seed i of one graph corresponds to seed i of the
// other). With A22, B22 the unseeded blocks and A21, B21 the
// unseeded-by-seed blocks:
//   g(P) = <A22 P B22, P> + 2 <A21 B21^T, P>.
class SeededQuadraticObjective {
 public:
  SeededQuadraticObjective(const SparseGraph& a, const SparseGraph& b, int num_seeds);

  int size() const { return static_cast<int>(a22_.rows()); }
  double value(const Eigen::MatrixXd& p) const;
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& p) const;
  // Coefficient of t^2 in g(P + t D).
  double curvature(const Eigen::MatrixXd& direction) const;
  Eigen::MatrixXd quadratic_term(const Eigen::MatrixXd& p) const;  // A22 P B22
  const Eigen::MatrixXd& seed_term() const { return seed_term_; }

 private:

  Eigen::SparseMatrix<double> a22_;
  Eigen::SparseMatrix<double> b22_;
  Eigen::MatrixXd seed_term_;  // A21 B21^T
};

struct SgmOptions {
  int max_iterations = 30;
  double step_tolerance = 1e-9;
  double objective_tolerance = 1e-9;
};

// Per-iteration diagnostics of the Frank-Wolfe solver.
struct SgmTrace {
  std::vector<double> relaxed_objective;  // starts with the barycenter value
  std::vector<double> step_sizes;
  std::vector<double> stochastic_error;   // max |row/col sum - 1| per iterate
};

// Seeded graph matching: Frank-Wolfe on the doubly stochastic relaxation of
// min ||A - (I_s + P) B (I_s + P)^T||_F starting at the barycenter, with
// exact line search, followed by projection onto the permutations.
// a and b must have equal order; seeds may be empty.
Matching sgm_match(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
                   const SgmOptions& options = {}, SgmTrace* trace = nullptr);

// Pads the smaller graph with isolated vertices, runs sgm_match, and
// reports vertices paired with padding as unmatched.
Matching pad_and_match(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
                       const SgmOptions& options = {});

// Exhaustive search over the m! extensions of the seeding (m <= 9). Ties go
// to the lexicographically smallest permutation of the unseeded vertices.
Matching brute_force_match(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds);

inline constexpr int kBruteForceLimit = 9;

// TSV: g1_vertex, g2_vertex, status (seed | matched | unmatched). Graph-2
// vertices outside the image are listed with g1_vertex "-".
void write_matching_tsv(const Matching& matching, std::ostream& out);

}  // namespace lsgm
