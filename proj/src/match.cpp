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

#include "lsgm/match.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "lsgm/errors.hpp"
#include "lsgm/lap.hpp"

namespace lsgm {

std::size_t Matching::matched_count() const {
  return static_cast<std::size_t>(
      std::count_if(alignment.begin(), alignment.end(), [](Vertex v) { return v != kUnmatched; }));
}

namespace {

// Both graphs relabeled so the seeds come first (in seed order), followed by
// the remaining vertices in ascending order.
struct SeedFirstOrder {
  SparseGraph a;
  SparseGraph b;
  std::vector<Vertex> order1;
  std::vector<Vertex> order2;
  int num_seeds = 0;
};

std::vector<Vertex> seeds_then_rest(const std::vector<Vertex>& seeds, int n) {
  std::vector<bool> is_seed(static_cast<std::size_t>(n), false);
  for (Vertex v : seeds) is_seed[static_cast<std::size_t>(v)] = true;
  std::vector<Vertex> order = seeds;
  for (Vertex v = 0; v < n; ++v) {
    if (!is_seed[static_cast<std::size_t>(v)]) order.push_back(v);
  }
  return order;
}

SeedFirstOrder seed_first(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds) {
  seeds.validate(a.num_vertices(), b.num_vertices());
  SeedFirstOrder out;
  out.num_seeds = static_cast<int>(seeds.size());
  out.order1 = seeds_then_rest(seeds.first(), a.num_vertices());
  out.order2 = seeds_then_rest(seeds.second(), b.num_vertices());
  out.a = a.induced_subgraph(out.order1);
  out.b = b.induced_subgraph(out.order2);
  return out;
}

Eigen::SparseMatrix<double> adjacency_block(const SparseGraph& g, int row_begin, int row_end,
                                            int col_begin, int col_end) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (Vertex u = row_begin; u < row_end; ++u) {
    for (Vertex v : g.neighbors(u)) {
      if (v >= col_begin && v < col_end) triplets.emplace_back(u - row_begin, v - col_begin, 1.0);
    }
  }
  Eigen::SparseMatrix<double> out(row_end - row_begin, col_end - col_begin);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

double stochastic_error(const Eigen::MatrixXd& p) {
  const double rows = (p.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double cols = (p.colwise().sum().array() - 1.0).abs().maxCoeff();
  return std::max(rows, cols);
}

Matching seeded_skeleton(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds) {
  Matching out;
  out.alignment.assign(static_cast<std::size_t>(a.num_vertices()), kUnmatched);
  out.seeded.assign(static_cast<std::size_t>(a.num_vertices()), false);
  out.num_vertices2 = b.num_vertices();
  for (auto [u, v] : seeds.pairs) {
    out.alignment[static_cast<std::size_t>(u)] = v;
    out.seeded[static_cast<std::size_t>(u)] = true;
  }
  return out;
}

}  // namespace

std::size_t matched_disagreements(const SparseGraph& a, const SparseGraph& b,
                                  std::span<const Vertex> alignment) {
  if (static_cast<int>(alignment.size()) != a.num_vertices()) {
    throw ParameterError("alignment must have one entry per graph-1 vertex");
  }
  std::vector<bool> in_image(static_cast<std::size_t>(b.num_vertices()), false);
  for (Vertex v : alignment) {
    if (v == kUnmatched) continue;
    if (v < 0 || v >= b.num_vertices() || in_image[static_cast<std::size_t>(v)]) {
      throw ParameterError("alignment is not injective into graph 2");
    }
    in_image[static_cast<std::size_t>(v)] = true;
  }
  std::size_t edges_a = 0;
  std::size_t agree = 0;
  for (Vertex u = 0; u < a.num_vertices(); ++u) {
    const Vertex pu = alignment[static_cast<std::size_t>(u)];
    if (pu == kUnmatched) continue;
    for (Vertex v : a.neighbors(u)) {
      if (v <= u) continue;
      const Vertex pv = alignment[static_cast<std::size_t>(v)];
      if (pv == kUnmatched) continue;
      ++edges_a;
      if (b.has_edge(pu, pv)) ++agree;
    }
  }
  std::size_t edges_b = 0;
  for (Vertex x = 0; x < b.num_vertices(); ++x) {
    if (!in_image[static_cast<std::size_t>(x)]) continue;
    for (Vertex y : b.neighbors(x)) {
      if (y > x && in_image[static_cast<std::size_t>(y)]) ++edges_b;
    }
  }
  return edges_a + edges_b - 2 * agree;
}

std::size_t edge_disagreements(const SparseGraph& a, const SparseGraph& b,
                               std::span<const Vertex> alignment) {
  for (Vertex v : alignment) {
    if (v == kUnmatched) throw ParameterError("alignment is partial");
  }
  return matched_disagreements(a, b, alignment);
}

SeededQuadraticObjective::SeededQuadraticObjective(const SparseGraph& a, const SparseGraph& b,
                                                   int num_seeds) {
  const int n = a.num_vertices();
  if (b.num_vertices() != n) throw ParameterError("graphs must have equal order");
  if (num_seeds < 0 || num_seeds > n) throw ParameterError("seed count out of range");
  a22_ = adjacency_block(a, num_seeds, n, num_seeds, n);
  b22_ = adjacency_block(b, num_seeds, n, num_seeds, n);
  const Eigen::SparseMatrix<double> a21 = adjacency_block(a, num_seeds, n, 0, num_seeds);
  const Eigen::SparseMatrix<double> b21 = adjacency_block(b, num_seeds, n, 0, num_seeds);
  seed_term_ = Eigen::MatrixXd(a21 * Eigen::SparseMatrix<double>(b21.transpose()));
}

Eigen::MatrixXd SeededQuadraticObjective::quadratic_term(const Eigen::MatrixXd& p) const {
  const Eigen::MatrixXd pb = p * b22_;
  return a22_ * pb;
}

double SeededQuadraticObjective::value(const Eigen::MatrixXd& p) const {
  return (quadratic_term(p).array() * p.array()).sum() +
         2.0 * (seed_term_.array() * p.array()).sum();
}

Eigen::MatrixXd SeededQuadraticObjective::gradient(const Eigen::MatrixXd& p) const {
  return 2.0 * (quadratic_term(p) + seed_term_);
}

double SeededQuadraticObjective::curvature(const Eigen::MatrixXd& direction) const {
  return (quadratic_term(direction).array() * direction.array()).sum();
}

Matching sgm_match(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
                   const SgmOptions& options, SgmTrace* trace) {
  if (a.num_vertices() != b.num_vertices()) {
    throw ParameterError("sgm_match needs graphs of equal order (" +
                         std::to_string(a.num_vertices()) + " vs " +
                         std::to_string(b.num_vertices()) + "); use pad_and_match");
  }
  const SeedFirstOrder ordered = seed_first(a, b, seeds);
  const int s = ordered.num_seeds;
  const int m = a.num_vertices() - s;
  Matching out = seeded_skeleton(a, b, seeds);

  if (m > 0) {
    const SeededQuadraticObjective objective(ordered.a, ordered.b, s);
    Eigen::MatrixXd p = Eigen::MatrixXd::Constant(m, m, 1.0 / m);
    // The objective is quadratic along each search line, so Q(P) = A22 P B22
    // is updated in place and the next value follows from slope and curvature.
    Eigen::MatrixXd q = objective.quadratic_term(p);
    double current = objective.value(p);
    if (trace) {
      trace->relaxed_objective.push_back(current);
      trace->stochastic_error.push_back(stochastic_error(p));
    }
    for (int it = 0; it < options.max_iterations; ++it) {
      const Eigen::MatrixXd grad = 2.0 * (q + objective.seed_term());
      const Assignment vertex = lap_solve(grad, /*maximize=*/true);
      Eigen::MatrixXd direction = -p;
      for (int i = 0; i < m; ++i) direction(i, vertex.col_of_row[static_cast<std::size_t>(i)]) += 1.0;

      const double slope = (grad.array() * direction.array()).sum();
      const Eigen::MatrixXd qd = objective.quadratic_term(direction);
      const double curve = (qd.array() * direction.array()).sum();
      double step;
      if (curve < 0.0) {
        step = std::clamp(-slope / (2.0 * curve), 0.0, 1.0);
      } else {
        step = curve + slope > 0.0 ? 1.0 : 0.0;
      }
      ++out.iterations;
      if (trace) trace->step_sizes.push_back(step);
      if (step * direction.norm() < options.step_tolerance) break;

      p += step * direction;
      q += step * qd;
      const double next = current + step * slope + step * step * curve;
      if (trace) {
        trace->relaxed_objective.push_back(objective.value(p));
        trace->stochastic_error.push_back(stochastic_error(p));
      }
      const bool flat = std::abs(next - current) <= options.objective_tolerance * std::max(1.0, std::abs(current));
      current = next;
      if (flat) break;
    }
    const Assignment projected = lap_solve(p, /*maximize=*/true);
    for (int i = 0; i < m; ++i) {
      const Vertex u = ordered.order1[static_cast<std::size_t>(s + i)];
      const Vertex v = ordered.order2[static_cast<std::size_t>(s + projected.col_of_row[static_cast<std::size_t>(i)])];
      out.alignment[static_cast<std::size_t>(u)] = v;
    }
  }
  out.objective = edge_disagreements(a, b, out.alignment);
  return out;
}

Matching pad_and_match(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
                       const SgmOptions& options) {
  seeds.validate(a.num_vertices(), b.num_vertices());
  if (a.num_vertices() == b.num_vertices()) return sgm_match(a, b, seeds, options);

  const int n = std::max(a.num_vertices(), b.num_vertices());
  const SparseGraph pa = a.with_isolated_vertices(n - a.num_vertices());
  const SparseGraph pb = b.with_isolated_vertices(n - b.num_vertices());
  const Matching padded = sgm_match(pa, pb, seeds, options);

  Matching out = seeded_skeleton(a, b, seeds);
  out.iterations = padded.iterations;
  for (Vertex u = 0; u < a.num_vertices(); ++u) {
    const Vertex v = padded.alignment[static_cast<std::size_t>(u)];
    out.alignment[static_cast<std::size_t>(u)] = v < b.num_vertices() ? v : kUnmatched;
  }
  out.objective = matched_disagreements(a, b, out.alignment);
  return out;
}

Matching brute_force_match(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds) {
  if (a.num_vertices() != b.num_vertices()) throw ParameterError("graphs must have equal order");
  const SeedFirstOrder ordered = seed_first(a, b, seeds);
  const int n = a.num_vertices();
  const int s = ordered.num_seeds;
  const int m = n - s;
  if (m > kBruteForceLimit) {
    throw ParameterError("brute-force matching refuses " + std::to_string(m) +
                         " unseeded vertices (limit " + std::to_string(kBruteForceLimit) + ")");
  }
  const Eigen::MatrixXd da = ordered.a.dense_adjacency();
  const Eigen::MatrixXd db = ordered.b.dense_adjacency();

  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best = perm;
  double best_cost = std::numeric_limits<double>::infinity();
  do {
    double cost = 0.0;
    for (int j = s; j < n; ++j) {
      for (int i = 0; i < j; ++i) {
        cost += std::abs(da(i, j) - db(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]));
      }
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin() + s, perm.end()));

  Matching out = seeded_skeleton(a, b, seeds);
  for (int i = s; i < n; ++i) {
    out.alignment[static_cast<std::size_t>(ordered.order1[static_cast<std::size_t>(i)])] =
        ordered.order2[static_cast<std::size_t>(best[static_cast<std::size_t>(i)])];
  }
  out.objective = edge_disagreements(a, b, out.alignment);
  return out;
}

void write_matching_tsv(const Matching& matching, std::ostream& out) {
  out << "g1_vertex\tg2_vertex\tstatus\n";
  std::vector<bool> in_image(static_cast<std::size_t>(matching.num_vertices2), false);
  for (std::size_t u = 0; u < matching.alignment.size(); ++u) {
    const Vertex v = matching.alignment[u];
    if (v == kUnmatched) {
      out << u << "\t-\tunmatched\n";
      continue;
    }
    if (static_cast<std::size_t>(v) < in_image.size()) in_image[static_cast<std::size_t>(v)] = true;
    out << u << '\t' << v << '\t' << (matching.seeded[u] ? "seed" : "matched") << '\n';
  }
  for (std::size_t v = 0; v < in_image.size(); ++v) {
    if (!in_image[v]) out << "-\t" << v << "\tunmatched\n";
  }
}

}  // namespace lsgm
