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
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace lsgm {

using Vertex = int;
using Edge = std::pair<Vertex, Vertex>;

// Bijection on 0..n-1, stored as perm[v] = image of v.
using Permutation = std::vector<Vertex>;

// Simple undirected graph stored as sorted adjacency lists (CSR layout).
// Immutable after construction, so it can be shared between threads.
class SparseGraph {
 public:
  SparseGraph() = default;

  // Builds a graph on `n` vertices. Both orientations and repeated pairs
  // collapse to a single edge; self-loops and out-of-range endpoints throw
  // ParameterError.
  SparseGraph(int n, std::span<const Edge> edges);

  int num_vertices() const { return n_; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {neighbors_.data() + offsets_[static_cast<std::size_t>(v)],
            neighbors_.data() + offsets_[static_cast<std::size_t>(v) + 1]};
  }
  std::size_t degree(Vertex v) const { return neighbors(v).size(); }
  bool has_edge(Vertex u, Vertex v) const;

  // Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const;

  Eigen::SparseMatrix<double> adjacency() const;
  Eigen::MatrixXd dense_adjacency() const;

  // Subgraph induced on `vertices`; vertex vertices[i] becomes vertex i.
  SparseGraph induced_subgraph(std::span<const Vertex> vertices) const;

  // Same graph with `extra` isolated vertices appended.
  SparseGraph with_isolated_vertices(int extra) const;

  friend bool operator==(const SparseGraph&, const SparseGraph&) = default;

 private:
  int n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Vertex> neighbors_;
};

// Throws ParameterError unless `perm` is a bijection on 0..n-1.
void validate_permutation(std::span<const Vertex> perm, int n);
Permutation inverse_permutation(std::span<const Vertex> perm);

// Relabels vertex v as perm[v]: edge {u, v} becomes {perm[u], perm[v]}.
SparseGraph apply_permutation(const SparseGraph& g, std::span<const Vertex> perm);

// Stochastic block model parameters in block-collapsed form. The edge
// probability between u and v is block_probs(block(u), block(v)); when a
// latent-position matrix is supplied, block_probs = latent * latent^T.
struct SbmParams {
  std::vector<int> block_sizes;
  Eigen::MatrixXd block_probs;
  std::optional<Eigen::MatrixXd> latent;

  static SbmParams from_probabilities(std::vector<int> block_sizes, Eigen::MatrixXd probs);
  static SbmParams from_latent(std::vector<int> block_sizes, Eigen::MatrixXd latent);

  int num_blocks() const { return static_cast<int>(block_sizes.size()); }
  int num_vertices() const;
  // Vertices are laid out block by block in natural order.
  std::vector<int> block_of() const;

  // Throws ParameterError when sizes disagree, probabilities leave [0,1],
  // the matrix is asymmetric, or two latent rows coincide.
  void validate() const;
};

struct CorrelatedPair {
  SparseGraph g1;
  SparseGraph g2;
  double rho = 0.0;
  Permutation truth;  // g1 vertex v corresponds to g2 vertex truth[v]
  std::vector<int> block_of;
};

// Samples g1 edgewise from the SBM, then each g2 pair conditionally on g1:
// success probability D + rho(1 - D) when the pair is an edge of g1 and
// D(1 - rho) otherwise. Deterministic in rng_seed; pairs are visited in
// lexicographic order using separate streams for g1 and g2.
CorrelatedPair generate_correlated_sbm(const SbmParams& params, double rho,
                                       std::uint64_t rng_seed);

// Edge-list text format: one "u v" pair per line, optional "# n=<count>"
// header declaring the vertex count (for trailing isolated vertices).
SparseGraph read_edge_list(std::istream& in);
void write_edge_list(const SparseGraph& g, std::ostream& out);
SparseGraph load_edge_list(const std::filesystem::path& path);
void save_edge_list(const SparseGraph& g, const std::filesystem::path& path);

}  // namespace lsgm
