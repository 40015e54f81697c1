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

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsgm/cluster.hpp"
#include "lsgm/embed.hpp"
#include "lsgm/graph.hpp"
#include "lsgm/match.hpp"
#include "lsgm/seeds.hpp"

namespace lsgm {

enum class MatcherKind { kSgm, kBruteForce };

struct LsgmConfig {
  std::optional<int> d;            // unset: estimated from a partial scree plot
  std::optional<int> k;            // unset: ceil(n / max_cluster_size)
  int max_cluster_size = 800;      // per-graph vertices in one matching subproblem
  bool spherical = false;
  std::optional<int> seed_budget;  // unset: min(s, max_cluster_size / 4)
  MatcherKind matcher = MatcherKind::kSgm;
  int workers = 1;
  int recluster_depth = 2;
  std::uint64_t rng_seed = 0;
  bool bijective = true;           // false: skip size resolution, pad per cluster
  bool keep_embeddings = false;    // retain top-level embeddings in the result
  int kmeans_restarts = 5;
  SgmOptions sgm;
  EigenOptions eigen;

  // Throws ParameterError on out-of-range settings.
  void validate() const;
};

inline constexpr int kAllSeeds = std::numeric_limits<int>::max();

struct StageTimes {
  double embed = 0.0;
  double procrustes = 0.0;
  double cluster = 0.0;
  double match = 0.0;
};

struct ClusterRecord {
  int depth = 0;
  std::size_t size1 = 0;
  std::size_t size2 = 0;
  int seeds_used = 0;
  int iterations = 0;
  std::size_t disagreements = 0;
  double match_seconds = 0.0;
  bool oversized = false;
};

struct LsgmResult {
  Matching matching;                 // direct sum of the per-cluster matchings
  ResolvedClusters clusters;         // final clusters, in matching order
  std::vector<ClusterRecord> records;
  StageTimes times;
  int d = 0;
  int k = 0;
  std::optional<double> accuracy;
  std::optional<double> consistency;  // fraction of truth pairs sharing a final cluster
  std::vector<std::string> warnings;
  std::optional<Embedding> xhat;
  std::optional<Embedding> yhat;
  std::optional<Eigen::MatrixXd> aligned_x;
};

// Divide-and-conquer seeded graph matching: embed both graphs, align them
// on the seeds, jointly cluster, equalize cluster sizes, re-cluster
// oversized clusters, then match every cluster (seeds prepended) on a pool
// of `workers` threads and assemble the direct sum. When `truth` is given,
// accuracy and clustering consistency are filled in.
LsgmResult lsgm(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
                const LsgmConfig& config, std::span<const Vertex> truth = {});

// Fraction of unseeded graph-1 vertices v with alignment[v] == truth[v].
double accuracy(const Matching& matching, std::span<const Vertex> truth, const SeedSet& seeds);

// Scree-based dimension choice: min(ceil(sqrt(n)), 50) leading eigenvalues,
// then the profile-likelihood elbow.
int choose_dimension(const SparseGraph& g, const EigenOptions& options = {});

}  // namespace lsgm
