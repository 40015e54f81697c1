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
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lsgm/graph.hpp"
#include "lsgm/seeds.hpp"

namespace lsgm {

// Joint clustering of stacked points. For the 2n jointly embedded points the
// graph-1 rows come first (indices 0..n-1), then the graph-2 rows.
struct ClusterAssignment {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;             // k x d
  double objective = 0.0;                // within-cluster sum of squares
  std::vector<double> objective_trace;   // after each Lloyd update, best restart
  int iterations = 0;

  int num_clusters() const { return static_cast<int>(centroids.rows()); }
};

struct KMeansOptions {
  int restarts = 5;
  int max_iterations = 300;
  bool spherical = false;
};

// Lloyd's algorithm from k-means++ seeding; the best of `restarts` runs is
// returned. With `spherical`, rows are L2-normalized first and the
// centroids live in the normalized space.
ClusterAssignment kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t init_seed,
                         const KMeansOptions& options = {});

// Row-normalized copy; throws DegenerateInputError on a zero row.
Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& points);

// Sum of squared distances of each point to its labelled centroid.
double within_cluster_ss(const Eigen::MatrixXd& points, std::span<const int> labels,
                         const Eigen::MatrixXd& centroids);

// Puts both halves of every seed pair in the cluster of the graph-2 row.
// `n1` is the number of graph-1 rows in the stacked assignment.
void co_cluster_seeds(ClusterAssignment& assignment, int n1, const SeedSet& seeds);

struct ResolvedCluster {
  int source = 0;                 // k-means cluster id
  std::vector<Vertex> members1;   // graph-1 vertices, ascending
  std::vector<Vertex> members2;   // graph-2 vertices, ascending

  std::size_t size() const { return members1.size() + members2.size(); }
};

struct ResolvedClusters {
  std::vector<ResolvedCluster> clusters;  // in resize order (largest first)
};

// Resized cluster sizes for combined counts sorted nonincreasing, n points
// per graph: 2 ceil(c_i / 2) - 2 [sum_j ceil(c_j / 2) >= i + n].
std::vector<int> resized_cluster_sizes(std::span<const int> combined_sorted, int n);

// Equalizes per-graph cluster sizes. Clusters are ordered by combined count
// (ties by lower id), resized, then cluster i greedily takes the c_i/2
// unassigned vertices of each graph nearest its centroid (ties by lower
// vertex index). Clusters resized to zero are dropped.
ResolvedClusters resolve_cluster_sizes(const ClusterAssignment& assignment,
                                       const Eigen::MatrixXd& points);

// Fraction of clustered graph-1 vertices v whose image truth[v] sits in the
// same resolved cluster.
double clustering_consistency(const ResolvedClusters& resolved, std::span<const Vertex> truth);

// "vertex_id,cluster_id" rows for one graph.
void write_cluster_csv(const ResolvedClusters& resolved, int graph, std::ostream& out);

}  // namespace lsgm
