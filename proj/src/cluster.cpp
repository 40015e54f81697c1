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

#include "lsgm/cluster.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>

#include "lsgm/errors.hpp"
#include "lsgm/rng.hpp"

namespace lsgm {

namespace {

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  std::vector<double> trace;
  int iterations = 0;
};

// Nearest centroid for every point; ties go to the lower cluster id.
bool assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
            std::vector<int>& labels) {
  bool changed = false;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
      const double dist = (points.row(i) - centroids.row(c)).squaredNorm();
      if (dist < best_dist) {
        best_dist = dist;
        best = static_cast<int>(c);
      }
    }
    if (labels[static_cast<std::size_t>(i)] != best) {
      labels[static_cast<std::size_t>(i)] = best;
      changed = true;
    }
  }
  return changed;
}

// Centroids as member means (summed in index order). Empty clusters are
// reseeded at the point farthest from its centroid, which moves into them.
void update(const Eigen::MatrixXd& points, std::vector<int>& labels, Eigen::MatrixXd& centroids) {
  const Eigen::Index k = centroids.rows();
  auto recompute = [&] {
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const int c = labels[static_cast<std::size_t>(i)];
      sums.row(c) += points.row(i);
      ++counts[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      }
    }
    return counts;
  };

  std::vector<int> counts = recompute();
  bool reseeded = false;
  for (Eigen::Index c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] != 0) continue;
    Eigen::Index far = -1;
    double far_dist = -1.0;
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
      const int owner = labels[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(owner)] < 2) continue;
      const double dist = (points.row(i) - centroids.row(owner)).squaredNorm();
      if (dist > far_dist) {
        far_dist = dist;
        far = i;
      }
    }
    if (far < 0) break;
    --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
    labels[static_cast<std::size_t>(far)] = static_cast<int>(c);
    counts[static_cast<std::size_t>(c)] = 1;
    centroids.row(c) = points.row(far);
    reseeded = true;
  }
  if (reseeded) recompute();
}

Eigen::MatrixXd plus_plus_init(const Eigen::MatrixXd& points, int k, Rng& rng) {
  const Eigen::Index m = points.rows();
  Eigen::MatrixXd centroids(k, points.cols());
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m))));
  Eigen::VectorXd nearest(m);
  for (Eigen::Index i = 0; i < m; ++i) nearest(i) = (points.row(i) - centroids.row(0)).squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = nearest.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      pick = m - 1;
      for (Eigen::Index i = 0; i < m; ++i) {
        target -= nearest(i);
        if (target < 0.0 && nearest(i) > 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m)));
    }
    centroids.row(c) = points.row(pick);
    for (Eigen::Index i = 0; i < m; ++i) {
      nearest(i) = std::min(nearest(i), (points.row(i) - centroids.row(c)).squaredNorm());
    }
  }
  return centroids;
}

LloydRun lloyd(const Eigen::MatrixXd& points, int k, Rng& rng, int max_iterations) {
  LloydRun run;
  run.centroids = plus_plus_init(points, k, rng);
  run.labels.assign(static_cast<std::size_t>(points.rows()), -1);
  assign(points, run.centroids, run.labels);
  for (int it = 0; it < max_iterations; ++it) {
    update(points, run.labels, run.centroids);
    run.trace.push_back(within_cluster_ss(points, run.labels, run.centroids));
    ++run.iterations;
    if (!assign(points, run.centroids, run.labels)) break;
  }
  return run;
}

}  // namespace

Eigen::MatrixXd normalize_rows(const Eigen::MatrixXd& points) {
  Eigen::MatrixXd out = points;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    const double norm = out.row(i).norm();
    if (norm == 0.0) {
      throw DegenerateInputError("row " + std::to_string(i) +
                                 " is zero and cannot be projected onto the sphere");
    }
    out.row(i) /= norm;
  }
  return out;
}

double within_cluster_ss(const Eigen::MatrixXd& points, std::span<const int> labels,
                         const Eigen::MatrixXd& centroids) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

ClusterAssignment kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t init_seed,
                         const KMeansOptions& options) {
  if (k < 1 || k > points.rows()) {
    throw ParameterError("k-means needs 1 <= k <= number of points (k=" + std::to_string(k) +
                         ", points=" + std::to_string(points.rows()) + ")");
  }
  const Eigen::MatrixXd data = options.spherical ? normalize_rows(points) : points;
  Rng base(init_seed);
  ClusterAssignment best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < std::max(1, options.restarts); ++r) {
    Rng rng = base.split(static_cast<std::uint64_t>(r));
    LloydRun run = lloyd(data, k, rng, options.max_iterations);
    const double objective = within_cluster_ss(data, run.labels, run.centroids);
    if (objective < best.objective) {
      best.labels = std::move(run.labels);
      best.centroids = std::move(run.centroids);
      best.objective = objective;
      best.objective_trace = std::move(run.trace);
      best.iterations = run.iterations;
    }
  }
  return best;
}

void co_cluster_seeds(ClusterAssignment& assignment, int n1, const SeedSet& seeds) {
  for (auto [u, v] : seeds.pairs) {
    const auto row2 = static_cast<std::size_t>(n1 + v);
    if (u >= n1 || row2 >= assignment.labels.size()) {
      throw ParameterError("seed outside the stacked assignment");
    }
    assignment.labels[static_cast<std::size_t>(u)] = assignment.labels[row2];
  }
}

std::vector<int> resized_cluster_sizes(std::span<const int> combined_sorted, int n) {
  long long total = 0;
  for (int c : combined_sorted) total += (c + 1) / 2;
  std::vector<int> out;
  out.reserve(combined_sorted.size());
  for (std::size_t i = 0; i < combined_sorted.size(); ++i) {
    const int c = combined_sorted[i];
    const bool shrink = total >= static_cast<long long>(i + 1) + n;
    out.push_back(2 * ((c + 1) / 2) - (shrink ? 2 : 0));
  }
  return out;
}

ResolvedClusters resolve_cluster_sizes(const ClusterAssignment& assignment,
                                       const Eigen::MatrixXd& points) {
  const auto total_points = static_cast<Eigen::Index>(assignment.labels.size());
  if (points.rows() != total_points || total_points % 2 != 0) {
    throw ParameterError("resolve_cluster_sizes needs 2n points matching the assignment");
  }
  const int n = static_cast<int>(total_points / 2);
  const int k = assignment.num_clusters();
  if (points.cols() != assignment.centroids.cols()) {
    throw ParameterError("points and centroids have different dimensions");
  }

  std::vector<int> combined(static_cast<std::size_t>(k), 0);
  for (int label : assignment.labels) {
    if (label < 0 || label >= k) throw ParameterError("cluster label out of range");
    ++combined[static_cast<std::size_t>(label)];
  }
  std::vector<int> order(static_cast<std::size_t>(k));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return combined[static_cast<std::size_t>(a)] > combined[static_cast<std::size_t>(b)];
  });
  std::vector<int> sorted_counts;
  for (int c : order) sorted_counts.push_back(combined[static_cast<std::size_t>(c)]);
  const std::vector<int> resized = resized_cluster_sizes(sorted_counts, n);

  std::vector<bool> taken(static_cast<std::size_t>(total_points), false);
  ResolvedClusters out;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const int half = resized[pos] / 2;
    if (half <= 0) continue;
    const int source = order[pos];
    ResolvedCluster cluster;
    cluster.source = source;
    for (int graph = 0; graph < 2; ++graph) {
      std::vector<std::pair<double, Vertex>> candidates;
      for (Vertex v = 0; v < n; ++v) {
        const Eigen::Index row = graph * n + v;
        if (taken[static_cast<std::size_t>(row)]) continue;
        candidates.emplace_back((points.row(row) - assignment.centroids.row(source)).squaredNorm(), v);
      }
      std::partial_sort(candidates.begin(), candidates.begin() + half, candidates.end());
      auto& members = graph == 0 ? cluster.members1 : cluster.members2;
      for (int i = 0; i < half; ++i) {
        const Vertex v = candidates[static_cast<std::size_t>(i)].second;
        members.push_back(v);
        taken[static_cast<std::size_t>(graph * n + v)] = true;
      }
      std::sort(members.begin(), members.end());
    }
    out.clusters.push_back(std::move(cluster));
  }
  return out;
}

double clustering_consistency(const ResolvedClusters& resolved, std::span<const Vertex> truth) {
  std::unordered_map<Vertex, std::size_t> cluster_of2;
  for (std::size_t c = 0; c < resolved.clusters.size(); ++c) {
    for (Vertex v : resolved.clusters[c].members2) cluster_of2[v] = c;
  }
  std::size_t total = 0;
  std::size_t agree = 0;
  for (std::size_t c = 0; c < resolved.clusters.size(); ++c) {
    for (Vertex u : resolved.clusters[c].members1) {
      if (u < 0 || static_cast<std::size_t>(u) >= truth.size()) {
        throw ParameterError("truth does not cover clustered vertex " + std::to_string(u));
      }
      ++total;
      auto it = cluster_of2.find(truth[static_cast<std::size_t>(u)]);
      if (it != cluster_of2.end() && it->second == c) ++agree;
    }
  }
  return total == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(total);
}

void write_cluster_csv(const ResolvedClusters& resolved, int graph, std::ostream& out) {
  std::vector<std::pair<Vertex, std::size_t>> rows;
  for (std::size_t c = 0; c < resolved.clusters.size(); ++c) {
    const auto& members = graph == 0 ? resolved.clusters[c].members1 : resolved.clusters[c].members2;
    for (Vertex v : members) rows.emplace_back(v, c);
  }
  std::sort(rows.begin(), rows.end());
  out << "vertex_id,cluster_id\n";
  for (auto [v, c] : rows) out << v << ',' << c << '\n';
}

}  // namespace lsgm
