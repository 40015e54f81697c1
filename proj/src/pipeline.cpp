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

#include "lsgm/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "lsgm/errors.hpp"
#include "lsgm/rng.hpp"
#include "lsgm/seedsel.hpp"

namespace lsgm {

void LsgmConfig::validate() const {
  if (d && *d < 1) throw ParameterError("embedding dimension must be positive");
  if (k && *k < 1) throw ParameterError("cluster count must be positive");
  if (max_cluster_size < 2) throw ParameterError("max_cluster_size must be at least 2");
  if (seed_budget && *seed_budget < 0) throw ParameterError("seed budget must be nonnegative");
  if (workers < 1) throw ParameterError("worker count must be positive");
  if (recluster_depth < 0) throw ParameterError("recluster_depth must be nonnegative");
  if (kmeans_restarts < 1) throw ParameterError("k-means restarts must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int ceil_div(std::size_t a, int b) {
  return static_cast<int>((a + static_cast<std::size_t>(b) - 1) / static_cast<std::size_t>(b));
}

// A final cluster in global vertex ids, plus bookkeeping.
struct FinalCluster {
  ResolvedCluster members;
  int depth = 0;
  bool oversized = false;
};

struct DivideContext {
  const LsgmConfig& config;
  LsgmResult& result;
  std::uint64_t next_stream = 0;
};

std::vector<Vertex> compose(std::span<const Vertex> outer, std::span<const Vertex> inner) {
  std::vector<Vertex> out;
  out.reserve(inner.size());
  for (Vertex v : inner) out.push_back(outer[static_cast<std::size_t>(v)]);
  return out;
}

std::vector<Vertex> unseeded_vertices(int n, const std::vector<Vertex>& seed_side) {
  std::vector<bool> is_seed(static_cast<std::size_t>(n), false);
  for (Vertex v : seed_side) is_seed[static_cast<std::size_t>(v)] = true;
  std::vector<Vertex> out;
  for (Vertex v = 0; v < n; ++v) {
    if (!is_seed[static_cast<std::size_t>(v)]) out.push_back(v);
  }
  return out;
}

// Embeds, aligns and clusters (a, b), whose vertex v maps to global ids
// map1[v] / map2[v]. Appends the final clusters (global ids) to `out`,
// recursing into oversized clusters while depth allows.
void divide(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
            std::span<const Vertex> map1, std::span<const Vertex> map2, int k, int depth,
            DivideContext& ctx, std::vector<FinalCluster>& out) {
  const LsgmConfig& config = ctx.config;
  LsgmResult& result = ctx.result;
  const int n1 = a.num_vertices();
  const int n2 = b.num_vertices();
  const int d = depth == 0 ? result.d : std::min({result.d, n1, n2});

  auto start = Clock::now();
  Embedding xhat = spectral_embed(a, d, config.eigen);
  Embedding yhat = spectral_embed(b, d, config.eigen);
  result.times.embed += seconds_since(start);

  start = Clock::now();
  AlignedEmbedding aligned = align_embeddings(xhat, yhat, seeds);
  result.times.procrustes += seconds_since(start);

  start = Clock::now();
  Eigen::MatrixXd stacked(n1 + n2, d);
  stacked.topRows(n1) = aligned.aligned_x;
  stacked.bottomRows(n2) = yhat.coords;
  if (config.spherical) stacked = normalize_rows(stacked);
  KMeansOptions km_options;
  km_options.restarts = config.kmeans_restarts;
  const std::uint64_t stream = ctx.next_stream++;
  ClusterAssignment assignment =
      kmeans(stacked, std::min<int>(k, n1 + n2), derive_seed(config.rng_seed, stream), km_options);
  co_cluster_seeds(assignment, n1, seeds);

  const std::vector<Vertex> free1 = unseeded_vertices(n1, seeds.first());
  const std::vector<Vertex> free2 = unseeded_vertices(n2, seeds.second());

  std::vector<ResolvedCluster> local;
  if (config.bijective) {
    const auto m = static_cast<Eigen::Index>(free1.size());
    ClusterAssignment unseeded;
    unseeded.centroids = assignment.centroids;
    Eigen::MatrixXd points(2 * m, d);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Vertex u = free1[static_cast<std::size_t>(i)];
      const Vertex v = free2[static_cast<std::size_t>(i)];
      points.row(i) = stacked.row(u);
      points.row(m + i) = stacked.row(n1 + v);
    }
    unseeded.labels.resize(static_cast<std::size_t>(2 * m));
    for (Eigen::Index i = 0; i < m; ++i) {
      unseeded.labels[static_cast<std::size_t>(i)] =
          assignment.labels[static_cast<std::size_t>(free1[static_cast<std::size_t>(i)])];
      unseeded.labels[static_cast<std::size_t>(m + i)] =
          assignment.labels[static_cast<std::size_t>(n1 + free2[static_cast<std::size_t>(i)])];
    }
    ResolvedClusters resolved = resolve_cluster_sizes(unseeded, points);
    for (auto& cluster : resolved.clusters) {
      cluster.members1 = compose(free1, cluster.members1);
      cluster.members2 = compose(free2, cluster.members2);
      local.push_back(std::move(cluster));
    }
  } else {
    local.resize(static_cast<std::size_t>(assignment.num_clusters()));
    for (std::size_t c = 0; c < local.size(); ++c) local[c].source = static_cast<int>(c);
    for (Vertex u : free1) {
      local[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(u)])].members1.push_back(u);
    }
    for (Vertex v : free2) {
      local[static_cast<std::size_t>(assignment.labels[static_cast<std::size_t>(n1 + v)])].members2.push_back(v);
    }
    std::erase_if(local, [](const ResolvedCluster& c) { return c.size() == 0; });
  }
  result.times.cluster += seconds_since(start);

  if (depth == 0) {
    result.k = assignment.num_clusters();
    if (config.keep_embeddings) {
      result.xhat = std::move(xhat);
      result.yhat = std::move(yhat);
      result.aligned_x = std::move(aligned.aligned_x);
    }
  }

  for (std::size_t c = 0; c < local.size(); ++c) {
    ResolvedCluster& cluster = local[c];
    const std::size_t size = std::max(cluster.members1.size(), cluster.members2.size());
    const bool oversized = size > static_cast<std::size_t>(config.max_cluster_size);
    if (oversized && config.bijective && depth < config.recluster_depth) {
      // Seed-bordered submatrices: seeds first, then the cluster members.
      std::vector<Vertex> order1 = seeds.first();
      std::vector<Vertex> order2 = seeds.second();
      order1.insert(order1.end(), cluster.members1.begin(), cluster.members1.end());
      order2.insert(order2.end(), cluster.members2.begin(), cluster.members2.end());
      SeedSet local_seeds;
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        local_seeds.pairs.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i));
      }
      std::vector<FinalCluster> refined;
      try {
        divide(a.induced_subgraph(order1), b.induced_subgraph(order2), local_seeds,
               compose(map1, order1), compose(map2, order2),
               ceil_div(size, config.max_cluster_size), depth + 1, ctx, refined);
      } catch (const Error& e) {
        result.warnings.push_back("re-clustering a cluster of size " + std::to_string(size) +
                                  " at depth " + std::to_string(depth) + " failed: " + e.what());
        refined.clear();
      }
      if (!refined.empty()) {
        for (auto& r : refined) out.push_back(std::move(r));
        continue;
      }
    }
    FinalCluster final_cluster;
    final_cluster.members.source = cluster.source;
    final_cluster.members.members1 = compose(map1, cluster.members1);
    final_cluster.members.members2 = compose(map2, cluster.members2);
    final_cluster.depth = depth;
    final_cluster.oversized = oversized;
    if (oversized) {
      result.warnings.push_back("cluster of size " + std::to_string(size) + " exceeds max_cluster_size " +
                                std::to_string(config.max_cluster_size) + " after " +
                                std::to_string(depth) + " re-clustering rounds; matching it whole");
    }
    out.push_back(std::move(final_cluster));
  }
}

struct TaskOutput {
  std::vector<std::pair<Vertex, Vertex>> pairs;  // global (g1, g2), g2 may be kUnmatched
  ClusterRecord record;
};

TaskOutput match_cluster(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
                         const FinalCluster& cluster, const LsgmConfig& config) {
  const auto start = Clock::now();
  const ResolvedCluster& members = cluster.members;
  const int s = static_cast<int>(seeds.size());
  const int budget = std::min(s, config.seed_budget.value_or(std::min(s, config.max_cluster_size / 4)));

  SeedSet used = seeds;
  if (budget < s) {
    if (members.members1.empty() || members.members2.empty()) {
      used.pairs.clear();
    } else {
      used = select_seeds(a, b, seeds, members.members1, members.members2, budget).seeds;
    }
  }

  std::vector<Vertex> order1 = used.first();
  std::vector<Vertex> order2 = used.second();
  order1.insert(order1.end(), members.members1.begin(), members.members1.end());
  order2.insert(order2.end(), members.members2.begin(), members.members2.end());
  const SparseGraph sa = a.induced_subgraph(order1);
  const SparseGraph sb = b.induced_subgraph(order2);
  SeedSet local_seeds;
  for (std::size_t i = 0; i < used.size(); ++i) {
    local_seeds.pairs.emplace_back(static_cast<Vertex>(i), static_cast<Vertex>(i));
  }

  Matching local;
  if (!config.bijective || sa.num_vertices() != sb.num_vertices()) {
    local = pad_and_match(sa, sb, local_seeds, config.sgm);
  } else if (config.matcher == MatcherKind::kBruteForce) {
    local = brute_force_match(sa, sb, local_seeds);
  } else {
    local = sgm_match(sa, sb, local_seeds, config.sgm);
  }

  TaskOutput out;
  for (std::size_t i = used.size(); i < order1.size(); ++i) {
    const Vertex v = local.alignment[i];
    out.pairs.emplace_back(order1[i], v == kUnmatched ? kUnmatched : order2[static_cast<std::size_t>(v)]);
  }
  out.record.depth = cluster.depth;
  out.record.size1 = members.members1.size();
  out.record.size2 = members.members2.size();
  out.record.seeds_used = static_cast<int>(used.size());
  out.record.iterations = local.iterations;
  out.record.disagreements = local.objective;
  out.record.oversized = cluster.oversized;
  out.record.match_seconds = seconds_since(start);
  return out;
}

}  // namespace

int choose_dimension(const SparseGraph& g, const EigenOptions& options) {
  const int n = g.num_vertices();
  const int trial = std::min({static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))), 50, n});
  if (trial < 3) return 1;
  const Eigen::VectorXd spectrum = leading_spectrum(g, trial, options);
  const std::vector<double> values(spectrum.data(), spectrum.data() + spectrum.size());
  return estimate_dimension(values).dim;
}

double accuracy(const Matching& matching, std::span<const Vertex> truth, const SeedSet& seeds) {
  std::vector<bool> is_seed(matching.alignment.size(), false);
  for (auto [u, v] : seeds.pairs) {
    if (u >= 0 && static_cast<std::size_t>(u) < is_seed.size()) is_seed[static_cast<std::size_t>(u)] = true;
  }
  std::size_t total = 0;
  std::size_t correct = 0;
  for (std::size_t v = 0; v < matching.alignment.size(); ++v) {
    if (is_seed[v]) continue;
    if (v >= truth.size()) throw ParameterError("truth does not cover every unseeded vertex");
    ++total;
    if (matching.alignment[v] == truth[v]) ++correct;
  }
  return total == 0 ? 1.0 : static_cast<double>(correct) / static_cast<double>(total);
}

LsgmResult lsgm(const SparseGraph& a, const SparseGraph& b, const SeedSet& seeds,
                const LsgmConfig& config, std::span<const Vertex> truth) {
  config.validate();
  if (config.bijective && a.num_vertices() != b.num_vertices()) {
    throw ParameterError("bijective matching needs graphs of equal order (" +
                         std::to_string(a.num_vertices()) + " vs " +
                         std::to_string(b.num_vertices()) + ")");
  }
  if (seeds.empty()) {
    throw SeedlessAlignmentError("LSGM needs at least one seed pair to align the embeddings");
  }
  seeds.validate(a.num_vertices(), b.num_vertices());

  LsgmResult result;
  auto start = Clock::now();
  result.d = config.d ? *config.d
                      : std::max(choose_dimension(a, config.eigen), choose_dimension(b, config.eigen));
  result.times.embed += seconds_since(start);
  const int k = config.k ? *config.k : ceil_div(static_cast<std::size_t>(a.num_vertices()), config.max_cluster_size);

  std::vector<Vertex> identity1(static_cast<std::size_t>(a.num_vertices()));
  std::vector<Vertex> identity2(static_cast<std::size_t>(b.num_vertices()));
  std::iota(identity1.begin(), identity1.end(), 0);
  std::iota(identity2.begin(), identity2.end(), 0);

  DivideContext ctx{config, result};
  std::vector<FinalCluster> clusters;
  divide(a, b, seeds, identity1, identity2, k, 0, ctx, clusters);

  start = Clock::now();
  std::vector<TaskOutput> outputs(clusters.size());
  std::vector<std::size_t> schedule(clusters.size());
  std::iota(schedule.begin(), schedule.end(), std::size_t{0});
  std::stable_sort(schedule.begin(), schedule.end(), [&](std::size_t x, std::size_t y) {
    return clusters[x].members.size() > clusters[y].members.size();
  });
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(clusters.size());
  auto worker = [&] {
    for (std::size_t t = next.fetch_add(1); t < schedule.size(); t = next.fetch_add(1)) {
      const std::size_t c = schedule[t];
      try {
        outputs[c] = match_cluster(a, b, seeds, clusters[c], config);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(config.workers, static_cast<int>(std::max<std::size_t>(1, clusters.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (std::size_t c = 0; c < errors.size(); ++c) {
    if (!errors[c]) continue;
    try {
      std::rethrow_exception(errors[c]);
    } catch (const ParameterError& e) {
      throw ParameterError("cluster " + std::to_string(c) + ": " + e.what());
    } catch (const NumericalError& e) {
      throw NumericalError("cluster " + std::to_string(c) + ": " + e.what());
    } catch (const Error& e) {
      throw Error("cluster " + std::to_string(c) + ": " + e.what());
    }
  }
  result.times.match = seconds_since(start);

  Matching& matching = result.matching;
  matching.alignment.assign(static_cast<std::size_t>(a.num_vertices()), kUnmatched);
  matching.seeded.assign(static_cast<std::size_t>(a.num_vertices()), false);
  matching.num_vertices2 = b.num_vertices();
  for (auto [u, v] : seeds.pairs) {
    matching.alignment[static_cast<std::size_t>(u)] = v;
    matching.seeded[static_cast<std::size_t>(u)] = true;
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (auto [u, v] : outputs[c].pairs) matching.alignment[static_cast<std::size_t>(u)] = v;
    matching.iterations += outputs[c].record.iterations;
    result.records.push_back(outputs[c].record);
    result.clusters.clusters.push_back(std::move(clusters[c].members));
  }
  matching.objective = matched_disagreements(a, b, matching.alignment);

  if (!truth.empty()) {
    result.accuracy = lsgm::accuracy(matching, truth, seeds);
    result.consistency = clustering_consistency(result.clusters, truth);
  }
  return result;
}

}  // namespace lsgm
