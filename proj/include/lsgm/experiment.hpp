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
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "lsgm/graph.hpp"
#include "lsgm/pipeline.hpp"
#include "lsgm/rng.hpp"
#include "lsgm/seeds.hpp"

namespace lsgm {

// Seed count drawn uniformly over all vertices, or a per-block count vector.
using SeedPlan = std::variant<int, std::vector<int>>;

std::string seed_plan_label(const SeedPlan& plan);
int seed_plan_total(const SeedPlan& plan);

// Draws seed vertices (graph-1 ids) according to the plan.
std::vector<Vertex> draw_seed_vertices(const SeedPlan& plan, std::span<const int> block_of,
                                       int num_blocks, Rng& rng);

// Generator configuration read from JSON. Keys: K (optional check),
// block_sizes, latent | probability_matrix, rho, rng_seed, and for file
// generation optionally seeds (count) and permute (bool).
struct GeneratorConfig {
  SbmParams params;
  double rho = 0.0;
  std::uint64_t rng_seed = 0;
  int seeds = 0;
  bool permute = false;
};

GeneratorConfig parse_generator_config(const std::string& json_text);
GeneratorConfig load_generator_config(const std::filesystem::path& path);

// Applies the JSON keys d, k, max_cluster_size, spherical, seed_budget,
// matcher, workers, recluster_depth, rng_seed, bijective, max_iterations on
// top of `config`. d and seed_budget accept "auto" / "all".
void apply_lsgm_json(const std::string& json_text, LsgmConfig& config);

// Files written by generate_files: g1.edges, g2.edges, truth.tsv, seeds.tsv.
struct GeneratedFiles {
  std::filesystem::path g1;
  std::filesystem::path g2;
  std::filesystem::path truth;
  std::filesystem::path seeds;
};

// Generates a correlated pair (g2 optionally relabeled by a random
// permutation) and writes it out; deterministic in config.rng_seed.
GeneratedFiles generate_files(const GeneratorConfig& config, const std::filesystem::path& dir);

// One generated-and-matched replicate.
struct ReplicateOutcome {
  LsgmResult result;
  SeedSet seeds;
  Permutation truth;
  int n = 0;
};

// Samples a correlated SBM pair from `graph_seed`, hides the alignment
// behind a random relabeling of graph 2, draws seeds, and runs LSGM.
ReplicateOutcome run_replicate(const SbmParams& params, double rho, const SeedPlan& plan,
                               const LsgmConfig& config, std::uint64_t graph_seed,
                               std::uint64_t seed_stream);

struct ExperimentSpec {
  std::string id;
  SbmParams params;
  std::vector<double> rhos;
  std::vector<SeedPlan> seed_plans;
  int replicates = 1;
  std::uint64_t rng_seed = 0;
  LsgmConfig config;
  std::filesystem::path output;

  void validate() const;
};

// JSON keys: id, sbm (generator keys), rho (list), seeds (list of counts or
// per-block vectors), replicates, rng_seed, lsgm (config keys), output.
// Relative output paths resolve against `base_dir`.
ExperimentSpec parse_experiment_spec(const std::string& json_text,
                                     const std::filesystem::path& base_dir = {});
ExperimentSpec load_experiment_spec(const std::filesystem::path& path);

struct ResultRow {
  std::string experiment_id;
  int replicate = 0;
  std::string status;  // "ok" or "error"
  double rho = 0.0;
  int s = 0;
  int n = 0;
  int k = 0;
  int d = 0;
  double accuracy = 0.0;
  double consistency = 0.0;
  double embed_seconds = 0.0;
  double procrustes_seconds = 0.0;
  double cluster_seconds = 0.0;
  double match_seconds = 0.0;
  long long iterations = 0;
  std::string message;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

extern const char* const kResultHeader;

std::string format_result_row(const ResultRow& row);
ResultRow parse_result_row(const std::string& line);
std::vector<ResultRow> read_results(const std::filesystem::path& path);

// Runs the full grid, appending one row per (rho, seeds, replicate) to
// spec.output. Rows already present (same experiment id and replicate)
// are skipped, so re-running a finished spec is a no-op. Returns the rows
// produced by this call.
std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, std::ostream* log = nullptr);

// Experiment id of one grid cell, e.g. "two_block:rho=0.6:s=5+5".
std::string cell_id(const ExperimentSpec& spec, double rho, const SeedPlan& plan);

}  // namespace lsgm
