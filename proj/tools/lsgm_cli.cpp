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

// Command-line harness: generate, match, experiment.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lsgm/errors.hpp"
#include "lsgm/experiment.hpp"
#include "lsgm/pipeline.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNumerical = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lsgm::ParseError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw lsgm::Error("cannot write " + path);
  return out;
}

struct MatchArgs {
  std::string g1, g2, seeds, truth, config, out, summary;
  std::string embeddings, clusters;
  int d = 0, k = 0, max_cluster_size = 0, workers = 0;
  std::string seed_budget, matcher;
  std::uint64_t rng_seed = 0;
  bool spherical = false;
};

int run_match(const MatchArgs& args, const CLI::App& cmd) {
  lsgm::LsgmConfig config;
  if (!args.config.empty()) lsgm::apply_lsgm_json(slurp(args.config), config);
  if (cmd.count("--d")) config.d = args.d;
  if (cmd.count("--k")) config.k = args.k;
  if (cmd.count("--max-cluster-size")) config.max_cluster_size = args.max_cluster_size;
  if (cmd.count("--spherical")) config.spherical = true;
  if (cmd.count("--workers")) config.workers = args.workers;
  if (cmd.count("--rng-seed")) config.rng_seed = args.rng_seed;
  if (cmd.count("--seed-budget")) {
    if (args.seed_budget == "all") {
      config.seed_budget = lsgm::kAllSeeds;
    } else {
      try {
        config.seed_budget = std::stoi(args.seed_budget);
      } catch (const std::logic_error&) {
        throw lsgm::ParseError("--seed-budget expects an integer or 'all'");
      }
    }
  }
  if (cmd.count("--matcher")) {
    config.matcher = args.matcher == "brute_force" ? lsgm::MatcherKind::kBruteForce : lsgm::MatcherKind::kSgm;
  }
  config.keep_embeddings = !args.embeddings.empty();

  const lsgm::SparseGraph a = lsgm::load_edge_list(args.g1);
  const lsgm::SparseGraph b = lsgm::load_edge_list(args.g2);
  const lsgm::SeedSet seeds = lsgm::load_seeds(args.seeds);
  lsgm::Permutation truth;
  if (!args.truth.empty()) truth = lsgm::load_truth(args.truth, a.num_vertices());

  const lsgm::LsgmResult result = lsgm::lsgm(a, b, seeds, config, truth);
  for (const auto& warning : result.warnings) std::cerr << "warning: " << warning << '\n';

  if (args.out.empty() || args.out == "-") {
    lsgm::write_matching_tsv(result.matching, std::cout);
  } else {
    auto out = open_output(args.out);
    lsgm::write_matching_tsv(result.matching, out);
  }
  if (!args.embeddings.empty()) {
    auto x = open_output(args.embeddings + "_g1.csv");
    lsgm::write_matrix_csv(*result.aligned_x, x);
    auto y = open_output(args.embeddings + "_g2.csv");
    lsgm::write_matrix_csv(result.yhat->coords, y);
  }
  if (!args.clusters.empty()) {
    auto c1 = open_output(args.clusters + "_g1.csv");
    lsgm::write_cluster_csv(result.clusters, 0, c1);
    auto c2 = open_output(args.clusters + "_g2.csv");
    lsgm::write_cluster_csv(result.clusters, 1, c2);
  }

  std::ostringstream summary;
  summary << "n1=" << a.num_vertices() << " n2=" << b.num_vertices() << " seeds=" << seeds.size()
          << " d=" << result.d << " k=" << result.k << " clusters=" << result.clusters.clusters.size()
          << " iterations=" << result.matching.iterations;
  char buf[64];
  if (result.accuracy) {
    std::snprintf(buf, sizeof(buf), " accuracy=%.6f", *result.accuracy);
    summary << buf;
  }
  if (result.consistency) {
    std::snprintf(buf, sizeof(buf), " consistency=%.6f", *result.consistency);
    summary << buf;
  }
  std::snprintf(buf, sizeof(buf), " time=%.3f/%.3f/%.3f/%.3f", result.times.embed, result.times.procrustes,
                result.times.cluster, result.times.match);
  summary << buf;
  (args.out.empty() || args.out == "-" ? std::cerr : std::cout) << summary.str() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Large-scale seeded graph matching"};
  app.require_subcommand(1);

  std::string gen_config, gen_out = ".";
  auto* generate = app.add_subcommand("generate", "Sample a correlated SBM pair to edge-list files");
  generate->add_option("config", gen_config, "Generator JSON")->required();
  generate->add_option("-o,--out", gen_out, "Output directory");

  MatchArgs match_args;
  auto* match = app.add_subcommand("match", "Match two graphs from seed correspondences");
  match->add_option("g1", match_args.g1, "Graph 1 edge list")->required();
  match->add_option("g2", match_args.g2, "Graph 2 edge list")->required();
  match->add_option("seeds", match_args.seeds, "Seed pairs TSV")->required();
  match->add_option("--truth", match_args.truth, "Ground-truth TSV for accuracy");
  match->add_option("--config", match_args.config, "LSGM config JSON");
  match->add_option("-o,--out", match_args.out, "Matching TSV (default stdout)");
  match->add_option("--d", match_args.d, "Embedding dimension")->check(CLI::PositiveNumber);
  match->add_option("--k", match_args.k, "Cluster count")->check(CLI::PositiveNumber);
  match->add_option("--max-cluster-size", match_args.max_cluster_size)->check(CLI::PositiveNumber);
  match->add_flag("--spherical", match_args.spherical, "Cluster row-normalized embeddings");
  match->add_option("--workers", match_args.workers)->check(CLI::PositiveNumber);
  match->add_option("--seed-budget", match_args.seed_budget, "Seeds per cluster, or 'all'");
  match->add_option("--matcher", match_args.matcher)->check(CLI::IsMember({"sgm", "brute_force"}));
  match->add_option("--rng-seed", match_args.rng_seed);
  match->add_option("--export-embeddings", match_args.embeddings, "Write <prefix>_g{1,2}.csv");
  match->add_option("--export-clusters", match_args.clusters, "Write <prefix>_g{1,2}.csv");

  std::string spec_path;
  auto* experiment = app.add_subcommand("experiment", "Run an experiment grid, appending CSV rows");
  experiment->add_option("spec", spec_path, "Experiment JSON")->required();
  bool quiet = false;
  experiment->add_flag("-q,--quiet", quiet, "Do not echo rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  try {
    if (*generate) {
      const auto files = lsgm::generate_files(lsgm::load_generator_config(gen_config), gen_out);
      std::cout << files.g1.string() << '\n' << files.g2.string() << '\n'
                << files.truth.string() << '\n' << files.seeds.string() << '\n';
    } else if (*match) {
      return run_match(match_args, *match);
    } else if (*experiment) {
      const auto spec = lsgm::load_experiment_spec(spec_path);
      const auto rows = lsgm::run_experiment(spec, quiet ? nullptr : &std::cout);
      std::cerr << rows.size() << " rows appended to " << spec.output.string() << '\n';
    }
  } catch (const lsgm::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }
  return 0;
}
