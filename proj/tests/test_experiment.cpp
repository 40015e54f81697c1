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

#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "lsgm/errors.hpp"
#include "lsgm/experiment.hpp"
#include "test_util.hpp"

namespace lsgm {
namespace {

std::size_t count_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines;
}

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const char* kGenerator = R"({
  "K": 2, "block_sizes": [30, 30],
  "probability_matrix": [[0.6, 0.3], [0.3, 0.6]],
  "rho": 1.0, "rng_seed": 5, "seeds": 4
})";

TEST(GeneratorConfigTest, Parses) {
  const GeneratorConfig c = parse_generator_config(kGenerator);
  EXPECT_EQ(c.params.num_vertices(), 60);
  EXPECT_EQ(c.rho, 1.0);
  EXPECT_EQ(c.rng_seed, 5u);
  EXPECT_EQ(c.seeds, 4);
  EXPECT_FALSE(c.permute);
  const GeneratorConfig latent = parse_generator_config(
      R"({"block_sizes": [2, 3], "latent": [[0.7, 0.1], [0.2, 0.6]], "rho": 0.5})");
  EXPECT_NEAR(latent.params.block_probs(0, 0), 0.5, 1e-15);
}

TEST(GeneratorConfigTest, Errors) {
  EXPECT_THROW(parse_generator_config("{"), ParseError);
  EXPECT_THROW(parse_generator_config(R"({"block_sizes": [2]})"), ParseError);
  EXPECT_THROW(parse_generator_config(R"({"K": 3, "block_sizes": [2], "probability_matrix": [[0.5]]})"),
               ParameterError);
  EXPECT_THROW(parse_generator_config(R"({"block_sizes": "x", "probability_matrix": [[0.5]]})"), ParseError);
  EXPECT_THROW(load_generator_config("/nonexistent/gen.json"), ParseError);
}

TEST(GenerateFilesTest, FullCorrelationGivesIdenticalFiles) {
  const auto dir = testing::temp_dir("gen");
  const GeneratedFiles files = generate_files(parse_generator_config(kGenerator), dir);
  EXPECT_EQ(read_all(files.g1), read_all(files.g2));
  const SparseGraph g1 = load_edge_list(files.g1);
  EXPECT_EQ(count_lines(files.g1), g1.num_edges());
  const CorrelatedPair pair = generate_correlated_sbm(parse_generator_config(kGenerator).params, 1.0, 5);
  EXPECT_EQ(g1, pair.g1);
  EXPECT_EQ(load_truth(files.truth, 60), pair.truth);
  const SeedSet seeds = load_seeds(files.seeds);
  EXPECT_EQ(seeds.size(), 4u);
  for (auto [u, v] : seeds.pairs) EXPECT_EQ(u, v);
}

TEST(GenerateFilesTest, PermutedTruthIsConsistent) {
  GeneratorConfig c = parse_generator_config(kGenerator);
  c.permute = true;
  const auto dir = testing::temp_dir("gen_perm");
  const GeneratedFiles files = generate_files(c, dir);
  const SparseGraph g1 = load_edge_list(files.g1);
  const SparseGraph g2 = load_edge_list(files.g2);
  const Permutation truth = load_truth(files.truth, 60);
  EXPECT_EQ(apply_permutation(g1, truth), g2);
  for (auto [u, v] : load_seeds(files.seeds).pairs) EXPECT_EQ(truth[u], v);
  // Deterministic per rng_seed.
  const auto again = testing::temp_dir("gen_perm2");
  const GeneratedFiles files2 = generate_files(c, again);
  EXPECT_EQ(read_all(files.g2), read_all(files2.g2));
  EXPECT_EQ(read_all(files.seeds), read_all(files2.seeds));
}

TEST(LsgmJsonTest, AppliesKeys) {
  LsgmConfig c;
  apply_lsgm_json(R"({"d": 3, "k": "auto", "max_cluster_size": 50, "spherical": true,
                      "seed_budget": "all", "matcher": "brute_force", "workers": 2,
                      "recluster_depth": 1, "rng_seed": 9, "max_iterations": 12})",
                  c);
  EXPECT_EQ(c.d, 3);
  EXPECT_FALSE(c.k.has_value());
  EXPECT_EQ(c.max_cluster_size, 50);
  EXPECT_TRUE(c.spherical);
  EXPECT_EQ(c.seed_budget, kAllSeeds);
  EXPECT_EQ(c.matcher, MatcherKind::kBruteForce);
  EXPECT_EQ(c.workers, 2);
  EXPECT_EQ(c.recluster_depth, 1);
  EXPECT_EQ(c.rng_seed, 9u);
  EXPECT_EQ(c.sgm.max_iterations, 12);
  EXPECT_THROW(apply_lsgm_json(R"({"bogus": 1})", c), ParseError);
  EXPECT_THROW(apply_lsgm_json(R"({"matcher": "path"})", c), ParseError);
}

TEST(SeedPlanTest, LabelsAndDraws) {
  EXPECT_EQ(seed_plan_label(SeedPlan{7}), "7");
  EXPECT_EQ(seed_plan_label(SeedPlan{std::vector<int>{5, 5}}), "5+5");
  EXPECT_EQ(seed_plan_total(SeedPlan{std::vector<int>{5, 3}}), 8);
  const std::vector<int> block_of = {0, 0, 0, 1, 1, 1, 1};
  Rng rng(3);
  const auto drawn = draw_seed_vertices(SeedPlan{std::vector<int>{2, 3}}, block_of, 2, rng);
  ASSERT_EQ(drawn.size(), 5u);
  int first_block = 0;
  for (Vertex v : drawn) first_block += block_of[v] == 0;
  EXPECT_EQ(first_block, 2);
  EXPECT_THROW(draw_seed_vertices(SeedPlan{std::vector<int>{4, 0}}, block_of, 2, rng), ParameterError);
  EXPECT_THROW(draw_seed_vertices(SeedPlan{std::vector<int>{1}}, block_of, 2, rng), ParameterError);
  EXPECT_THROW(draw_seed_vertices(SeedPlan{8}, block_of, 2, rng), ParameterError);
}

TEST(ResultRowTest, RoundTrip) {
  ResultRow row{"grid:rho=0.6:s=5+5", 3, "ok", 0.6, 10, 400, 2, 2, 0.9925, 1.0,
                0.125, 0.0, 0.004, 0.5, 17, ""};
  const ResultRow back = parse_result_row(format_result_row(row));
  EXPECT_EQ(back, row);
  ResultRow err = row;
  err.status = "error";
  err.message = "bad, really\nbad";
  const ResultRow err_back = parse_result_row(format_result_row(err));
  EXPECT_EQ(err_back.message, "bad; really;bad");
  EXPECT_THROW(parse_result_row("a,b,c"), ParseError);
  EXPECT_EQ(std::string(kResultHeader).find("accuracy") != std::string::npos, true);
}

std::string small_spec(const std::string& output) {
  return R"({
    "id": "tiny",
    "sbm": {"block_sizes": [25, 25], "probability_matrix": [[0.6, 0.3], [0.3, 0.6]]},
    "rho": [0.5, 0.9],
    "seeds": [[3, 3], 4],
    "replicates": 2,
    "rng_seed": 11,
    "lsgm": {"d": 2, "k": 2},
    "output": ")" + output + R"("
  })";
}

TEST(ExperimentTest, RunsGridAndResumes) {
  const auto dir = testing::temp_dir("exp");
  const ExperimentSpec spec = parse_experiment_spec(small_spec("out/results.csv"), dir);
  EXPECT_EQ(spec.output, dir / "out/results.csv");
  const auto rows = run_experiment(spec);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "ok") << r.message;
    EXPECT_GE(r.accuracy, 0.0);
    EXPECT_LE(r.accuracy, 1.0);
    EXPECT_GE(r.embed_seconds, 0.0);
    EXPECT_EQ(r.n, 50);
  }
  const std::string first = read_all(spec.output);
  const auto parsed = read_results(spec.output);
  ASSERT_EQ(parsed.size(), 8u);
  EXPECT_EQ(count_lines(spec.output), 9u);

  EXPECT_TRUE(run_experiment(spec).empty());
  EXPECT_EQ(read_all(spec.output), first);

  // Remove the last row: only it is recomputed, identically.
  std::string truncated = first.substr(0, first.rfind('\n', first.size() - 2) + 1);
  {
    std::ofstream out(spec.output, std::ios::binary | std::ios::trunc);
    out << truncated;
  }
  const auto redo = run_experiment(spec);
  ASSERT_EQ(redo.size(), 1u);
  EXPECT_EQ(redo[0].accuracy, parsed.back().accuracy);
}

TEST(ExperimentTest, FailuresBecomeErrorRows) {
  const auto dir = testing::temp_dir("exp_err");
  std::string text = small_spec("results.csv");
  text.replace(text.find("\"d\": 2"), 6, "\"d\": 40");
  const ExperimentSpec spec = parse_experiment_spec(text, dir);
  const auto rows = run_experiment(spec);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.status, "error");
    EXPECT_FALSE(r.message.empty());
  }
}

TEST(ExperimentTest, EmptyGridIsRejected) {
  std::string text = small_spec("x.csv");
  text.replace(text.find("[0.5, 0.9]"), 10, "[]");
  EXPECT_THROW(parse_experiment_spec(text), ParameterError);
  std::string no_reps = small_spec("x.csv");
  no_reps.replace(no_reps.find("\"replicates\": 2"), 15, "\"replicates\": 0");
  EXPECT_THROW(parse_experiment_spec(no_reps), ParameterError);
}

}  // namespace
}  // namespace lsgm
