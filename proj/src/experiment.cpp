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

#include "lsgm/experiment.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "lsgm/errors.hpp"

namespace lsgm {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("key '") + key + "': " + e.what());
  }
}

Eigen::MatrixXd matrix_from_json(const json& j, const char* key) {
  const auto rows = get_as<std::vector<std::vector<double>>>(j, key);
  if (rows.empty()) throw ParseError(std::string("key '") + key + "' is empty");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size()) throw ParseError(std::string("key '") + key + "' is ragged");
    for (std::size_t c = 0; c < rows[i].size(); ++c) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
    }
  }
  return m;
}

SbmParams sbm_from_json(const json& j) {
  auto sizes = get_as<std::vector<int>>(j, "block_sizes");
  if (j.contains("K") && get_as<int>(j, "K") != static_cast<int>(sizes.size())) {
    throw ParameterError("K does not match the number of block sizes");
  }
  if (j.contains("latent")) return SbmParams::from_latent(std::move(sizes), matrix_from_json(j, "latent"));
  if (j.contains("probability_matrix")) {
    return SbmParams::from_probabilities(std::move(sizes), matrix_from_json(j, "probability_matrix"));
  }
  throw ParseError("SBM config needs 'latent' or 'probability_matrix'");
}

void apply_lsgm(const json& j, LsgmConfig& config) {
  for (const auto& [key, value] : j.items()) {
    if (key == "d") {
      if (value.is_string() && value.get<std::string>() == "auto") {
        config.d.reset();
      } else {
        config.d = get_as<int>(j, "d");
      }
    } else if (key == "k") {
      if (value.is_string() && value.get<std::string>() == "auto") {
        config.k.reset();
      } else {
        config.k = get_as<int>(j, "k");
      }
    } else if (key == "max_cluster_size") {
      config.max_cluster_size = get_as<int>(j, "max_cluster_size");
    } else if (key == "spherical") {
      config.spherical = get_as<bool>(j, "spherical");
    } else if (key == "seed_budget") {
      if (value.is_string() && value.get<std::string>() == "all") {
        config.seed_budget = kAllSeeds;
      } else if (value.is_string() && value.get<std::string>() == "auto") {
        config.seed_budget.reset();
      } else {
        config.seed_budget = get_as<int>(j, "seed_budget");
      }
    } else if (key == "matcher") {
      const auto name = get_as<std::string>(j, "matcher");
      if (name == "sgm") {
        config.matcher = MatcherKind::kSgm;
      } else if (name == "brute_force") {
        config.matcher = MatcherKind::kBruteForce;
      } else {
        throw ParseError("unknown matcher '" + name + "'");
      }
    } else if (key == "workers") {
      config.workers = get_as<int>(j, "workers");
    } else if (key == "recluster_depth") {
      config.recluster_depth = get_as<int>(j, "recluster_depth");
    } else if (key == "rng_seed") {
      config.rng_seed = get_as<std::uint64_t>(j, "rng_seed");
    } else if (key == "bijective") {
      config.bijective = get_as<bool>(j, "bijective");
    } else if (key == "max_iterations") {
      config.sgm.max_iterations = get_as<int>(j, "max_iterations");
    } else {
      throw ParseError("unknown LSGM config key '" + key + "'");
    }
  }
}

std::string format_double(double x, int precision) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << x;
  return out.str();
}

std::string sanitize(std::string text) {
  for (char& c : text) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return text;
}

}  // namespace

std::string seed_plan_label(const SeedPlan& plan) {
  if (const int* count = std::get_if<int>(&plan)) return std::to_string(*count);
  std::string out;
  for (int c : std::get<std::vector<int>>(plan)) {
    if (!out.empty()) out += '+';
    out += std::to_string(c);
  }
  return out;
}

int seed_plan_total(const SeedPlan& plan) {
  if (const int* count = std::get_if<int>(&plan)) return *count;
  int total = 0;
  for (int c : std::get<std::vector<int>>(plan)) total += c;
  return total;
}

std::vector<Vertex> draw_seed_vertices(const SeedPlan& plan, std::span<const int> block_of,
                                       int num_blocks, Rng& rng) {
  const int n = static_cast<int>(block_of.size());
  if (const int* count = std::get_if<int>(&plan)) {
    if (*count < 0 || *count > n) throw ParameterError("seed count out of range");
    auto picks = rng.sample_without_replacement(n, *count);
    return {picks.begin(), picks.end()};
  }
  const auto& per_block = std::get<std::vector<int>>(plan);
  if (static_cast<int>(per_block.size()) != num_blocks) {
    throw ParameterError("per-block seed counts need one entry per block");
  }
  std::vector<std::vector<Vertex>> members(static_cast<std::size_t>(num_blocks));
  for (int v = 0; v < n; ++v) members[static_cast<std::size_t>(block_of[static_cast<std::size_t>(v)])].push_back(v);
  std::vector<Vertex> out;
  for (int b = 0; b < num_blocks; ++b) {
    const auto& pool = members[static_cast<std::size_t>(b)];
    const int want = per_block[static_cast<std::size_t>(b)];
    if (want < 0 || want > static_cast<int>(pool.size())) {
      throw ParameterError("block " + std::to_string(b) + " cannot supply " + std::to_string(want) + " seeds");
    }
    for (int idx : rng.sample_without_replacement(static_cast<int>(pool.size()), want)) {
      out.push_back(pool[static_cast<std::size_t>(idx)]);
    }
  }
  return out;
}

GeneratorConfig parse_generator_config(const std::string& json_text) {
  const json j = parse_json(json_text);
  GeneratorConfig out;
  out.params = sbm_from_json(j);
  out.rho = j.contains("rho") ? get_as<double>(j, "rho") : 0.0;
  out.rng_seed = j.contains("rng_seed") ? get_as<std::uint64_t>(j, "rng_seed") : 0;
  out.seeds = j.contains("seeds") ? get_as<int>(j, "seeds") : 0;
  out.permute = j.contains("permute") ? get_as<bool>(j, "permute") : false;
  if (out.seeds < 0 || out.seeds > out.params.num_vertices()) {
    throw ParameterError("seed count out of range");
  }
  return out;
}

GeneratorConfig load_generator_config(const std::filesystem::path& path) {
  return parse_generator_config(read_file(path));
}

void apply_lsgm_json(const std::string& json_text, LsgmConfig& config) {
  apply_lsgm(parse_json(json_text), config);
}

GeneratedFiles generate_files(const GeneratorConfig& config, const std::filesystem::path& dir) {
  CorrelatedPair pair = generate_correlated_sbm(config.params, config.rho, config.rng_seed);
  const int n = pair.g1.num_vertices();
  Rng rng = Rng(config.rng_seed).split(3);
  if (config.permute) {
    pair.truth = rng.permutation(n);
    pair.g2 = apply_permutation(pair.g2, pair.truth);
  }
  const auto seed_vertices = rng.sample_without_replacement(n, config.seeds);
  const SeedSet seeds = SeedSet::from_truth(pair.truth, seed_vertices);

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
  GeneratedFiles files{dir / "g1.edges", dir / "g2.edges", dir / "truth.tsv", dir / "seeds.tsv"};
  save_edge_list(pair.g1, files.g1);
  save_edge_list(pair.g2, files.g2);
  save_truth(pair.truth, files.truth);
  save_seeds(seeds, files.seeds);
  return files;
}

ReplicateOutcome run_replicate(const SbmParams& params, double rho, const SeedPlan& plan,
                               const LsgmConfig& config, std::uint64_t graph_seed,
                               std::uint64_t seed_stream) {
  CorrelatedPair pair = generate_correlated_sbm(params, rho, graph_seed);
  const int n = pair.g1.num_vertices();
  Rng relabel = Rng(graph_seed).split(3);
  const Permutation truth = relabel.permutation(n);
  const SparseGraph g2 = apply_permutation(pair.g2, truth);

  Rng seed_rng = Rng(graph_seed).split(1000 + seed_stream);
  const auto seed_vertices = draw_seed_vertices(plan, pair.block_of, params.num_blocks(), seed_rng);

  ReplicateOutcome out;
  out.seeds = SeedSet::from_truth(truth, seed_vertices);
  out.truth = truth;
  out.n = n;
  LsgmConfig local = config;
  local.rng_seed = derive_seed(config.rng_seed, derive_seed(graph_seed, seed_stream));
  out.result = lsgm(pair.g1, g2, out.seeds, local, out.truth);
  return out;
}

void ExperimentSpec::validate() const {
  if (replicates < 1) throw ParameterError("replicate count must be at least 1");
  if (rhos.empty()) throw ParameterError("experiment grid has no rho values");
  if (seed_plans.empty()) throw ParameterError("experiment grid has no seed counts");
  for (double rho : rhos) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0,1]");
  }
  params.validate();
  config.validate();
}

ExperimentSpec parse_experiment_spec(const std::string& json_text,
                                     const std::filesystem::path& base_dir) {
  const json j = parse_json(json_text);
  ExperimentSpec spec;
  spec.id = j.contains("id") ? get_as<std::string>(j, "id") : std::string("experiment");
  if (!j.contains("sbm")) throw ParseError("experiment spec needs an 'sbm' section");
  spec.params = sbm_from_json(j.at("sbm"));
  spec.rhos = get_as<std::vector<double>>(j, "rho");
  if (!j.contains("seeds") || !j.at("seeds").is_array()) throw ParseError("'seeds' must be a list");
  for (const auto& entry : j.at("seeds")) {
    if (entry.is_array()) {
      spec.seed_plans.emplace_back(entry.get<std::vector<int>>());
    } else if (entry.is_number_integer()) {
      spec.seed_plans.emplace_back(entry.get<int>());
    } else {
      throw ParseError("'seeds' entries must be counts or per-block count lists");
    }
  }
  spec.replicates = j.contains("replicates") ? get_as<int>(j, "replicates") : 1;
  spec.rng_seed = j.contains("rng_seed") ? get_as<std::uint64_t>(j, "rng_seed") : 0;
  if (j.contains("lsgm")) apply_lsgm(j.at("lsgm"), spec.config);
  std::filesystem::path output = j.contains("output") ? get_as<std::string>(j, "output")
                                                      : spec.id + ".csv";
  spec.output = output.is_relative() && !base_dir.empty() ? base_dir / output : output;
  spec.validate();
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  return parse_experiment_spec(read_file(path), path.parent_path());
}

const char* const kResultHeader =
    "experiment_id,replicate,status,rho,s,n,k,d,accuracy,consistency,embed_s,procrustes_s,"
    "cluster_s,match_s,iterations,message";

std::string format_result_row(const ResultRow& row) {
  std::ostringstream out;
  out << sanitize(row.experiment_id) << ',' << row.replicate << ',' << row.status << ','
      << format_double(row.rho, 6) << ',' << row.s << ',' << row.n << ',' << row.k << ','
      << row.d << ',' << format_double(row.accuracy, 6) << ','
      << format_double(row.consistency, 6) << ',' << format_double(row.embed_seconds, 3) << ','
      << format_double(row.procrustes_seconds, 3) << ',' << format_double(row.cluster_seconds, 3)
      << ',' << format_double(row.match_seconds, 3) << ',' << row.iterations << ','
      << sanitize(row.message);
  return out.str();
}

ResultRow parse_result_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  if (fields.size() != 16) {
    throw ParseError("result row has " + std::to_string(fields.size()) + " fields, expected 16");
  }
  try {
    ResultRow row;
    row.experiment_id = fields[0];
    row.replicate = std::stoi(fields[1]);
    row.status = fields[2];
    row.rho = std::stod(fields[3]);
    row.s = std::stoi(fields[4]);
    row.n = std::stoi(fields[5]);
    row.k = std::stoi(fields[6]);
    row.d = std::stoi(fields[7]);
    row.accuracy = std::stod(fields[8]);
    row.consistency = std::stod(fields[9]);
    row.embed_seconds = std::stod(fields[10]);
    row.procrustes_seconds = std::stod(fields[11]);
    row.cluster_seconds = std::stod(fields[12]);
    row.match_seconds = std::stod(fields[13]);
    row.iterations = std::stoll(fields[14]);
    row.message = fields[15];
    return row;
  } catch (const std::logic_error&) {
    throw ParseError("malformed result row: " + line);
  }
}

std::vector<ResultRow> read_results(const std::filesystem::path& path) {
  std::vector<ResultRow> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == kResultHeader) continue;
    try {
      rows.push_back(parse_result_row(line));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return rows;
}

std::string cell_id(const ExperimentSpec& spec, double rho, const SeedPlan& plan) {
  std::ostringstream out;
  out << spec.id << ":rho=" << rho << ":s=" << seed_plan_label(plan);
  return out.str();
}

std::vector<ResultRow> run_experiment(const ExperimentSpec& spec, std::ostream* log) {
  spec.validate();
  std::set<std::pair<std::string, int>> done;
  for (const auto& row : read_results(spec.output)) done.emplace(row.experiment_id, row.replicate);

  const bool fresh = !std::filesystem::exists(spec.output) || std::filesystem::file_size(spec.output) == 0;
  if (!spec.output.parent_path().empty()) std::filesystem::create_directories(spec.output.parent_path());
  std::ofstream out(spec.output, std::ios::app | std::ios::binary);
  if (!out) throw Error("cannot write " + spec.output.string());
  if (fresh) out << kResultHeader << '\n';

  std::vector<ResultRow> produced;
  for (std::size_t r = 0; r < spec.rhos.size(); ++r) {
    for (std::size_t p = 0; p < spec.seed_plans.size(); ++p) {
      const std::string id = cell_id(spec, spec.rhos[r], spec.seed_plans[p]);
      for (int rep = 0; rep < spec.replicates; ++rep) {
        if (done.contains({id, rep})) continue;
        ResultRow row;
        row.experiment_id = id;
        row.replicate = rep;
        row.rho = spec.rhos[r];
        row.s = seed_plan_total(spec.seed_plans[p]);
        row.n = spec.params.num_vertices();
        // Replicates share graphs across seed plans (common random numbers).
        const std::uint64_t graph_seed = derive_seed(spec.rng_seed, r * 1000003ULL + static_cast<std::uint64_t>(rep));
        try {
          const ReplicateOutcome outcome =
              run_replicate(spec.params, spec.rhos[r], spec.seed_plans[p], spec.config, graph_seed, p);
          const LsgmResult& res = outcome.result;
          row.status = "ok";
          row.k = res.k;
          row.d = res.d;
          row.accuracy = res.accuracy.value_or(0.0);
          row.consistency = res.consistency.value_or(0.0);
          row.embed_seconds = res.times.embed;
          row.procrustes_seconds = res.times.procrustes;
          row.cluster_seconds = res.times.cluster;
          row.match_seconds = res.times.match;
          row.iterations = res.matching.iterations;
        } catch (const Error& e) {
          row.status = "error";
          row.message = e.what();
        }
        out << format_result_row(row) << '\n';
        out.flush();
        if (log) *log << format_result_row(row) << '\n';
        produced.push_back(std::move(row));
      }
    }
  }
  return produced;
}

}  // namespace lsgm
