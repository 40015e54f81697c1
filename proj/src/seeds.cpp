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

#include "lsgm/seeds.hpp"

#include <fstream>
#include <sstream>
#include <string>

#include "lsgm/errors.hpp"

namespace lsgm {

std::vector<Vertex> SeedSet::first() const {
  std::vector<Vertex> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.first);
  return out;
}

std::vector<Vertex> SeedSet::second() const {
  std::vector<Vertex> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(p.second);
  return out;
}

void SeedSet::validate(int n1, int n2) const {
  std::vector<bool> used1(static_cast<std::size_t>(n1), false);
  std::vector<bool> used2(static_cast<std::size_t>(n2), false);
  for (auto [u, v] : pairs) {
    if (u < 0 || u >= n1 || v < 0 || v >= n2) {
      throw ParameterError("seed (" + std::to_string(u) + "," + std::to_string(v) +
                           ") out of range");
    }
    if (used1[static_cast<std::size_t>(u)] || used2[static_cast<std::size_t>(v)]) {
      throw ParameterError("seed vertex repeated in (" + std::to_string(u) + "," +
                           std::to_string(v) + ")");
    }
    used1[static_cast<std::size_t>(u)] = true;
    used2[static_cast<std::size_t>(v)] = true;
  }
}

SeedSet SeedSet::from_truth(std::span<const Vertex> truth, std::span<const Vertex> vertices) {
  SeedSet out;
  out.pairs.reserve(vertices.size());
  for (Vertex v : vertices) {
    if (v < 0 || static_cast<std::size_t>(v) >= truth.size()) {
      throw ParameterError("seed vertex out of range");
    }
    out.pairs.emplace_back(v, truth[static_cast<std::size_t>(v)]);
  }
  return out;
}

std::vector<std::pair<Vertex, Vertex>> read_vertex_pairs(std::istream& in) {
  std::vector<std::pair<Vertex, Vertex>> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::istringstream fields(line);
    long long u = -1;
    long long v = -1;
    std::string extra;
    if (!(fields >> u >> v) || (fields >> extra) || u < 0 || v < 0) {
      throw ParseError("expected two nonnegative vertex ids, got '" + line + "'", line_no);
    }
    out.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return out;
}

void write_vertex_pairs(std::span<const std::pair<Vertex, Vertex>> pairs, std::ostream& out) {
  out << "# g1_vertex\tg2_vertex\n";
  for (auto [u, v] : pairs) out << u << '\t' << v << '\n';
}

SeedSet load_seeds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open seed file " + path.string());
  return SeedSet{read_vertex_pairs(in)};
}

void save_seeds(const SeedSet& seeds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_vertex_pairs(seeds.pairs, out);
}

Permutation load_truth(const std::filesystem::path& path, int n) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open truth file " + path.string());
  Permutation truth(static_cast<std::size_t>(n), -1);
  for (auto [u, v] : read_vertex_pairs(in)) {
    if (u >= n) throw ParseError("truth vertex " + std::to_string(u) + " out of range");
    truth[static_cast<std::size_t>(u)] = v;
  }
  for (Vertex v : truth) {
    if (v < 0) throw ParseError("truth file does not cover every graph-1 vertex");
  }
  return truth;
}

void save_truth(std::span<const Vertex> truth, const std::filesystem::path& path) {
  std::vector<std::pair<Vertex, Vertex>> pairs;
  pairs.reserve(truth.size());
  for (std::size_t v = 0; v < truth.size(); ++v) {
    pairs.emplace_back(static_cast<Vertex>(v), truth[v]);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_vertex_pairs(pairs, out);
}

}  // namespace lsgm
