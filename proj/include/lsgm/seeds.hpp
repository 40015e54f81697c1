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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "lsgm/graph.hpp"

namespace lsgm {

// Known correspondences between graph-1 and graph-2 vertices, in order.
struct SeedSet {
  std::vector<std::pair<Vertex, Vertex>> pairs;

  std::size_t size() const { return pairs.size(); }
  bool empty() const { return pairs.empty(); }
  std::vector<Vertex> first() const;
  std::vector<Vertex> second() const;

  // Throws ParameterError on out-of-range or repeated vertices.
  void validate(int n1, int n2) const;

  // Seeds (v, truth[v]) for each v in `vertices`.
  static SeedSet from_truth(std::span<const Vertex> truth, std::span<const Vertex> vertices);

  friend bool operator==(const SeedSet&, const SeedSet&) = default;
};

// Tab-separated "g1_vertex<TAB>g2_vertex" lines; '#' lines are comments.
std::vector<std::pair<Vertex, Vertex>> read_vertex_pairs(std::istream& in);
void write_vertex_pairs(std::span<const std::pair<Vertex, Vertex>> pairs, std::ostream& out);

SeedSet load_seeds(const std::filesystem::path& path);
void save_seeds(const SeedSet& seeds, const std::filesystem::path& path);

// A truth file lists every graph-1 vertex once; returns truth[v].
Permutation load_truth(const std::filesystem::path& path, int n);
void save_truth(std::span<const Vertex> truth, const std::filesystem::path& path);

}  // namespace lsgm
