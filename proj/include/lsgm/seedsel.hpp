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
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "lsgm/graph.hpp"
#include "lsgm/seeds.hpp"

namespace lsgm {

using BinaryMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Shannon entropy (bits) of the empirical distribution of the columns of a
// binary matrix, each column read as a word of length rows(). Zero when the
// matrix has no rows or no columns.
double column_entropy(const BinaryMatrix& block);

struct SeedSelection {
  std::vector<int> order;           // indices into the candidate seeds, in pick order
  std::vector<double> entropy1;     // H^1 after each pick
  std::vector<double> entropy2;     // H^2 after each pick
  std::vector<std::vector<int>> maximizers;  // all argmax candidates at each step
  SeedSet seeds;                    // chosen pairs in pick order (graph overload)
};

// Greedy entropy-driven seed selection on precomputed seed-by-nonseed
// blocks (row i of each block belongs to candidate seed i). Each step adds
// the candidate maximizing H^1 + H^2; ties go to the lowest index.
SeedSelection select_seeds(const BinaryMatrix& block1, const BinaryMatrix& block2, int budget);

// Same, building the blocks from the graphs: rows are all_seeds, columns the
// cluster vertices of each graph.
SeedSelection select_seeds(const SparseGraph& a, const SparseGraph& b, const SeedSet& all_seeds,
                           std::span<const Vertex> cluster1, std::span<const Vertex> cluster2,
                           int budget);

}  // namespace lsgm
