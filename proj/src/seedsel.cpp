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

#include "lsgm/seedsel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "lsgm/errors.hpp"

namespace lsgm {

namespace {

double entropy_of_counts(std::span<const int> counts, int total) {
  double h = 0.0;
  for (int c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  return h;
}

// Columns grouped into classes by the words read so far; adding a row
// splits every class by that row's bit.
class ColumnPartition {
 public:
  explicit ColumnPartition(Eigen::Index columns)
      : class_of_(static_cast<std::size_t>(columns), 0), num_classes_(columns > 0 ? 1 : 0) {}

  std::vector<int> refined(const BinaryMatrix& block, Eigen::Index row, int& classes) const {
    std::vector<int> remap(2 * static_cast<std::size_t>(num_classes_), -1);
    std::vector<int> out(class_of_.size());
    classes = 0;
    for (std::size_t j = 0; j < class_of_.size(); ++j) {
      const auto key = 2 * static_cast<std::size_t>(class_of_[j]) +
                       (block(row, static_cast<Eigen::Index>(j)) != 0 ? 1 : 0);
      if (remap[key] < 0) remap[key] = classes++;
      out[j] = remap[key];
    }
    return out;
  }

  double entropy_with(const BinaryMatrix& block, Eigen::Index row) const {
    if (class_of_.empty()) return 0.0;
    int classes = 0;
    const auto labels = refined(block, row, classes);
    std::vector<int> counts(static_cast<std::size_t>(classes), 0);
    for (int c : labels) ++counts[static_cast<std::size_t>(c)];
    return entropy_of_counts(counts, static_cast<int>(labels.size()));
  }

  void add(const BinaryMatrix& block, Eigen::Index row) {
    if (class_of_.empty()) return;
    class_of_ = refined(block, row, num_classes_);
  }

 private:
  std::vector<int> class_of_;
  int num_classes_;
};

}  // namespace

double column_entropy(const BinaryMatrix& block) {
  if (block.rows() == 0 || block.cols() == 0) return 0.0;
  std::map<std::vector<std::uint8_t>, int> words;
  for (Eigen::Index j = 0; j < block.cols(); ++j) {
    std::vector<std::uint8_t> word(static_cast<std::size_t>(block.rows()));
    for (Eigen::Index i = 0; i < block.rows(); ++i) {
      const std::uint8_t bit = block(i, j);
      if (bit > 1) throw ParameterError("column_entropy expects a 0/1 matrix");
      word[static_cast<std::size_t>(i)] = bit;
    }
    ++words[word];
  }
  std::vector<int> counts;
  for (const auto& [word, count] : words) counts.push_back(count);
  return entropy_of_counts(counts, static_cast<int>(block.cols()));
}

SeedSelection select_seeds(const BinaryMatrix& block1, const BinaryMatrix& block2, int budget) {
  if (block1.rows() != block2.rows()) {
    throw ParameterError("seed blocks must have one row per candidate seed in both graphs");
  }
  const int candidates = static_cast<int>(block1.rows());
  if (budget < 0 || budget > candidates) {
    throw ParameterError("seed budget " + std::to_string(budget) + " exceeds the " +
                         std::to_string(candidates) + " available seeds");
  }
  ColumnPartition part1(block1.cols());
  ColumnPartition part2(block2.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(candidates), false);
  SeedSelection out;
  constexpr double kTieTolerance = 1e-12;
  for (int t = 0; t < budget; ++t) {
    double best = -1.0;
    std::vector<int> maximizers;
    std::vector<std::pair<double, double>> scores(static_cast<std::size_t>(candidates));
    for (int i = 0; i < candidates; ++i) {
      if (chosen[static_cast<std::size_t>(i)]) continue;
      const double h1 = part1.entropy_with(block1, i);
      const double h2 = part2.entropy_with(block2, i);
      scores[static_cast<std::size_t>(i)] = {h1, h2};
      const double total = h1 + h2;
      if (total > best + kTieTolerance) {
        best = total;
        maximizers.assign(1, i);
      } else if (total >= best - kTieTolerance) {
        maximizers.push_back(i);
      }
    }
    const int pick = maximizers.front();
    chosen[static_cast<std::size_t>(pick)] = true;
    part1.add(block1, pick);
    part2.add(block2, pick);
    out.order.push_back(pick);
    out.entropy1.push_back(scores[static_cast<std::size_t>(pick)].first);
    out.entropy2.push_back(scores[static_cast<std::size_t>(pick)].second);
    out.maximizers.push_back(std::move(maximizers));
  }
  return out;
}

SeedSelection select_seeds(const SparseGraph& a, const SparseGraph& b, const SeedSet& all_seeds,
                           std::span<const Vertex> cluster1, std::span<const Vertex> cluster2,
                           int budget) {
  if (cluster1.empty() || cluster2.empty()) {
    throw ParameterError("seed selection needs a nonempty cluster in both graphs");
  }
  all_seeds.validate(a.num_vertices(), b.num_vertices());
  const auto s = static_cast<Eigen::Index>(all_seeds.size());
  auto build = [&](const SparseGraph& g, std::span<const Vertex> cluster, bool first) {
    BinaryMatrix block = BinaryMatrix::Zero(s, static_cast<Eigen::Index>(cluster.size()));
    for (Eigen::Index i = 0; i < s; ++i) {
      const auto& pair = all_seeds.pairs[static_cast<std::size_t>(i)];
      const Vertex seed = first ? pair.first : pair.second;
      for (std::size_t j = 0; j < cluster.size(); ++j) {
        if (g.has_edge(seed, cluster[j])) block(i, static_cast<Eigen::Index>(j)) = 1;
      }
    }
    return block;
  };
  SeedSelection out = select_seeds(build(a, cluster1, true), build(b, cluster2, false), budget);
  for (int i : out.order) out.seeds.pairs.push_back(all_seeds.pairs[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace lsgm
