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

#include "lsgm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "lsgm/errors.hpp"
#include "lsgm/rng.hpp"

namespace lsgm {

SparseGraph::SparseGraph(int n, std::span<const Edge> edges) : n_(n) {
  if (n < 0) throw ParameterError("vertex count must be nonnegative");
  std::vector<Edge> directed;
  directed.reserve(2 * edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) {
      throw ParameterError("edge {" + std::to_string(u) + "," + std::to_string(v) +
                           "} out of range for n=" + std::to_string(n));
    }
    if (u == v) throw ParameterError("self-loop at vertex " + std::to_string(u));
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  neighbors_.reserve(directed.size());
  for (auto [u, v] : directed) {
    ++offsets_[static_cast<std::size_t>(u) + 1];
    neighbors_.push_back(v);
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

bool SparseGraph::has_edge(Vertex u, Vertex v) const {
  auto nbrs = neighbors(u);
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::vector<Edge> SparseGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(num_edges());
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v : neighbors(u)) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

Eigen::SparseMatrix<double> SparseGraph::adjacency() const {
  Eigen::SparseMatrix<double> a(n_, n_);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(neighbors_.size());
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v : neighbors(u)) triplets.emplace_back(u, v, 1.0);
  }
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

Eigen::MatrixXd SparseGraph::dense_adjacency() const {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_, n_);
  for (Vertex u = 0; u < n_; ++u) {
    for (Vertex v : neighbors(u)) a(u, v) = 1.0;
  }
  return a;
}

SparseGraph SparseGraph::induced_subgraph(std::span<const Vertex> vertices) const {
  std::vector<Vertex> local(static_cast<std::size_t>(n_), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Vertex v = vertices[i];
    if (v < 0 || v >= n_) throw ParameterError("induced_subgraph: vertex out of range");
    if (local[static_cast<std::size_t>(v)] != -1) {
      throw ParameterError("induced_subgraph: repeated vertex " + std::to_string(v));
    }
    local[static_cast<std::size_t>(v)] = static_cast<Vertex>(i);
  }
  std::vector<Edge> sub;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (Vertex w : neighbors(vertices[i])) {
      const Vertex j = local[static_cast<std::size_t>(w)];
      if (j > static_cast<Vertex>(i)) sub.emplace_back(static_cast<Vertex>(i), j);
    }
  }
  return SparseGraph(static_cast<int>(vertices.size()), sub);
}

SparseGraph SparseGraph::with_isolated_vertices(int extra) const {
  if (extra < 0) throw ParameterError("cannot append a negative number of vertices");
  SparseGraph out = *this;
  out.n_ += extra;
  out.offsets_.resize(static_cast<std::size_t>(out.n_) + 1, offsets_.back());
  return out;
}

void validate_permutation(std::span<const Vertex> perm, int n) {
  if (static_cast<int>(perm.size()) != n) {
    throw ParameterError("permutation has length " + std::to_string(perm.size()) +
                         ", expected " + std::to_string(n));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Vertex v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) {
      throw ParameterError("permutation is not a bijection on 0.." + std::to_string(n - 1));
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation inverse_permutation(std::span<const Vertex> perm) {
  validate_permutation(perm, static_cast<int>(perm.size()));
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    inv[static_cast<std::size_t>(perm[i])] = static_cast<Vertex>(i);
  }
  return inv;
}

SparseGraph apply_permutation(const SparseGraph& g, std::span<const Vertex> perm) {
  validate_permutation(perm, g.num_vertices());
  auto edges = g.edges();
  for (auto& [u, v] : edges) {
    u = perm[static_cast<std::size_t>(u)];
    v = perm[static_cast<std::size_t>(v)];
  }
  return SparseGraph(g.num_vertices(), edges);
}

SbmParams SbmParams::from_probabilities(std::vector<int> block_sizes, Eigen::MatrixXd probs) {
  SbmParams p{std::move(block_sizes), std::move(probs), std::nullopt};
  p.validate();
  return p;
}

SbmParams SbmParams::from_latent(std::vector<int> block_sizes, Eigen::MatrixXd latent) {
  Eigen::MatrixXd probs = latent * latent.transpose();
  SbmParams p{std::move(block_sizes), std::move(probs), std::move(latent)};
  p.validate();
  return p;
}

int SbmParams::num_vertices() const {
  int n = 0;
  for (int s : block_sizes) n += s;
  return n;
}

std::vector<int> SbmParams::block_of() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(num_vertices()));
  for (int b = 0; b < num_blocks(); ++b) {
    out.insert(out.end(), static_cast<std::size_t>(block_sizes[static_cast<std::size_t>(b)]), b);
  }
  return out;
}

void SbmParams::validate() const {
  const int k = num_blocks();
  if (k < 1) throw ParameterError("SBM needs at least one block");
  for (int s : block_sizes) {
    if (s < 0) throw ParameterError("block sizes must be nonnegative");
  }
  if (block_probs.rows() != k || block_probs.cols() != k) {
    throw ParameterError("probability matrix must be " + std::to_string(k) + "x" +
                         std::to_string(k));
  }
  constexpr double kTol = 1e-12;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double p = block_probs(i, j);
      if (!std::isfinite(p) || p < -kTol || p > 1.0 + kTol) {
        throw ParameterError("edge probabilities must lie in [0,1]");
      }
      if (std::abs(p - block_probs(j, i)) > 1e-12) {
        throw ParameterError("probability matrix must be symmetric");
      }
    }
  }
  if (latent && latent->rows() != k) {
    throw ParameterError("latent matrix must have one row per block");
  }
  const Eigen::MatrixXd& rows = latent ? *latent : block_probs;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      if ((rows.row(i) - rows.row(j)).norm() == 0.0) {
        throw ParameterError("blocks " + std::to_string(i) + " and " + std::to_string(j) +
                             " have identical latent rows");
      }
    }
  }
}

CorrelatedPair generate_correlated_sbm(const SbmParams& params, double rho,
                                       std::uint64_t rng_seed) {
  params.validate();
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0,1]");
  const int n = params.num_vertices();
  const auto block = params.block_of();

  Rng base(rng_seed);
  Rng first = base.split(1);
  Rng second = base.split(2);

  std::vector<Edge> e1;
  std::vector<Edge> e2;
  for (Vertex u = 0; u < n; ++u) {
    const int bu = block[static_cast<std::size_t>(u)];
    for (Vertex v = u + 1; v < n; ++v) {
      const double p = std::clamp(params.block_probs(bu, block[static_cast<std::size_t>(v)]), 0.0, 1.0);
      const bool in_first = first.bernoulli(p);
      const double q = in_first ? p + rho * (1.0 - p) : p * (1.0 - rho);
      if (in_first) e1.emplace_back(u, v);
      if (second.bernoulli(q)) e2.emplace_back(u, v);
    }
  }

  CorrelatedPair pair;
  pair.g1 = SparseGraph(n, e1);
  pair.g2 = SparseGraph(n, e2);
  pair.rho = rho;
  pair.truth.resize(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) pair.truth[static_cast<std::size_t>(v)] = v;
  pair.block_of = block;
  return pair;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Parses a nonnegative decimal integer token; false on anything else.
bool parse_index(std::string_view token, long long& out) {
  if (token.empty()) return false;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  return ec == std::errc() && ptr == token.data() + token.size() && out >= 0;
}

}  // namespace

SparseGraph read_edge_list(std::istream& in) {
  std::optional<long long> declared;
  long long max_index = -1;
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      const auto pos = body.find("n=");
      if (pos != std::string_view::npos) {
        std::string_view rest = body.substr(pos + 2);
        long long n = 0;
        if (!parse_index(rest.substr(0, rest.find_first_not_of("0123456789")), n)) {
          throw ParseError("malformed vertex-count header", line_no);
        }
        declared = n;
      }
      continue;
    }
    const auto gap = body.find_first_of(" \t");
    if (gap == std::string_view::npos) throw ParseError("expected two vertex ids", line_no);
    const std::string_view first = body.substr(0, gap);
    const std::string_view second = trim(body.substr(gap));
    long long u = 0;
    long long v = 0;
    if (!parse_index(first, u) || !parse_index(second, v)) {
      throw ParseError("expected two nonnegative integers, got '" + std::string(body) + "'",
                       line_no);
    }
    if (u == v) throw ParseError("self-loop at vertex " + std::to_string(u), line_no);
    if (declared && (u >= *declared || v >= *declared)) {
      throw ParseError("vertex id exceeds declared n=" + std::to_string(*declared), line_no);
    }
    if (std::max(u, v) >= std::numeric_limits<Vertex>::max()) {
      throw ParseError("vertex id too large", line_no);
    }
    max_index = std::max({max_index, u, v});
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  const long long n = std::max(declared.value_or(0), max_index + 1);
  return SparseGraph(static_cast<int>(n), edges);
}

void write_edge_list(const SparseGraph& g, std::ostream& out) {
  const auto edges = g.edges();
  Vertex max_index = -1;
  for (auto [u, v] : edges) max_index = std::max(max_index, v);
  // The header is only needed when trailing vertices are isolated.
  if (g.num_vertices() > max_index + 1) out << "# n=" << g.num_vertices() << '\n';
  for (auto [u, v] : edges) out << u << ' ' << v << '\n';
}

SparseGraph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge list " + path.string());
  return read_edge_list(in);
}

void save_edge_list(const SparseGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  write_edge_list(g, out);
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace lsgm
