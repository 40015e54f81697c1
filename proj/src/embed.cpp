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

#include "lsgm/embed.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lsgm/errors.hpp"
#include "lsgm/rng.hpp"

namespace lsgm {

namespace {

void check_count(Eigen::Index n, int count) {
  if (count < 1 || count > n) {
    throw ParameterError("requested " + std::to_string(count) +
                         " eigenpairs of a matrix of order " + std::to_string(n));
  }
}

// Orthogonalizes w against the first `cols` columns of basis (two passes)
// and returns the accumulated coefficients.
Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& basis, Eigen::Index cols,
                              Eigen::VectorXd& w) {
  Eigen::VectorXd h = basis.leftCols(cols).transpose() * w;
  w.noalias() -= basis.leftCols(cols) * h;
  Eigen::VectorXd h2 = basis.leftCols(cols).transpose() * w;
  w.noalias() -= basis.leftCols(cols) * h2;
  return h + h2;
}

}  // namespace

EigenPairs top_eigenpairs_dense(const Eigen::MatrixXd& a, int count) {
  check_count(a.rows(), count);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
  const Eigen::Index n = a.rows();
  EigenPairs out;
  out.values.resize(count);
  out.vectors.resize(n, count);
  for (int i = 0; i < count; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

EigenPairs top_eigenpairs_lanczos(const Eigen::SparseMatrix<double>& a, int count,
                                  const EigenOptions& options) {
  const Eigen::Index n = a.rows();
  check_count(n, count);
  const Eigen::Index max_basis = std::min<Eigen::Index>(n, std::max(2 * count + 20, 3 * count));
  const Eigen::Index keep = std::min<Eigen::Index>(max_basis - 1, count + (max_basis - count) / 2);
  const long budget = static_cast<long>(options.iterations_per_dim) * count;

  Eigen::MatrixXd basis(n, max_basis);
  Eigen::MatrixXd projected = Eigen::MatrixXd::Zero(max_basis, max_basis);

  Rng rng(0x1a2c05);
  auto random_unit = [&](Eigen::Index cols) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.uniform() - 0.5;
    if (cols > 0) orthogonalize(basis, cols, v);
    return Eigen::VectorXd(v / v.norm());
  };

  Eigen::VectorXd next = random_unit(0);
  Eigen::Index cols = 0;
  long matvecs = 0;
  double coupling = 0.0;
  double scale = 1.0;

  while (true) {
    while (cols < max_basis && matvecs < budget) {
      basis.col(cols) = next;
      Eigen::VectorXd w = a * next;
      ++matvecs;
      Eigen::VectorXd h = orthogonalize(basis, cols + 1, w);
      for (Eigen::Index i = 0; i <= cols; ++i) {
        projected(i, cols) = h(i);
        projected(cols, i) = h(i);
      }
      ++cols;
      scale = std::max(scale, projected.topLeftCorner(cols, cols).cwiseAbs().maxCoeff());
      coupling = w.norm();
      if (cols == n) break;
      if (coupling <= 1e-12 * scale) {
        // Invariant subspace: continue from a fresh direction.
        coupling = 0.0;
        next = random_unit(cols);
      } else {
        next = w / coupling;
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(projected.topLeftCorner(cols, cols));
    if (ritz.info() != Eigen::Success) throw NumericalError("Ritz eigensolve failed");
    const Eigen::VectorXd& theta = ritz.eigenvalues();
    const Eigen::MatrixXd& y = ritz.eigenvectors();

    bool converged = cols >= count;
    for (int i = 0; i < count && converged; ++i) {
      const Eigen::Index idx = cols - 1 - i;
      if (coupling * std::abs(y(cols - 1, idx)) > options.tolerance * scale) converged = false;
    }
    if (cols == n) converged = true;

    if (converged) {
      EigenPairs out;
      out.values.resize(count);
      out.vectors.resize(n, count);
      for (int i = 0; i < count; ++i) {
        const Eigen::Index idx = cols - 1 - i;
        out.values(i) = theta(idx);
        out.vectors.col(i) = basis.leftCols(cols) * y.col(idx);
      }
      out.matvecs = static_cast<int>(matvecs);
      return out;
    }
    if (matvecs >= budget) {
      throw NumericalError("Lanczos did not converge within " + std::to_string(budget) +
                           " matrix-vector products");
    }

    // Thick restart: keep the leading Ritz vectors, continue from the
    // residual direction, which is orthogonal to all of them.
    Eigen::MatrixXd kept(n, keep);
    for (Eigen::Index i = 0; i < keep; ++i) {
      kept.col(i) = basis.leftCols(cols) * y.col(cols - 1 - i);
    }
    basis.leftCols(keep) = kept;
    projected.setZero();
    for (Eigen::Index i = 0; i < keep; ++i) projected(i, i) = theta(cols - 1 - i);
    cols = keep;
  }
}

void canonicalize_signs(Eigen::MatrixXd& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double v = std::abs(vectors(i, j));
      if (v > best_abs) {
        best_abs = v;
        best = i;
      }
    }
    if (vectors.rows() > 0 && vectors(best, j) < 0.0) vectors.col(j) *= -1.0;
  }
}

namespace {

EigenPairs leading_pairs(const SparseGraph& g, int count, const EigenOptions& options) {
  check_count(g.num_vertices(), count);
  if (g.num_vertices() <= options.dense_threshold) {
    return top_eigenpairs_dense(g.dense_adjacency(), count);
  }
  return top_eigenpairs_lanczos(g.adjacency(), count, options);
}

}  // namespace

Embedding spectral_embed(const SparseGraph& g, int d, const EigenOptions& options) {
  EigenPairs pairs = leading_pairs(g, d, options);
  const double top = pairs.values.size() > 0 ? std::abs(pairs.values(0)) : 0.0;
  const double floor = 1e-10 * std::max(1.0, top);
  for (int i = 0; i < d; ++i) {
    if (!(pairs.values(i) > floor)) {
      throw EmbeddingRankError("eigenvalue " + std::to_string(i + 1) + " of the adjacency is " +
                               std::to_string(pairs.values(i)) +
                               " (not positive); use an embedding dimension of at most " +
                               std::to_string(i));
    }
  }
  canonicalize_signs(pairs.vectors);
  Embedding out;
  out.eigenvalues = pairs.values;
  out.coords = pairs.vectors * pairs.values.cwiseSqrt().asDiagonal();
  return out;
}

Eigen::VectorXd leading_spectrum(const SparseGraph& g, int count, const EigenOptions& options) {
  return leading_pairs(g, count, options).values;
}

DimensionEstimate estimate_dimension(std::span<const double> spectrum) {
  const std::size_t m = spectrum.size();
  if (m < 3) throw ParameterError("dimension estimation needs at least 3 eigenvalues");
  for (std::size_t i = 1; i < m; ++i) {
    if (spectrum[i] > spectrum[i - 1]) {
      throw ParameterError("spectrum must be sorted nonincreasing");
    }
  }
  DimensionEstimate out;
  if (spectrum.front() == spectrum.back()) {
    out.dim = 1;
    out.degenerate = true;
    out.log_likelihood.assign(m - 1, 0.0);
    return out;
  }

  auto mean = [&](std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += spectrum[i];
    return s / static_cast<double>(hi - lo);
  };

  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 1; q < m; ++q) {
    const double mu1 = mean(0, q);
    const double mu2 = mean(q, m);
    double ss = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = spectrum[i] - (i < q ? mu1 : mu2);
      ss += r * r;
    }
    const double var = ss / static_cast<double>(m - 2);
    double ll;
    if (var <= 0.0) {
      ll = std::numeric_limits<double>::infinity();
    } else {
      // Sum of Gaussian log densities at the pooled variance.
      ll = -0.5 * static_cast<double>(m) * std::log(2.0 * std::numbers::pi * var) -
           ss / (2.0 * var);
    }
    out.log_likelihood.push_back(ll);
    if (ll > best) {
      best = ll;
      out.dim = static_cast<int>(q);
    }
  }
  return out;
}

OrthogonalTransform procrustes_align(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys) {
  if (xs.rows() != ys.rows() || xs.cols() != ys.cols()) {
    throw ParameterError("Procrustes inputs must have identical shapes");
  }
  if (xs.rows() < 1 || xs.cols() < 1) throw ParameterError("Procrustes inputs are empty");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(xs.transpose() * ys,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  OrthogonalTransform out;
  out.q = svd.matrixU() * svd.matrixV().transpose();
  out.residual = (xs * out.q - ys).norm();
  return out;
}

AlignedEmbedding align_embeddings(const Embedding& xhat, const Embedding& yhat,
                                  const SeedSet& seeds) {
  if (seeds.empty()) {
    throw SeedlessAlignmentError("Procrustes alignment needs at least one seed pair");
  }
  if (xhat.dim() != yhat.dim()) throw ParameterError("embeddings have different dimensions");
  seeds.validate(xhat.rows(), yhat.rows());
  const auto s = static_cast<Eigen::Index>(seeds.size());
  Eigen::MatrixXd xs(s, xhat.dim());
  Eigen::MatrixXd ys(s, yhat.dim());
  for (Eigen::Index i = 0; i < s; ++i) {
    xs.row(i) = xhat.coords.row(seeds.pairs[static_cast<std::size_t>(i)].first);
    ys.row(i) = yhat.coords.row(seeds.pairs[static_cast<std::size_t>(i)].second);
  }
  AlignedEmbedding out;
  out.transform = procrustes_align(xs, ys);
  out.aligned_x = xhat.coords * out.transform.q;
  return out;
}

double two_to_infinity_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) throw ParameterError("shape mismatch");
  if (x.rows() == 0) return 0.0;
  return (x - y).rowwise().norm().maxCoeff();
}

void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out) {
  const auto old_precision = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old_precision);
}

SbmDiagnostics sbm_diagnostics(const SbmParams& params, int d,
                               std::span<const Vertex> seed_vertices) {
  params.validate();
  const int k = params.num_blocks();
  const int n = params.num_vertices();
  if (d < 1) throw ParameterError("dimension must be positive");

  // Nonzero spectrum of D = Z B Z^T equals that of N^{1/2} B N^{1/2}.
  Eigen::VectorXd root_sizes(k);
  for (int b = 0; b < k; ++b) root_sizes(b) = std::sqrt(params.block_sizes[static_cast<std::size_t>(b)]);
  Eigen::MatrixXd scaled = root_sizes.asDiagonal() * params.block_probs * root_sizes.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled);
  std::vector<double> lambda(es.eigenvalues().data(), es.eigenvalues().data() + k);
  std::sort(lambda.rbegin(), lambda.rend());
  lambda.resize(static_cast<std::size_t>(std::max(k, d + 1)), 0.0);

  SbmDiagnostics out;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= d; ++i) {
    for (int j = i + 1; j <= d; ++j) {
      gap = std::min(gap, std::abs(lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(j)]));
    }
  }
  out.eigengap = gap / n;
  out.beta = out.eigengap > 0.0
                 ? 260.0 * d * std::log(static_cast<double>(n)) / (out.eigengap * std::sqrt(n))
                 : std::numeric_limits<double>::infinity();

  Eigen::MatrixXd latent;
  if (params.latent) {
    latent = *params.latent;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> bs(params.block_probs);
    const int cols = std::min(d, k);
    latent.resize(k, cols);
    for (int j = 0; j < cols; ++j) {
      const double value = std::max(0.0, bs.eigenvalues()(k - 1 - j));
      latent.col(j) = bs.eigenvectors().col(k - 1 - j) * std::sqrt(value);
    }
  }
  out.min_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      out.min_separation = std::min(out.min_separation, (latent.row(i) - latent.row(j)).norm());
    }
  }
  out.separated = out.min_separation > 6.0 * std::pow(n, 1.0 / 6.0) * out.beta;

  if (!seed_vertices.empty()) {
    const auto block = params.block_of();
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(seed_vertices.size()), latent.cols());
    for (std::size_t i = 0; i < seed_vertices.size(); ++i) {
      rows.row(static_cast<Eigen::Index>(i)) =
          latent.row(block.at(static_cast<std::size_t>(seed_vertices[i])));
    }
    if (rows.rows() >= rows.cols()) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows);
      out.seed_spread = svd.singularValues().minCoeff() / std::sqrt(static_cast<double>(rows.rows()));
    }
  }
  return out;
}

}  // namespace lsgm
