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

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "lsgm/graph.hpp"
#include "lsgm/seeds.hpp"

namespace lsgm {

struct EigenOptions {
  // Graphs up to this order use the dense symmetric solver.
  int dense_threshold = 2000;
  double tolerance = 1e-8;
  // Matrix-vector product budget per requested eigenpair (iterative solver).
  int iterations_per_dim = 300;
};

struct EigenPairs {
  Eigen::VectorXd values;   // nonincreasing
  Eigen::MatrixXd vectors;  // orthonormal columns
  int matvecs = 0;          // 0 for the dense path
};

// Largest-algebraic eigenpairs of a symmetric matrix, dense path.
EigenPairs top_eigenpairs_dense(const Eigen::MatrixXd& a, int count);

// Largest-algebraic eigenpairs by thick-restart Lanczos with full
// reorthogonalization. Throws NumericalError if the matvec budget runs out.
EigenPairs top_eigenpairs_lanczos(const Eigen::SparseMatrix<double>& a, int count,
                                  const EigenOptions& options = {});

// Flips each column so its largest-magnitude entry is positive (ties go to
// the lowest row index).
void canonicalize_signs(Eigen::MatrixXd& vectors);

// Adjacency spectral embedding: rows of U * S^{1/2} for the top-d
// eigenpairs.
struct Embedding {
  Eigen::MatrixXd coords;
  Eigen::VectorXd eigenvalues;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  int rows() const { return static_cast<int>(coords.rows()); }
};

// Throws EmbeddingRankError when the d-th eigenvalue is not positive.
Embedding spectral_embed(const SparseGraph& g, int d, const EigenOptions& options = {});

// Top `count` eigenvalues only (for scree-based dimension selection).
Eigen::VectorXd leading_spectrum(const SparseGraph& g, int count,
                                 const EigenOptions& options = {});

struct DimensionEstimate {
  int dim = 1;
  bool degenerate = false;              // no elbow exists (constant spectrum)
  std::vector<double> log_likelihood;   // entry q-1 is the split after q values
};

// Profile-likelihood elbow of a nonincreasing partial spectrum: two Gaussian
// groups with a common variance, maximized over the split point.
DimensionEstimate estimate_dimension(std::span<const double> spectrum);

struct OrthogonalTransform {
  Eigen::MatrixXd q;
  double residual = 0.0;  // ||xs * q - ys||_F
};

// argmin_{W^T W = I} ||xs W - ys||_F via the SVD xs^T ys = U S V^T, Q = U V^T.
OrthogonalTransform procrustes_align(const Eigen::MatrixXd& xs, const Eigen::MatrixXd& ys);

struct AlignedEmbedding {
  Eigen::MatrixXd aligned_x;  // xhat * q
  OrthogonalTransform transform;
};

// Rotates the graph-1 embedding onto the graph-2 embedding using the seed
// rows. Throws SeedlessAlignmentError when `seeds` is empty.
AlignedEmbedding align_embeddings(const Embedding& xhat, const Embedding& yhat,
                                  const SeedSet& seeds);

// Max row norm of (x - y).
double two_to_infinity_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// CSV with one row per vertex, 17 significant digits.
void write_matrix_csv(const Eigen::MatrixXd& m, std::ostream& out);

// Theory-side quantities for an SBM at dimension d. They do not drive any
// runtime behavior; they make the separation assumptions checkable.
struct SbmDiagnostics {
  double eigengap = 0.0;         // min pairwise gap among the top d+1 eigenvalues of D, over n
  double beta = 0.0;             // 260 d log(n) / (eigengap sqrt(n))
  double min_separation = 0.0;   // min distance between distinct latent rows
  bool separated = false;        // min_separation > 6 n^{1/6} beta
  double seed_spread = 0.0;      // min_v ||X(seeds,:) v|| / sqrt(s)
};

// The latent matrix is taken from params.latent, or recovered from the
// block probability matrix when that is positive semidefinite.
SbmDiagnostics sbm_diagnostics(const SbmParams& params, int d,
                               std::span<const Vertex> seed_vertices = {});

}  // namespace lsgm
