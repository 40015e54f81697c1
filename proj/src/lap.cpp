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

#include "lsgm/lap.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "lsgm/errors.hpp"

namespace lsgm {

Assignment lap_solve(const Eigen::MatrixXd& cost_in, bool maximize) {
  if (cost_in.rows() != cost_in.cols()) throw ParameterError("cost matrix must be square");
  if (!cost_in.allFinite()) throw NumericalError("cost matrix has non-finite entries");
  const Eigen::Index m = cost_in.rows();
  Assignment out;
  if (m == 0) return out;

  // Row-major so the inner scan over columns is contiguous.
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const RowMajor cost = maximize ? RowMajor(-cost_in) : RowMajor(cost_in);
  constexpr double kInf = std::numeric_limits<double>::infinity();

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
  std::vector<Eigen::Index> col4row(static_cast<std::size_t>(m), -1);
  std::vector<Eigen::Index> row4col(static_cast<std::size_t>(m), -1);
  std::vector<Eigen::Index> path(static_cast<std::size_t>(m), -1);
  std::vector<Eigen::Index> remaining(static_cast<std::size_t>(m));
  std::vector<double> shortest(static_cast<std::size_t>(m));
  std::vector<char> scanned_row(static_cast<std::size_t>(m));
  std::vector<char> scanned_col(static_cast<std::size_t>(m));

  // Column reduction: v(j) = min_i cost(i, j) keeps the duals feasible, and
  // every row that is the first argmin of a still-free column starts matched.
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < m; ++i) {
      if (cost(i, j) < cost(best, j)) best = i;
    }
    v(j) = cost(best, j);
    if (col4row[static_cast<std::size_t>(best)] == -1) {
      col4row[static_cast<std::size_t>(best)] = j;
      row4col[static_cast<std::size_t>(j)] = best;
    }
  }

  for (Eigen::Index current = 0; current < m; ++current) {
    if (col4row[static_cast<std::size_t>(current)] != -1) continue;
    std::iota(remaining.begin(), remaining.end(), Eigen::Index{0});
    std::fill(shortest.begin(), shortest.end(), kInf);
    std::fill(scanned_row.begin(), scanned_row.end(), 0);
    std::fill(scanned_col.begin(), scanned_col.end(), 0);
    std::size_t num_remaining = static_cast<std::size_t>(m);

    double min_value = 0.0;
    Eigen::Index row = current;
    Eigen::Index sink = -1;
    while (sink == -1) {
      scanned_row[static_cast<std::size_t>(row)] = 1;
      std::size_t index = 0;
      double lowest = kInf;
      for (std::size_t it = 0; it < num_remaining; ++it) {
        const Eigen::Index col = remaining[it];
        const auto c = static_cast<std::size_t>(col);
        const double reduced = min_value + cost(row, col) - u(row) - v(col);
        if (reduced < shortest[c]) {
          path[c] = row;
          shortest[c] = reduced;
        }
        // Ties prefer a free column, then the lower column index.
        const bool is_free = row4col[c] == -1;
        bool better = shortest[c] < lowest;
        if (!better && shortest[c] == lowest) {
          const Eigen::Index best = remaining[index];
          const bool best_free = row4col[static_cast<std::size_t>(best)] == -1;
          better = (is_free && !best_free) || (is_free == best_free && col < best);
        }
        if (better) {
          lowest = shortest[c];
          index = it;
        }
      }
      min_value = lowest;
      if (min_value == kInf) throw NumericalError("assignment problem is infeasible");
      const Eigen::Index col = remaining[index];
      if (row4col[static_cast<std::size_t>(col)] == -1) {
        sink = col;
      } else {
        row = row4col[static_cast<std::size_t>(col)];
      }
      scanned_col[static_cast<std::size_t>(col)] = 1;
      remaining[index] = remaining[--num_remaining];
    }

    u(current) += min_value;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (scanned_row[static_cast<std::size_t>(i)] && i != current) {
        u(i) += min_value - shortest[static_cast<std::size_t>(col4row[static_cast<std::size_t>(i)])];
      }
    }
    for (Eigen::Index j = 0; j < m; ++j) {
      if (scanned_col[static_cast<std::size_t>(j)]) v(j) -= min_value - shortest[static_cast<std::size_t>(j)];
    }

    Eigen::Index col = sink;
    while (true) {
      const Eigen::Index i = path[static_cast<std::size_t>(col)];
      row4col[static_cast<std::size_t>(col)] = i;
      std::swap(col4row[static_cast<std::size_t>(i)], col);
      if (i == current) break;
    }
  }

  // Among optimal assignments pick the lexicographically smallest: every
  // optimum uses only tight edges (zero reduced cost), so each row in turn
  // moves to its lowest tight column that an alternating cycle can free.
  double scale = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) scale = std::max(scale, cost.row(i).cwiseAbs().maxCoeff());
  const double tol = 1e-11 * static_cast<double>(m) * scale;
  RowMajor reduced = cost;
  reduced.colwise() -= u;
  reduced.rowwise() -= v.transpose();
  const auto tight = [&](Eigen::Index i, Eigen::Index j) { return reduced(i, j) <= tol; };

  std::vector<Eigen::Index> via(static_cast<std::size_t>(m));
  std::vector<char> good(static_cast<std::size_t>(m));
  std::vector<Eigen::Index> queue;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index cur = col4row[static_cast<std::size_t>(i)];
    bool candidate = false;
    for (Eigen::Index j = 0; j < cur && !candidate; ++j) candidate = tight(i, j);
    if (!candidate) continue;

    std::fill(good.begin(), good.end(), 0);
    good[static_cast<std::size_t>(cur)] = 1;
    queue.assign(1, cur);
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const Eigen::Index g = queue[q];
      for (Eigen::Index r = i + 1; r < m; ++r) {
        const Eigen::Index c = col4row[static_cast<std::size_t>(r)];
        if (good[static_cast<std::size_t>(c)] || !tight(r, g)) continue;
        good[static_cast<std::size_t>(c)] = 1;
        via[static_cast<std::size_t>(c)] = g;
        queue.push_back(c);
      }
    }
    Eigen::Index target = -1;
    for (Eigen::Index j = 0; j < cur; ++j) {
      if (good[static_cast<std::size_t>(j)] && tight(i, j)) {
        target = j;
        break;
      }
    }
    if (target == -1) continue;

    Eigen::Index c = target;
    Eigen::Index moving = i;
    while (true) {
      const Eigen::Index holder = row4col[static_cast<std::size_t>(c)];
      col4row[static_cast<std::size_t>(moving)] = c;
      row4col[static_cast<std::size_t>(c)] = moving;
      if (c == cur) break;
      moving = holder;
      c = via[static_cast<std::size_t>(c)];
    }
  }

  out.col_of_row.resize(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = col4row[static_cast<std::size_t>(i)];
    out.col_of_row[static_cast<std::size_t>(i)] = static_cast<int>(j);
    out.total += cost_in(i, j);
  }
  return out;
}

}  // namespace lsgm
