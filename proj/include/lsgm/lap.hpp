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

#include <vector>

#include <Eigen/Dense>

namespace lsgm {

struct Assignment {
  std::vector<int> col_of_row;
  double total = 0.0;
};

// Exact linear assignment on a square cost matrix by shortest augmenting
// paths (Jonker-Volgenant family), O(m^3). Among optimal assignments the
// lexicographically smallest col_of_row is returned (ties measured on the
// reduced costs with a small relative tolerance). Throws NumericalError on
// non-finite entries.
Assignment lap_solve(const Eigen::MatrixXd& cost, bool maximize = false);

}  // namespace lsgm
