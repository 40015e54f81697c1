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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lsgm/errors.hpp"
#include "lsgm/graph.hpp"
#include "lsgm/lap.hpp"
#include "lsgm/match.hpp"
#include "lsgm/pipeline.hpp"
#include "lsgm/seedsel.hpp"

namespace py = pybind11;
using namespace lsgm;

namespace {

SeedSet to_seeds(const std::vector<std::pair<Vertex, Vertex>>& pairs) { return SeedSet{pairs}; }

py::dict result_dict(const LsgmResult& r) {
  py::dict out;
  out["alignment"] = r.matching.alignment;
  out["objective"] = r.matching.objective;
  out["d"] = r.d;
  out["k"] = r.k;
  out["accuracy"] = r.accuracy ? py::cast(*r.accuracy) : py::none();
  out["consistency"] = r.consistency ? py::cast(*r.consistency) : py::none();
  out["warnings"] = r.warnings;
  py::dict times;
  times["embed"] = r.times.embed;
  times["procrustes"] = r.times.procrustes;
  times["cluster"] = r.times.cluster;
  times["match"] = r.times.match;
  out["times"] = times;
  return out;
}

}  // namespace

PYBIND11_MODULE(_lsgm, m) {
  m.doc() = "Seeded graph matching via joint embedding and clustering";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<SparseGraph>(m, "Graph")
      .def(py::init([](int n, const std::vector<Edge>& edges) { return SparseGraph(n, edges); }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("num_vertices", &SparseGraph::num_vertices)
      .def_property_readonly("num_edges", &SparseGraph::num_edges)
      .def("edges", &SparseGraph::edges)
      .def("has_edge", &SparseGraph::has_edge)
      .def("dense_adjacency", &SparseGraph::dense_adjacency)
      .def("permuted", [](const SparseGraph& g, const Permutation& p) { return apply_permutation(g, p); })
      .def("__eq__", [](const SparseGraph& a, const SparseGraph& b) { return a == b; });

  m.def("load_edge_list", [](const std::string& path) { return load_edge_list(path); });

  m.def(
      "correlated_sbm",
      [](const std::vector<int>& block_sizes, const Eigen::MatrixXd& probs, double rho, std::uint64_t seed) {
        CorrelatedPair pair = generate_correlated_sbm(SbmParams::from_probabilities(block_sizes, probs), rho, seed);
        return py::make_tuple(pair.g1, pair.g2, pair.truth);
      },
      py::arg("block_sizes"), py::arg("probs"), py::arg("rho"), py::arg("seed") = 0,
      "Returns (g1, g2, truth) with truth[v] the g2 partner of g1 vertex v.");

  m.def(
      "lsgm",
      [](const SparseGraph& a, const SparseGraph& b, const std::vector<std::pair<Vertex, Vertex>>& seeds,
         std::optional<int> d, std::optional<int> k, int max_cluster_size, int workers, std::uint64_t rng_seed,
         const std::vector<Vertex>& truth) {
        LsgmConfig config;
        config.d = d;
        config.k = k;
        config.max_cluster_size = max_cluster_size;
        config.workers = workers;
        config.rng_seed = rng_seed;
        LsgmResult r;
        {
          py::gil_scoped_release release;
          r = lsgm::lsgm(a, b, to_seeds(seeds), config, truth);
        }
        return result_dict(r);
      },
      py::arg("g1"), py::arg("g2"), py::arg("seeds"), py::arg("d") = py::none(), py::arg("k") = py::none(),
      py::arg("max_cluster_size") = 800, py::arg("workers") = 1, py::arg("rng_seed") = 0,
      py::arg("truth") = std::vector<Vertex>{});

  m.def(
      "sgm",
      [](const SparseGraph& a, const SparseGraph& b, const std::vector<std::pair<Vertex, Vertex>>& seeds) {
        const Matching r = sgm_match(a, b, to_seeds(seeds));
        return py::make_tuple(r.alignment, r.objective);
      },
      py::arg("g1"), py::arg("g2"), py::arg("seeds"));

  m.def("edge_disagreements", [](const SparseGraph& a, const SparseGraph& b, const std::vector<Vertex>& alignment) {
    return edge_disagreements(a, b, alignment);
  });

  m.def(
      "lap_solve",
      [](const Eigen::MatrixXd& cost, bool maximize) {
        const Assignment r = lap_solve(cost, maximize);
        return py::make_tuple(r.col_of_row, r.total);
      },
      py::arg("cost"), py::arg("maximize") = false);

  m.def(
      "select_seeds",
      [](const BinaryMatrix& b1, const BinaryMatrix& b2, int budget) {
        const SeedSelection s = select_seeds(b1, b2, budget);
        return py::make_tuple(s.order, s.maximizers);
      },
      py::arg("block1"), py::arg("block2"), py::arg("budget"));
}
