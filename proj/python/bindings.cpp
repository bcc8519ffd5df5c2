// Copyright 2026 The decolab Authors
//
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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "decolab/decoherence.hpp"
#include "decolab/error.hpp"
#include "decolab/examples.hpp"
#include "decolab/io.hpp"
#include "decolab/koopman.hpp"
#include "decolab/spectral.hpp"

namespace py = pybind11;
using namespace decolab;

namespace {

// JSON values cross the boundary as text; the Python side decodes them.
std::string report_text(const RunReport& r) {
  return report_to_json(r, false).dump();
}

py::dict split_dict(const SpectralSplit& s) {
  py::dict d;
  d["eigenvalues"] = s.eigenvalues;
  d["peripheral"] = s.peripheral;
  d["interior"] = s.interior;
  d["spectral_radius"] = s.spectral_radius;
  d["interior_radius"] = s.interior_radius;
  d["gap"] = s.gap;
  d["contour_radius"] = s.contour_radius;
  d["p"] = s.p_projection;
  d["q"] = s.q_projection;
  d["cross_check_discrepancy"] = s.cross_check_discrepancy;
  return d;
}

}  // namespace

PYBIND11_MODULE(_decolab, m) {
  m.doc() = "Spectral and decoherence analysis of unital completely positive maps";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError", base.ptr());
  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", base.ptr());
  py::register_exception<NotGappedError>(m, "NotGappedError", numerical.ptr());
  py::register_exception<InvariantError>(m, "InvariantError", base.ptr());

  py::class_<AlgebraShape>(m, "AlgebraShape")
      .def(py::init<std::vector<std::size_t>>(), py::arg("blocks"))
      .def_static("abelian", &AlgebraShape::abelian)
      .def_static("full", &AlgebraShape::full)
      .def_property_readonly("blocks", &AlgebraShape::block_dims)
      .def_property_readonly("element_dim", &AlgebraShape::element_dim)
      .def("__eq__", &AlgebraShape::operator==)
      .def("__repr__", [](const AlgebraShape& s) {
        std::string out = "AlgebraShape([";
        for (std::size_t k = 0; k < s.block_count(); ++k) {
          if (k) out += ", ";
          out += std::to_string(s.block_dim(k));
        }
        return out + "])";
      });

  py::class_<Channel>(m, "Channel")
      .def(py::init([](const AlgebraShape& shape, const CMatrix& superop) {
             return Channel(shape, superop, Provenance::raw);
           }),
           py::arg("shape"), py::arg("superop"))
      .def_property_readonly("shape", &Channel::shape)
      .def_property_readonly("superop", &Channel::superop)
      .def_property_readonly("provenance",
                             [](const Channel& c) { return to_string(c.provenance()); })
      .def("apply",
           [](const Channel& c, const std::vector<CMatrix>& blocks) {
             return c(AlgebraElement(c.shape(), blocks)).blocks();
           },
           py::arg("blocks"), "Apply the map to an element given by its blocks.");

  m.def("from_kraus",
        [](const std::vector<CMatrix>& ops) {
          if (ops.empty()) throw InputError("empty Kraus family");
          return from_kraus(KrausFamily{static_cast<std::size_t>(ops[0].rows()), ops});
        },
        py::arg("operators"));
  m.def("from_stochastic", &from_stochastic, py::arg("matrix"));
  m.def("lift_via_conditional_expectation", &lift_via_conditional_expectation,
        py::arg("matrix"));
  m.def("from_generator",
        [](const AlgebraShape& shape, const CMatrix& g, double dt) {
          return from_generator(GeneratorSpec{shape, g, dt});
        },
        py::arg("shape"), py::arg("generator"), py::arg("time_step"));
  m.def("lindblad_generator", &lindblad_generator, py::arg("n"),
        py::arg("hamiltonian"), py::arg("jumps"));
  m.def("koopman_channel",
        [](const std::vector<std::size_t>& t) { return koopman_channel(FiniteMap{t}); },
        py::arg("targets"));
  m.def("inner_automorphism", &inner_automorphism, py::arg("u"));
  m.def("identity_channel", &identity_channel, py::arg("shape"));
  m.def("power", &power, py::arg("channel"), py::arg("n"));
  m.def("compose", &compose, py::arg("a"), py::arg("b"));

  m.def("is_unital", &is_unital, py::arg("channel"), py::arg("tol") = tol::structural);
  m.def("is_completely_positive",
        [](const Channel& c, double t) {
          const CpWitness w = is_completely_positive(c, t);
          return py::make_tuple(w.completely_positive, w.min_eigenvalue);
        },
        py::arg("channel"), py::arg("tol") = tol::structural,
        "Return (completely_positive, min_choi_eigenvalue).");
  m.def("choi", [](const Channel& c) { return choi(c).entries; }, py::arg("channel"));

  m.def("eigenvalues", [](const CMatrix& a) { return eig(a).eigenvalues; }, py::arg("m"));
  m.def("operator_norm", &operator_norm, py::arg("m"));
  m.def("matrix_exp", &matrix_exp, py::arg("m"), py::arg("t") = 1.0);
  m.def("resolvent", &resolvent, py::arg("m"), py::arg("z"));
  m.def("contour_projection",
        [](const CMatrix& a, double radius, std::size_t nodes) {
          return contour_projection(a, ContourSpec{radius, nodes}).projection;
        },
        py::arg("m"), py::arg("radius"), py::arg("nodes") = 16);

  m.def("analyze_spectrum",
        [](const Channel& c, double eps) {
          SpectralOptions o;
          o.epsilon_ph = eps;
          return split_dict(analyze_spectrum(c, o));
        },
        py::arg("channel"), py::arg("epsilon_ph") = 1e-8);

  m.def("cycle_structure",
        [](const std::vector<std::size_t>& t) {
          const CycleStructure cs = cycle_structure(FiniteMap{t});
          py::dict d;
          d["cycles"] = cs.cycles;
          d["tail_lengths"] = cs.tail_lengths;
          d["eventual_image"] = cs.eventual_image;
          d["stabilization_index"] = cs.stabilization_index;
          d["predicted_spectrum"] = cs.predicted_spectrum;
          return d;
        },
        py::arg("targets"));

  m.def("decoherence_verdict",
        [](const Channel& c, std::uint64_t seed) {
          DecoherenceOptions o;
          o.seed = seed;
          o.decay.seed = seed;
          return to_string(decoherence_split(c, o).verdict);
        },
        py::arg("channel"), py::arg("seed") = 0);

  m.def("analyze_json",
        [](const std::string& text) { return report_text(run_analysis(parse_input_text(text))); },
        py::arg("text"), "Run the full pipeline on a JSON input document.");
  m.def("example_names", &builtin_example_names);
  m.def("run_example",
        [](const std::string& name, double a, double b, double delta, std::uint64_t seed) {
          InputSpec spec = builtin_example(name, ExampleParams{a, b, delta});
          spec.options.seed = seed;
          return report_text(run_analysis(spec));
        },
        py::arg("name"), py::arg("a") = 0.5, py::arg("b") = 0.25, py::arg("delta") = 1.0,
        py::arg("seed") = 0);

  m.def("conjecture_probe",
        [](std::size_t trials, std::size_t n, std::uint64_t seed) {
          const ProbeReport r = conjecture_probe(trials, AlgebraShape::full(n), seed);
          py::dict d;
          d["trials"] = r.trials;
          d["survivors"] = r.survivors;
          d["survivors_automorphic"] = r.survivors_automorphic;
          d["controls"] = r.controls;
          d["controls_passed"] = r.controls_passed;
          d["counterexamples"] = r.counterexamples.size();
          return d;
        },
        py::arg("trials"), py::arg("n"), py::arg("seed") = 0);
}
