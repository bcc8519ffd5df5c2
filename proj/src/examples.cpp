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

#include "decolab/examples.hpp"

#include <cmath>

#include "decolab/error.hpp"

namespace decolab {

namespace {

void check_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw InputError(std::string("example parameter ") + name + " must lie in [0, 1]");
  }
}

}  // namespace

RMatrix markov1_matrix(double a, double b) {
  check_unit_interval(a, "a");
  check_unit_interval(b, "b");
  if (a + b > 1.0) throw InputError("example parameters: a + b must not exceed 1");
  RMatrix t(3, 3);
  t << a, b, 1.0 - a - b,  //
      0.0, 0.0, 1.0,       //
      0.0, 1.0, 0.0;
  return t;
}

RMatrix markov2_matrix(double a) {
  check_unit_interval(a, "a");
  RMatrix t(3, 3);
  t << 0.0, 0.0, 1.0,    //
      0.0, 1.0 - a, a,   //
      1.0, 0.0, 0.0;
  return t;
}

KrausFamily kraus2_family() {
  CMatrix v1 = CMatrix::Zero(2, 2);
  CMatrix v2 = CMatrix::Zero(2, 2);
  v1(0, 1) = 1.0;
  v2(1, 0) = 1.0;
  return KrausFamily{2, {v1, v2}};
}

CMatrix csu_generator() {
  CMatrix k = CMatrix::Zero(3, 3);
  k(1, 0) = 1.0;
  return lindblad_generator(3, CMatrix::Zero(3, 3), {k});
}

FiniteMap koopman_demo_map() { return FiniteMap{{1, 2, 0, 0, 3}}; }

std::vector<std::string> builtin_example_names() {
  return {"markov1",        "markov2",       "kraus2",      "lifted-markov1",
          "lifted-markov2", "csu-generator", "koopman-demo"};
}

InputSpec builtin_example(const std::string& name, const ExampleParams& params) {
  InputSpec spec;
  if (name == "markov1" || name == "lifted-markov1") {
    spec.kind = name == "markov1" ? MapKind::stochastic : MapKind::lifted;
    spec.real_matrix = markov1_matrix(params.a, params.b);
  } else if (name == "markov2" || name == "lifted-markov2") {
    spec.kind = name == "markov2" ? MapKind::stochastic : MapKind::lifted;
    spec.real_matrix = markov2_matrix(params.a);
  } else if (name == "kraus2") {
    spec.kind = MapKind::kraus;
    spec.kraus = kraus2_family().operators;
    spec.algebra = AlgebraShape::full(2);
    return spec;
  } else if (name == "csu-generator") {
    if (!(params.delta > 0.0) || !std::isfinite(params.delta)) {
      throw InputError("example parameter delta must be positive");
    }
    spec.kind = MapKind::generator;
    spec.lindblad = true;
    spec.hamiltonian = CMatrix::Zero(3, 3);
    CMatrix k = CMatrix::Zero(3, 3);
    k(1, 0) = 1.0;
    spec.jumps = {k};
    spec.time_step = params.delta;
    spec.algebra = AlgebraShape::full(3);
    return spec;
  } else if (name == "koopman-demo") {
    spec.kind = MapKind::koopman;
    spec.targets = koopman_demo_map().targets;
    spec.algebra = AlgebraShape::abelian(spec.targets.size());
    return spec;
  } else {
    throw InputError("unknown example '" + name + "'");
  }
  const auto m = static_cast<std::size_t>(spec.real_matrix.rows());
  spec.algebra = spec.kind == MapKind::stochastic ? AlgebraShape::abelian(m)
                                                  : AlgebraShape::full(m);
  return spec;
}

}  // namespace decolab
