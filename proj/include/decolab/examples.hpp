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

// Built-in example channels.

#pragma once

#include <string>
#include <vector>

#include "decolab/io.hpp"

namespace decolab {

struct ExampleParams {
  double a = 0.5;
  double b = 0.25;
  double delta = 1.0;
};

/// [[a, b, 1-a-b], [0, 0, 1], [0, 1, 0]]; spectrum {a, -1, 1}.
RMatrix markov1_matrix(double a, double b);
/// [[0, 0, 1], [0, 1-a, a], [1, 0, 0]]; spectrum {1, -1, 1-a}.
RMatrix markov2_matrix(double a);
/// V1 = E_12, V2 = E_21 on M_2: Phi(A) = diag(A_22, A_11).
KrausFamily kraus2_family();
/// Jump K = |e2><e1| on M_3, no Hamiltonian.
CMatrix csu_generator();
/// 0 -> 1 -> 2 -> 0, 3 -> 0, 4 -> 3.
FiniteMap koopman_demo_map();

std::vector<std::string> builtin_example_names();

/// Throws InputError for unknown names or invalid parameters.
InputSpec builtin_example(const std::string& name, const ExampleParams& params = {});

}  // namespace decolab
