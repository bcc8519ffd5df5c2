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

// Linear maps on finite-dimensional C*-algebras as D x D superoperators.

#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "decolab/algebra.hpp"

namespace decolab {

enum class Provenance { kraus, stochastic, koopman, lifted, generator_exp, raw };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// A linear map on the algebra; `superop` acts on vec coordinates.
///
/// Every provenance except `raw` is checked on construction to be a real map,
/// vec(Phi(x^*)) = vec(Phi(x)^*) on the matrix-unit basis.
class Channel {
 public:
  Channel(AlgebraShape shape, CMatrix superop, Provenance provenance);

  const AlgebraShape& shape() const { return shape_; }
  const CMatrix& superop() const { return superop_; }
  Provenance provenance() const { return provenance_; }

  AlgebraElement operator()(const AlgebraElement& x) const;

  /// max over matrix units e of ||vec(Phi(e^*)) - vec(Phi(e)^*)||.
  double realness_residual() const;

 private:
  AlgebraShape shape_;
  CMatrix superop_;
  Provenance provenance_;
};

/// Phi(A) = sum_i V_i^* A V_i on a single block M_n.
struct KrausFamily {
  std::size_t dim = 0;
  std::vector<CMatrix> operators;
};

/// Superoperator generator L with Phi = exp(time_step * L).
struct GeneratorSpec {
  AlgebraShape shape;
  CMatrix generator;
  double time_step = 1.0;
};

struct ChoiMatrix {
  std::size_t dim = 0;
  /// n^2 x n^2, block (i, j) = Phi(E_ij).
  CMatrix entries;
};

struct CpWitness {
  bool completely_positive = false;
  double min_eigenvalue = 0.0;
  CVector eigenvector;
  double choi_norm = 0.0;
  /// ||C - C^*||_F; non-real maps have non-selfadjoint Choi matrices.
  double selfadjoint_residual = 0.0;
};

Channel identity_channel(const AlgebraShape& shape);

Channel from_kraus(const KrausFamily& family);

/// Row-stochastic t acting on C^m as v -> t v.
Channel from_stochastic(const RMatrix& t);

/// t composed with the diagonal conditional expectation M_m -> C^m.
Channel lift_via_conditional_expectation(const RMatrix& t);

/// exp(+time_step * generator). Callers holding e^{-tA} pass -A.
Channel from_generator(const GeneratorSpec& spec);

/// Heisenberg-picture Lindblad generator on M_n:
///   L(A) = i[H, A] + sum_k (K_k^* A K_k - 1/2 {K_k^* K_k, A}).
CMatrix lindblad_generator(std::size_t n, const CMatrix& hamiltonian,
                           const std::vector<CMatrix>& jumps);

ChoiMatrix choi(const Channel& ch);

/// Choi test; multi-block maps are first extended to M_N through the
/// block-diagonal conditional expectation M_N -> A.
CpWitness is_completely_positive(const Channel& ch,
                                 double tol = tol::structural);

bool is_unital(const Channel& ch, double tol = tol::structural);

Channel power(const Channel& ch, std::size_t n);
/// (a o b)(x) = a(b(x)).
Channel compose(const Channel& a, const Channel& b);

void validate_stochastic(const RMatrix& t);

/// Random unital Kraus family: Gaussian V_i, then V_i <- V_i M^{-1/2} with
/// M = sum V_i^* V_i, so that sum V_i^* V_i = I.
KrausFamily random_unital_kraus(std::size_t n, std::size_t count,
                                std::mt19937_64& rng);

/// x -> U^* x U on M_n.
Channel inner_automorphism(const CMatrix& u);

}  // namespace decolab
