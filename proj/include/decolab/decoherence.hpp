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

// The persistent operator system S = P(A), its product a o b = P(ab), and the
// checks deciding whether the channel acts on (S, o) as a *-automorphism.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decolab/spectral.hpp"

namespace decolab {

struct Expansion {
  CVector coefficients;
  double residual = 0.0;  ///< ||vec(x) - B c||_2
};

/// Basis of S = P(A). Element 0 is exactly the unit; the others are
/// selfadjoint and Frobenius-orthonormal whenever S = S^*.
class PersistentSystem {
 public:
  PersistentSystem(AlgebraShape shape, std::vector<AlgebraElement> basis,
                   CMatrix p_projection);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<AlgebraElement>& basis() const { return basis_; }
  const CMatrix& p_projection() const { return p_; }
  /// D x d, column i = vec(basis[i]).
  const CMatrix& stacked() const { return stacked_; }
  std::size_t dim() const { return basis_.size(); }

  Expansion expand(const AlgebraElement& x) const;
  Expansion expand_vec(const CVector& v) const;
  AlgebraElement element(const CVector& coefficients) const;

  /// Column i = coefficients of basis[i]^*; coefficients(x^*) = A conj(c).
  const CMatrix& adjoint_matrix() const { return adjoint_; }
  /// max_i of the expansion residual of basis[i]^*.
  double adjoint_residual() const { return adjoint_residual_; }
  /// Smallest singular value of the Frobenius-normalized stacked basis.
  double min_singular() const { return min_singular_; }
  bool selfadjoint_basis() const { return selfadjoint_; }

 private:
  AlgebraShape shape_;
  std::vector<AlgebraElement> basis_;
  CMatrix p_;
  CMatrix stacked_;
  CMatrix pinv_;
  CMatrix adjoint_;
  double adjoint_residual_ = 0.0;
  double min_singular_ = 0.0;
  bool selfadjoint_ = true;
};

/// Throws InputError when P 1 != 1 (non-unital or mis-split input).
PersistentSystem persistent_system(const Channel& ch, const SpectralSplit& split);

struct ProductResult {
  AlgebraElement element;
  CVector coefficients;
};

/// a o b = P(ab). Throws InputError when a or b is not in S.
ProductResult choi_effros_product(const PersistentSystem& sys,
                                  const AlgebraElement& a,
                                  const AlgebraElement& b);

/// e_i o e_j = sum_k c(i, j, k) e_k.
class ProductTable {
 public:
  explicit ProductTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  Complex& at(std::size_t i, std::size_t j, std::size_t k) {
    return c_[(i * dim_ + j) * dim_ + k];
  }
  Complex at(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * dim_ + j) * dim_ + k];
  }
  /// Product of two coefficient vectors.
  CVector multiply(const CVector& a, const CVector& b) const;
  /// Matrix of y -> a o y in coefficient coordinates.
  CMatrix left_regular(const CVector& a) const;

  /// Worst least-squares residual met while tabulating.
  double expansion_residual = 0.0;

 private:
  std::size_t dim_;
  std::vector<Complex> c_;
};

/// Throws NumericalError when some P(e_i e_j) leaves S by more than 1e-9.
ProductTable product_table(const PersistentSystem& sys);

struct CstarCertificate {
  double associativity = 0.0;
  double unit = 0.0;
  double involution = 0.0;
  /// max |‖x^* o x‖ - ‖x‖^2| over sampled unit-norm x, original norm.
  double cstar_identity = 0.0;
  /// Most negative (or most non-real) eigenvalue of L(x^* o x), normalized.
  double positivity = 0.0;
  bool associativity_ok = false;
  bool unit_ok = false;
  bool involution_ok = false;
  bool cstar_identity_ok = false;
  bool positivity_ok = false;
  bool passed = false;
  /// C*-identity residual under the left-regular norm; computed only when
  /// the original norm fails while associativity holds.
  std::optional<double> regular_norm_cstar_identity;
  std::string note;
};

CstarCertificate certify_cstar(const PersistentSystem& sys,
                               const ProductTable& table,
                               std::uint64_t seed = 0,
                               std::size_t samples = 500);

struct AutomorphismCertificate {
  /// d x d matrix of Phi on the basis of S.
  CMatrix restriction;
  double invariance_residual = 0.0;  ///< Phi(S) inside S
  double condition_number = 0.0;
  bool invertible = false;
  double multiplicativity = 0.0;
  double involution = 0.0;
  double isometry = 0.0;  ///< max |‖Phi x‖ - ‖x‖| over sampled unit-norm x
  bool isometry_ok = false;
  /// invertible, Phi(S) = S, multiplicative and *-preserving, all to 1e-8.
  bool passed = false;
};

AutomorphismCertificate certify_automorphism(const Channel& ch,
                                             const PersistentSystem& sys,
                                             const ProductTable& table,
                                             std::uint64_t seed = 0,
                                             std::size_t samples = 500);

struct MultiplicativeDomain {
  std::vector<AlgebraElement> basis;
  CMatrix stacked;  ///< D x dim, orthonormal columns
  double validation_residual = 0.0;
  /// Largest power whose constraints still shrank the domain.
  std::size_t powers = 1;
  std::size_t dim() const { return basis.size(); }
};

/// {x : Phi(xy) = Phi(x)Phi(y), Phi(yx) = Phi(y)Phi(x) for all y}, valid for
/// unital CP maps. Throws InputError when the quadratic identities fail on
/// the result.
MultiplicativeDomain multiplicative_domain(const Channel& ch,
                                           double tol = tol::agreement);

/// Intersection of the multiplicative domains of Phi^n, n = 1..max_power
/// (default 2 D): the set on which every power is multiplicative. This is
/// the domain compared with S.
MultiplicativeDomain stable_multiplicative_domain(const Channel& ch,
                                                  double tol = tol::agreement,
                                                  std::size_t max_power = 0);

/// Dimension of {z : z o y = y o z for all y}.
std::size_t center_dimension(const ProductTable& table,
                             double tol = tol::agreement);

enum class Verdict {
  hamiltonian_persistent_part,
  operator_system_only,
  not_gapped,
  not_unital,
};

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct DecoherenceOptions {
  SpectralOptions spectral;
  DecayOptions decay;
  std::uint64_t seed = 0;
  std::size_t samples = 500;
};

struct DecoherenceReport {
  Verdict verdict = Verdict::operator_system_only;
  bool unital = false;
  /// Always filled, also when the split fails.
  std::vector<Complex> eigenvalues;
  double spectral_radius = 0.0;
  std::optional<SpectralSplit> split;
  std::optional<PersistentSystem> system;
  std::optional<CpWitness> p_completely_positive;
  std::optional<ProductTable> table;
  std::optional<CstarCertificate> cstar;
  std::optional<AutomorphismCertificate> automorphism;
  std::optional<MultiplicativeDomain> domain;         ///< of Phi alone
  std::optional<MultiplicativeDomain> stable_domain;  ///< of all powers
  /// Containment and equality of the stable domain in S.
  bool domain_in_S = false;
  bool domain_equals_S = false;
  std::optional<DecayProfile> decay;
  /// The inclusion of the stable domain in S is guaranteed when this state
  /// is faithful.
  std::optional<InvariantState> invariant_state;
  std::vector<std::string> notes;
};

/// Full pipeline; every failure mode maps to a verdict or a note.
DecoherenceReport decoherence_split(const Channel& ch,
                                    const DecoherenceOptions& options = {});

struct ProbeTrial {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool control = false;  ///< injected unitary conjugation
  std::size_t kraus_count = 0;
  double min_modulus = 0.0;
  bool survived = false;  ///< all |lambda| >= 1 - 1e-6
  double multiplicativity_residual = 0.0;
  bool automorphism = false;
  std::vector<CMatrix> kraus;
};

struct ProbeReport {
  std::size_t trials = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::size_t survivors = 0;
  std::size_t survivors_automorphic = 0;
  std::size_t controls = 0;
  std::size_t controls_passed = 0;
  std::vector<ProbeTrial> counterexamples;
};

/// Spectral filter and multiplicativity test for one channel.
ProbeTrial probe_channel(const Channel& ch);

/// Random unital Kraus channels on M_n; every tenth trial also injects a
/// Haar-random unitary conjugation as a control. Seeds per trial are derived
/// from `seed` so any counterexample can be replayed.
ProbeReport conjecture_probe(std::size_t trials, const AlgebraShape& shape,
                             std::uint64_t seed);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace decolab
