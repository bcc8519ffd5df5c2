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

// Peripheral / interior splitting of a channel's spectrum, the Riesz
// projections Q (interior) and P = I - Q (peripheral), and the evidence that
// the interior part decays.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "decolab/channel.hpp"

namespace decolab {

struct SpectralOptions {
  /// |lambda| >= 1 - epsilon_ph counts as peripheral.
  double epsilon_ph = 1e-8;
  /// Starting node count for the contour cross-check.
  std::size_t contour_nodes = 16;
};

struct SpectralSplit {
  std::vector<Complex> eigenvalues;
  std::vector<Complex> peripheral;
  std::vector<Complex> interior;
  double spectral_radius = 0.0;
  double interior_radius = 0.0;
  double gap = 0.0;
  double epsilon_ph = 0.0;
  /// Midpoint of the gap; the circle separating the two parts.
  double contour_radius = 0.0;
  CMatrix q_projection;
  CMatrix p_projection;
  /// ||Q_contour - Q_schur||_F, absent when the quadrature failed.
  std::optional<double> cross_check_discrepancy;
  std::size_t contour_nodes = 0;
  std::string cross_check_note;

  std::size_t rank_p() const { return peripheral.size(); }
  std::size_t rank_q() const { return interior.size(); }
};

/// Throws NotGappedError when gap <= 2 epsilon_ph and InputError when the
/// spectral radius exceeds 1 + 1e-8.
SpectralSplit analyze_spectrum(const Channel& ch,
                               const SpectralOptions& options = {});

struct PowerLimit {
  CMatrix limit;
  /// Smallest m with lambda^m = 1 on the peripheral spectrum.
  std::size_t period = 0;
  /// j at which ||Phi^{m(j+1)} - Phi^{mj}||_F <= 1e-10.
  std::size_t iterations = 0;
  double step_residual = 0.0;
  /// ||limit - P||_F against the Riesz projection of the split.
  double split_residual = 0.0;
};

/// lim_j Phi^{m j}. Throws NumericalError when no root-of-unity order
/// m <= max_power exists (irrational peripheral phases; use split.p_projection).
PowerLimit power_limit_projection(const Channel& ch, const SpectralSplit& split,
                                  std::size_t max_power = 720);

struct DecayOptions {
  std::size_t n_max = 25;
  std::size_t tail_start = 5;
  std::size_t random_samples = 200;
  std::uint64_t seed = 0;
  std::size_t resolvent_nodes = 256;
};

struct DecayProfile {
  /// s_n: sampled lower bound of the induced norm of Phi^n Q, n = 0..n_max.
  std::vector<double> lower;
  /// sqrt(D) * sigma_max(Phi^n Q), an upper bound of the same norm.
  std::vector<double> upper;
  /// C r^{n+1}.
  std::vector<double> resolvent_bound;
  std::optional<double> slope;  ///< least-squares slope of log s_n on the tail
  double slope_limit = 0.0;     ///< log(interior_radius) + 0.05
  bool slope_ok = false;
  double radius = 0.0;           ///< r
  double resolvent_constant = 0.0;  ///< C = sqrt(D) max_{|z|=r} sigma_max(R(z))
  bool bound_ok = false;
  std::size_t tail_start = 0;
  /// Interior spectrum is numerically {0}: the slope test is replaced by
  /// s_n <= 1e-12 max(1, s_0) on the tail.
  bool nilpotent_interior = false;
};

DecayProfile transient_decay(const Channel& ch, const SpectralSplit& split,
                             const DecayOptions& options = {});

struct EventualRange {
  CMatrix basis;  ///< orthonormal columns in vec coordinates
  std::size_t stabilization_index = 0;
  std::vector<std::size_t> ranks;  ///< rank of Phi^n for n = 0..n0+1
  /// Smallest singular value of Phi restricted to the range.
  double restricted_min_singular = 0.0;
};

/// Intersection of the ranges Phi^n(A). Throws NumericalError when a
/// normalized singular value falls inside the ambiguity band
/// (1e-2 tol, 1e2 tol).
EventualRange eventual_range(const Channel& ch, double tol = tol::agreement);

struct EndomorphismVerdict {
  double multiplicativity_residual = 0.0;
  double worst_distance = 0.0;  ///< max_i min(|l_i|, ||l_i| - 1|)
  bool spectrum_ok = false;     ///< worst_distance <= 1e-6
  bool injective = false;
  bool all_unimodular = false;
  /// spectrum_ok, and injective implies all |lambda| = 1.
  bool consistent = false;
};

/// Throws InputError when ch is not multiplicative on the matrix units.
EndomorphismVerdict endomorphism_spectrum_check(const Channel& ch,
                                                double tol = tol::agreement);

struct InvariantState {
  /// Invariant state of maximal support: the eigenvalue-1 spectral
  /// projection of the dual map applied to the normalized trace.
  AlgebraElement density;
  double min_eigenvalue = 0.0;  ///< smallest eigenvalue over all blocks
  bool faithful = false;        ///< min_eigenvalue > tol * max eigenvalue
};

/// Requires a unital channel. Throws InputError otherwise.
InvariantState maximal_invariant_state(const Channel& ch,
                                       double tol = tol::agreement);

/// max over the samples of ||op x||, samples taken to have norm 1.
double induced_norm_lower(const AlgebraShape& shape, const CMatrix& op,
                          const std::vector<CVector>& unit_samples);

/// Matrix units plus `random_count` random elements scaled to norm 1.
std::vector<CVector> unit_norm_samples(const AlgebraShape& shape,
                                       std::size_t random_count,
                                       std::uint64_t seed);

}  // namespace decolab
