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

#include "decolab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "decolab/error.hpp"

namespace decolab {

using Index = Eigen::Index;

SpectralSplit analyze_spectrum(const Channel& ch,
                               const SpectralOptions& options) {
  if (!(options.epsilon_ph > 0.0) || options.epsilon_ph >= 0.5) {
    throw InputError("analyze_spectrum: epsilon_ph must lie in (0, 0.5)");
  }
  const CMatrix& s = ch.superop();
  const auto d = s.rows();
  SpectralSplit split;
  split.epsilon_ph = options.epsilon_ph;
  split.eigenvalues = eig(s).eigenvalues;
  for (const Complex z : split.eigenvalues) {
    const double mag = std::abs(z);
    split.spectral_radius = std::max(split.spectral_radius, mag);
    if (mag >= 1.0 - options.epsilon_ph) {
      split.peripheral.push_back(z);
    } else {
      split.interior.push_back(z);
      split.interior_radius = std::max(split.interior_radius, mag);
    }
  }
  if (split.spectral_radius > 1.0 + 1e-8) {
    std::ostringstream os;
    os << "spectral radius " << split.spectral_radius
       << " exceeds 1; not a contraction";
    throw InputError(os.str());
  }
  split.gap = 1.0 - split.interior_radius;
  if (split.gap <= 2.0 * options.epsilon_ph) {
    std::ostringstream os;
    os << "not gapped: interior radius " << split.interior_radius
       << " is within 2 epsilon_ph of the unit circle";
    throw NotGappedError(os.str());
  }
  split.contour_radius = 0.5 * (split.interior_radius + 1.0);

  const InvariantSubspace inner =
      schur_subspace(s, SpectralRegion::inside_circle(split.contour_radius));
  if (inner.kept_eigenvalues.size() != split.interior.size()) {
    throw InvariantError(
        "analyze_spectrum: Schur form and eigenvalue solve disagree on the "
        "interior count");
  }
  split.q_projection = inner.projection;
  split.p_projection = CMatrix::Identity(d, d) - inner.projection;

  try {
    const ContourProjection contour = contour_projection(
        s, ContourSpec{split.contour_radius, options.contour_nodes});
    split.cross_check_discrepancy =
        (contour.projection - split.q_projection).norm();
    split.contour_nodes = contour.nodes;
  } catch (const NumericalError& e) {
    split.cross_check_note = e.what();
  }
  return split;
}

PowerLimit power_limit_projection(const Channel& ch, const SpectralSplit& split,
                                  std::size_t max_power) {
  std::size_t period = 0;
  for (std::size_t m = 1; m <= max_power && period == 0; ++m) {
    bool all = true;
    for (const Complex z : split.peripheral) {
      if (std::abs(std::pow(z, static_cast<double>(m)) - 1.0) > tol::agreement) {
        all = false;
        break;
      }
    }
    if (all) period = m;
  }
  if (period == 0) {
    std::ostringstream os;
    os << "power_limit_projection: peripheral phases have no common "
          "root-of-unity order <= "
       << max_power;
    throw NumericalError(os.str());
  }

  constexpr std::size_t kMaxIterations = 100000;
  const CMatrix step = power(ch, period).superop();
  PowerLimit out;
  out.period = period;
  CMatrix current = step;
  for (std::size_t j = 1; j <= kMaxIterations; ++j) {
    CMatrix next = current * step;
    const double diff = (next - current).norm();
    current = std::move(next);
    if (diff <= tol::structural) {
      out.iterations = j;
      out.step_residual = diff;
      out.limit = std::move(current);
      out.split_residual = (out.limit - split.p_projection).norm();
      return out;
    }
  }
  throw NumericalError(
      "power_limit_projection: powers did not settle within 1e5 steps");
}

std::vector<CVector> unit_norm_samples(const AlgebraShape& shape,
                                       std::size_t random_count,
                                       std::uint64_t seed) {
  std::vector<CVector> samples;
  for (const auto& e : matrix_unit_basis(shape)) samples.push_back(e.vec());
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < random_count; ++i) {
    const AlgebraElement x = random_element(shape, rng);
    samples.push_back(x.vec() / norm(x));
  }
  return samples;
}

double induced_norm_lower(const AlgebraShape& shape, const CMatrix& op,
                          const std::vector<CVector>& unit_samples) {
  double best = 0.0;
  for (const auto& v : unit_samples) {
    best = std::max(best, norm(AlgebraElement::from_vec(shape, op * v)));
  }
  return best;
}

DecayProfile transient_decay(const Channel& ch, const SpectralSplit& split,
                             const DecayOptions& options) {
  if (split.gap <= 2.0 * split.epsilon_ph) {
    throw NotGappedError("transient_decay: split is not gapped");
  }
  if (options.tail_start > options.n_max) {
    throw InputError("transient_decay: tail_start exceeds n_max");
  }
  const AlgebraShape& shape = ch.shape();
  const auto samples =
      unit_norm_samples(shape, options.random_samples, options.seed);
  const double root_d = std::sqrt(static_cast<double>(shape.element_dim()));

  DecayProfile out;
  out.tail_start = options.tail_start;
  out.radius = split.contour_radius;

  // Phi^n Q = (S Q)^n Q keeps the peripheral rounding error of Q from being
  // re-amplified by the unimodular part of S.
  const CMatrix& q = split.q_projection;
  const CMatrix sq = ch.superop() * q;
  CMatrix current = q;
  for (std::size_t n = 0; n <= options.n_max; ++n) {
    out.lower.push_back(induced_norm_lower(shape, current, samples));
    out.upper.push_back(root_d * operator_norm(current));
    current = sq * current;
  }

  double worst_resolvent = 0.0;
  const double step =
      2.0 * std::numbers::pi / static_cast<double>(options.resolvent_nodes);
  for (std::size_t k = 0; k < options.resolvent_nodes; ++k) {
    const Complex z = std::polar(out.radius, step * static_cast<double>(k));
    worst_resolvent =
        std::max(worst_resolvent, operator_norm(resolvent(ch.superop(), z)));
  }
  out.resolvent_constant = root_d * worst_resolvent;
  out.bound_ok = true;
  for (std::size_t n = 0; n <= options.n_max; ++n) {
    const double bound =
        out.resolvent_constant * std::pow(out.radius, static_cast<double>(n + 1));
    out.resolvent_bound.push_back(bound);
    if (out.lower[n] > bound) out.bound_ok = false;
  }

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t n = options.tail_start; n <= options.n_max; ++n) {
    if (out.lower[n] > 1e-250) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(std::log(out.lower[n]));
    }
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.slope = sxy / sxx;
  }

  out.nilpotent_interior = split.interior_radius < 1e-12;
  if (out.nilpotent_interior) {
    out.slope_limit = -std::numeric_limits<double>::infinity();
    const double floor = 1e-12 * std::max(1.0, out.lower.front());
    out.slope_ok = std::all_of(out.lower.begin() + options.tail_start,
                               out.lower.end(),
                               [floor](double v) { return v <= floor; });
  } else {
    out.slope_limit = std::log(split.interior_radius) + 0.05;
    out.slope_ok = !out.slope || *out.slope <= out.slope_limit;
  }
  return out;
}

namespace {

std::size_t decide_rank(const CMatrix& m, double tol, std::size_t power_index) {
  const auto s = singular_values(m);
  if (s.empty() || s.front() == 0.0) return 0;
  std::size_t rank = 0;
  for (const double v : s) {
    const double rel = v / s.front();
    if (rel > 1e-2 * tol && rel < 1e2 * tol) {
      std::ostringstream os;
      os << "eventual_range: rank of Phi^" << power_index
         << " is ambiguous (normalized singular value " << rel
         << " near tolerance " << tol << ")";
      throw NumericalError(os.str());
    }
    if (rel > tol) ++rank;
  }
  return rank;
}

}  // namespace

EventualRange eventual_range(const Channel& ch, double tol) {
  const CMatrix& s = ch.superop();
  const Index d = s.rows();
  EventualRange out;
  CMatrix current = CMatrix::Identity(d, d);
  out.ranks.push_back(static_cast<std::size_t>(d));
  for (std::size_t n = 0;; ++n) {
    CMatrix next = s * current;
    out.ranks.push_back(decide_rank(next, tol, n + 1));
    if (out.ranks[n + 1] == out.ranks[n]) {
      out.stabilization_index = n;
      out.basis = range_basis(current, tol);
      break;
    }
    if (n > static_cast<std::size_t>(d)) {
      throw InvariantError("eventual_range: ranks failed to stabilize");
    }
    current = std::move(next);
  }
  if (out.basis.cols() == 0) return out;
  const CMatrix restricted = out.basis.adjoint() * s * out.basis;
  const double leak = (s * out.basis - out.basis * restricted).norm();
  if (leak > tol * std::max(1.0, s.norm())) {
    throw InvariantError("eventual_range: range is not invariant");
  }
  const auto sv = singular_values(restricted);
  out.restricted_min_singular = sv.back();
  if (!(out.restricted_min_singular > tol * std::max(1.0, sv.front()))) {
    throw InvariantError("eventual_range: map is not bijective on the range");
  }
  return out;
}

EndomorphismVerdict endomorphism_spectrum_check(const Channel& ch, double tol) {
  const auto basis = matrix_unit_basis(ch.shape());
  EndomorphismVerdict out;
  std::vector<AlgebraElement> images;
  images.reserve(basis.size());
  for (const auto& e : basis) images.push_back(ch(e));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double r =
          norm(ch(multiply(basis[i], basis[j])) - multiply(images[i], images[j]));
      out.multiplicativity_residual = std::max(out.multiplicativity_residual, r);
    }
  }
  if (out.multiplicativity_residual > tol) {
    std::ostringstream os;
    os << "endomorphism_spectrum_check: map is not multiplicative (residual "
       << out.multiplicativity_residual << ")";
    throw InputError(os.str());
  }
  out.all_unimodular = true;
  for (const Complex z : eig(ch.superop()).eigenvalues) {
    const double mag = std::abs(z);
    out.worst_distance = std::max(out.worst_distance,
                                  std::min(mag, std::abs(mag - 1.0)));
    if (std::abs(mag - 1.0) > tol::classification) out.all_unimodular = false;
  }
  out.spectrum_ok = out.worst_distance <= tol::classification;
  const auto sv = singular_values(ch.superop());
  out.injective = !sv.empty() && sv.back() > tol::agreement * sv.front();
  out.consistent = out.spectrum_ok && (!out.injective || out.all_unimodular);
  return out;
}

InvariantState maximal_invariant_state(const Channel& ch, double tol) {
  if (!is_unital(ch, tol::agreement)) {
    throw InputError("maximal_invariant_state: channel is not unital");
  }
  const AlgebraShape& shape = ch.shape();
  const CMatrix dual = ch.superop().adjoint();
  // Isolate eigenvalue 1 from the rest of the spectrum.
  double sep = 1.0;
  for (const Complex z : eig(dual).eigenvalues) {
    const double dist = std::abs(z - 1.0);
    if (dist > tol::classification) sep = std::min(sep, dist);
  }
  const double radius = 0.5 * sep;
  const SpectralRegion near_one(
      [radius](Complex z) { return std::abs(z - 1.0) < radius; },
      [radius](Complex z) { return std::abs(std::abs(z - 1.0) - radius); });
  const InvariantSubspace fixed = schur_subspace(dual, near_one);

  // Normalized trace as a density: each block weighted by 1 / N.
  const double n = static_cast<double>(shape.matrix_size());
  const CVector trace = AlgebraElement::identity(shape).vec() / n;
  AlgebraElement rho = AlgebraElement::from_vec(shape, fixed.projection * trace);
  rho = 0.5 * (rho + adjoint(rho));

  InvariantState out{rho, std::numeric_limits<double>::infinity(), false};
  double top = 0.0;
  for (const auto& b : rho.blocks()) {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(b);
    out.min_eigenvalue = std::min(out.min_eigenvalue, solver.eigenvalues()(0));
    top = std::max(top, solver.eigenvalues()(b.rows() - 1));
  }
  out.faithful = out.min_eigenvalue > tol * std::max(top, 1e-300);
  return out;
}

}  // namespace decolab
