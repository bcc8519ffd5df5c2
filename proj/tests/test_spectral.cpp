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

#include <cmath>
#include <random>

#include "doctest.h"
#include "decolab/error.hpp"
#include "decolab/koopman.hpp"
#include "decolab/spectral.hpp"
#include "support/fixtures.hpp"

using namespace decolab;
using namespace decolab::testing;

namespace {

Channel markov1() { return from_stochastic(markov1_matrix(0.5, 0.25)); }
Channel kraus2() { return from_kraus(kraus2_family()); }

void check_split_invariants(const Channel& ch, const SpectralSplit& s) {
  const auto d = static_cast<Eigen::Index>(ch.shape().element_dim());
  const CMatrix& p = s.p_projection;
  const CMatrix& q = s.q_projection;
  const CMatrix& m = ch.superop();
  CHECK(max_abs(p + q - CMatrix::Identity(d, d)) <= 1e-10);
  CHECK(max_abs(p * p - p) <= 1e-10);
  CHECK(max_abs(q * q - q) <= 1e-10);
  CHECK(max_abs(p * m - m * p) <= 1e-10 * std::max(1.0, operator_norm(m)));
}

}  // namespace

TEST_SUITE("analyze_spectrum") {
  TEST_CASE("identity channel: everything is peripheral") {
    const Channel ch = identity_channel(AlgebraShape({2, 1}));
    const SpectralSplit s = analyze_spectrum(ch);
    CHECK(s.peripheral.size() == 5);
    CHECK(s.interior.empty());
    CHECK(max_abs(s.q_projection) == 0.0);
    CHECK(max_abs(s.p_projection - CMatrix::Identity(5, 5)) == 0.0);
  }

  TEST_CASE("three-state Markov channel") {
    const Channel ch = markov1();
    const SpectralSplit s = analyze_spectrum(ch);
    CHECK(match_spectra(s.peripheral, {1.0, -1.0}, 1e-10).matched);
    CHECK(s.interior_radius == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(s.gap - 0.5) <= 1e-10);
    CHECK(s.rank_p() == 2);
    check_split_invariants(ch, s);
  }

  TEST_CASE("Kraus channel: peripheral {1, -1}, interior {0, 0}") {
    const Channel ch = kraus2();
    const SpectralSplit s = analyze_spectrum(ch);
    CHECK(match_spectra(s.peripheral, {1.0, -1.0}, 1e-12).matched);
    CHECK(match_spectra(s.interior, {0.0, 0.0}, 1e-12).matched);
    CHECK(s.rank_p() == 2);
    CHECK(s.rank_q() == 2);
    check_split_invariants(ch, s);
  }

  TEST_CASE("not gapped and invalid inputs") {
    CMatrix m = CMatrix::Identity(2, 2);
    m(1, 1) = 0.999999999;
    SpectralOptions o;
    o.epsilon_ph = 6e-10;
    CHECK_THROWS_AS(analyze_spectrum(Channel(AlgebraShape({1, 1}), m, Provenance::raw), o),
                    NotGappedError);
    CHECK_THROWS_AS(analyze_spectrum(Channel(AlgebraShape({1}), CMatrix::Constant(1, 1, 1.5),
                                             Provenance::raw)),
                    InputError);
  }

  TEST_CASE("strict contraction: Q = I and P = 0") {
    CMatrix m(2, 2);
    m << 0.5, 0.2, 0.0, -0.3;
    const SpectralSplit s = analyze_spectrum(Channel(AlgebraShape({1, 1}), m, Provenance::raw));
    CHECK(s.peripheral.empty());
    CHECK(max_abs(s.q_projection - CMatrix::Identity(2, 2)) <= 1e-12);
    CHECK(max_abs(s.p_projection) <= 1e-12);
  }

  TEST_CASE("random gapped channels: P1 = 1, Q is *-preserving, methods agree") {
    const auto chans = random_gapped_channels(30, 900);
    std::mt19937_64 rng(1);
    for (const auto& rc : chans) {
      const Channel& ch = rc.channel;
      const SpectralSplit s = analyze_spectrum(ch);
      check_split_invariants(ch, s);
      const CVector one = AlgebraElement::identity(ch.shape()).vec();
      CHECK((s.p_projection * one - one).norm() <= 1e-10);
      REQUIRE(s.cross_check_discrepancy.has_value());
      CHECK(*s.cross_check_discrepancy <= 1e-8);
      const CMatrix j = adjoint_permutation(ch.shape());
      for (int i = 0; i < 10; ++i) {
        const CVector x = random_element(ch.shape(), rng).vec();
        const CVector lhs = j * (s.q_projection * x).conjugate();
        const CVector rhs = s.q_projection * (j * x.conjugate());
        CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, x.norm()));
      }
      // Every eigenvalue has an approximate eigenvector.
      const auto e = eig(ch.superop(), true);
      CHECK(e.residual <= 1e-8);
    }
  }
}

TEST_SUITE("power_limit_projection") {
  TEST_CASE("Markov channel: period 2 and convergence to P") {
    const Channel ch = markov1();
    const SpectralSplit s = analyze_spectrum(ch);
    const PowerLimit pl = power_limit_projection(ch, s);
    CHECK(pl.period == 2);
    CHECK(pl.split_residual <= 1e-9);
    // Phi^{2j} - P = Q-part decaying like (1/2)^{2j}.
    const Channel p4 = power(ch, 4);
    const double r4 = (p4.superop() - s.p_projection).norm();
    const Channel p8 = power(ch, 8);
    const double r8 = (p8.superop() - s.p_projection).norm();
    CHECK(r8 <= r4 * std::pow(0.5, 4) * 1.0001);
  }

  TEST_CASE("identity channel converges immediately") {
    const Channel ch = identity_channel(AlgebraShape({2}));
    const PowerLimit pl = power_limit_projection(ch, analyze_spectrum(ch));
    CHECK(pl.period == 1);
    CHECK(pl.split_residual <= 1e-14);
  }

  TEST_CASE("Kraus channel: Phi^2 equals P exactly") {
    const Channel ch = kraus2();
    const SpectralSplit s = analyze_spectrum(ch);
    const PowerLimit pl = power_limit_projection(ch, s);
    CHECK(pl.period == 2);
    CHECK((power(ch, 2).superop() - s.p_projection).norm() <= 1e-12);
  }

  TEST_CASE("irrational peripheral phase has no finite period") {
    CMatrix u = CMatrix::Identity(2, 2);
    u(1, 1) = std::polar(1.0, std::sqrt(2.0));
    const Channel ch = inner_automorphism(u);
    CHECK_THROWS_AS(power_limit_projection(ch, analyze_spectrum(ch), 720), NumericalError);
  }
}

TEST_SUITE("transient_decay") {
  TEST_CASE("Kraus channel: s_1 = 0") {
    const Channel ch = kraus2();
    const DecayProfile d = transient_decay(ch, analyze_spectrum(ch));
    CHECK(d.lower.at(1) <= 1e-12);
    CHECK(d.nilpotent_interior);
    CHECK(d.slope_ok);
  }

  TEST_CASE("Markov channel: slope tends to log(1/2)") {
    const Channel ch = markov1();
    const DecayProfile d = transient_decay(ch, analyze_spectrum(ch));
    REQUIRE(d.slope.has_value());
    CHECK(std::abs(*d.slope - std::log(0.5)) <= 0.05);
    CHECK(d.slope_ok);
    CHECK(d.bound_ok);
  }

  TEST_CASE("identity channel: all s_n vanish") {
    const Channel ch = identity_channel(AlgebraShape({2}));
    const DecayProfile d = transient_decay(ch, analyze_spectrum(ch));
    for (double v : d.lower) CHECK(v == 0.0);
  }

  TEST_CASE("bounds hold on random gapped channels") {
    for (const auto& rc : random_gapped_channels(20, 1234)) {
      const SpectralSplit s = analyze_spectrum(rc.channel);
      const DecayProfile d = transient_decay(rc.channel, s);
      CHECK(d.bound_ok);
      CHECK(d.slope_ok);
      for (std::size_t n = 0; n < d.lower.size(); ++n) CHECK(d.lower[n] <= d.upper[n] + 1e-12);
    }
  }
}

TEST_SUITE("eventual_range") {
  TEST_CASE("invertible channel: whole space, n0 = 0") {
    std::mt19937_64 rng(2);
    const Channel ch = inner_automorphism(random_unitary(3, rng));
    const EventualRange r = eventual_range(ch);
    CHECK(r.basis.cols() == 9);
    CHECK(r.stabilization_index == 0);
  }

  TEST_CASE("Kraus channel: diagonal subalgebra, n0 = 1") {
    const EventualRange r = eventual_range(kraus2());
    CHECK(r.basis.cols() == 2);
    CHECK(r.stabilization_index == 1);
    // Rank oracle: the diagonal units span the range.
    CMatrix diag(4, 2);
    diag.col(0) = AlgebraElement(AlgebraShape({2}), {unit(2, 0, 0)}).vec();
    diag.col(1) = AlgebraElement(AlgebraShape({2}), {unit(2, 1, 1)}).vec();
    CHECK(containment_residual(r.basis, diag) <= 1e-12);
  }

  TEST_CASE("lifted Markov channel: diagonal subalgebra of M_3, n0 = 1") {
    const EventualRange r = eventual_range(lift_via_conditional_expectation(markov1_matrix(0.5, 0.25)));
    CHECK(r.basis.cols() == 3);
    CHECK(r.stabilization_index == 1);
    CMatrix diag(9, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      diag.col(static_cast<Eigen::Index>(i)) = AlgebraElement(AlgebraShape({3}), {unit(3, i, i)}).vec();
    }
    CHECK(containment_residual(r.basis, diag) <= 1e-12);
  }
}

TEST_SUITE("endomorphism_spectrum_check") {
  TEST_CASE("inner automorphism on M_3") {
    std::mt19937_64 rng(3);
    const auto v = endomorphism_spectrum_check(inner_automorphism(random_unitary(3, rng)));
    CHECK(v.spectrum_ok);
    CHECK(v.injective);
    CHECK(v.all_unimodular);
    CHECK(v.consistent);
  }

  TEST_CASE("(x, y) -> (y, y) on M_2 (+) M_2") {
    const AlgebraShape s({2, 2});
    const CMatrix sup = superop_by_evaluation(s, [&](const AlgebraElement& x) {
      return AlgebraElement(s, {x.block(1), x.block(1)});
    });
    const auto v = endomorphism_spectrum_check(Channel(s, sup, Provenance::raw));
    CHECK(v.spectrum_ok);
    CHECK_FALSE(v.injective);
    CHECK(v.consistent);
    // Direct eigensolve: four eigenvalues 0 and four eigenvalues 1.
    std::vector<Complex> expect(4, 0.0);
    expect.resize(8, 1.0);
    CHECK(match_spectra(eig(sup).eigenvalues, expect, 1e-12).matched);
  }

  TEST_CASE("Koopman channel of a non-bijective map") {
    const FiniteMap tau{{1, 2, 0, 0, 3, 4}};
    const auto v = endomorphism_spectrum_check(koopman_channel(tau));
    CHECK(v.spectrum_ok);
    CHECK_FALSE(v.injective);
    const auto cs = cycle_structure(tau);
    CHECK(match_spectra(eig(koopman_channel(tau).superop()).eigenvalues, cs.predicted_spectrum, 1e-8).matched);
  }

  TEST_CASE("non-multiplicative input is rejected") {
    CHECK_THROWS_AS(endomorphism_spectrum_check(markov1()), InputError);
  }
}

TEST_SUITE("maximal_invariant_state") {
  TEST_CASE("Kraus channel: the normalized trace is invariant and faithful") {
    const InvariantState st = maximal_invariant_state(kraus2());
    CHECK(st.faithful);
    CHECK(st.min_eigenvalue == doctest::Approx(0.5).epsilon(1e-10));
  }

  TEST_CASE("transient states carry no invariant weight") {
    // The tail point 4 -> 3 -> 0 is never revisited.
    const InvariantState st = maximal_invariant_state(koopman_channel(FiniteMap{{1, 2, 0, 0, 3}}));
    CHECK_FALSE(st.faithful);
    CHECK(std::abs(st.min_eigenvalue) <= 1e-12);
  }
}
