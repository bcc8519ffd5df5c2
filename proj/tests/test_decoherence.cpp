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
#include "decolab/decoherence.hpp"
#include "decolab/error.hpp"
#include "support/fixtures.hpp"

using namespace decolab;
using namespace decolab::testing;

namespace {

Channel markov1() { return from_stochastic(markov1_matrix(0.5, 0.25)); }
Channel kraus2() { return from_kraus(kraus2_family()); }
Channel csu() { return from_generator(GeneratorSpec{AlgebraShape({3}), csu_generator(), 1.0}); }

PersistentSystem system_of(const Channel& ch) {
  return persistent_system(ch, analyze_spectrum(ch));
}

AlgebraElement abelian(std::initializer_list<double> v) {
  std::vector<CMatrix> blocks;
  for (double x : v) blocks.push_back(CMatrix::Constant(1, 1, x));
  return AlgebraElement(AlgebraShape::abelian(v.size()), blocks);
}

// diag(A_11, A) in M_3 for A in M_2: the fixed points of the jump |e2><e1|.
AlgebraElement corner(const CMatrix& a) {
  CMatrix x = CMatrix::Zero(3, 3);
  x(0, 0) = a(0, 0);
  x.block(1, 1, 2, 2) = a;
  return AlgebraElement(AlgebraShape({3}), {x});
}

CMatrix stack(const std::vector<AlgebraElement>& xs) {
  CMatrix m(static_cast<Eigen::Index>(xs.front().shape().element_dim()),
            static_cast<Eigen::Index>(xs.size()));
  for (std::size_t i = 0; i < xs.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = xs[i].vec();
  return m;
}

double diff(const AlgebraElement& a, const AlgebraElement& b) { return (a - b).vec().norm(); }

bool same_span(const CMatrix& a, const CMatrix& b, double tol) {
  return containment_residual(a, b) <= tol && containment_residual(b, a) <= tol;
}

}  // namespace

TEST_SUITE("persistent_system") {
  TEST_CASE("Markov channel: S = span{1, v}") {
    const PersistentSystem s = system_of(markov1());
    REQUIRE(s.dim() == 2);
    CHECK(diff(s.basis()[0], AlgebraElement::identity(s.shape())) == 0.0);
    const CMatrix expect = stack({abelian({1, 1, 1}), abelian({0, 1, -1})});
    CHECK(same_span(s.stacked(), expect, 1e-10));
    CHECK(s.adjoint_residual() <= 1e-10);
    CHECK(s.min_singular() >= 1e-8);
  }

  TEST_CASE("Kraus channel: S is the diagonal subalgebra") {
    const PersistentSystem s = system_of(kraus2());
    REQUIRE(s.dim() == 2);
    const AlgebraShape sh({2});
    CHECK(same_span(s.stacked(), stack({AlgebraElement(sh, {unit(2, 0, 0)}), AlgebraElement(sh, {unit(2, 1, 1)})}),
                    1e-10));
  }

  TEST_CASE("generator channel: S is the 4-dimensional corner system") {
    for (double dt : {0.5, 1.0, 2.0}) {
      const Channel ch = from_generator(GeneratorSpec{AlgebraShape({3}), csu_generator(), dt});
      const PersistentSystem s = system_of(ch);
      REQUIRE(s.dim() == 4);
      std::vector<AlgebraElement> corners;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) corners.push_back(corner(unit(2, i, j)));
      CHECK(same_span(s.stacked(), stack(corners), 1e-10));
    }
  }

  TEST_CASE("a non-unital split is rejected") {
    // E_11 -> E_11, everything else dies: P1 = E_11 != 1.
    CMatrix m = CMatrix::Zero(4, 4);
    m(0, 0) = 1.0;
    const Channel ch(AlgebraShape({2}), m, Provenance::raw);
    CHECK_THROWS_AS(system_of(ch), InputError);
  }
}

TEST_SUITE("choi_effros_product") {
  TEST_CASE("1 o x = x on the basis") {
    for (const Channel& ch : {markov1(), kraus2(), csu()}) {
      const PersistentSystem s = system_of(ch);
      for (const auto& x : s.basis()) {
        CHECK(diff(choi_effros_product(s, AlgebraElement::identity(s.shape()), x).element, x) <= 1e-12);
      }
    }
  }

  TEST_CASE("Markov channel: v o v = 1") {
    const PersistentSystem s = system_of(markov1());
    const auto v = abelian({0, 1, -1});
    const ProductResult r = choi_effros_product(s, v, v);
    CHECK(diff(r.element, abelian({1, 1, 1})) <= 1e-10);
    // The ordinary square is 1 - w with w = e_1, which is not in S.
    CHECK(diff(multiply(v, v), abelian({0, 1, 1})) == 0.0);
  }

  TEST_CASE("generator channel: x o y = diag(omega(AB), AB)") {
    const PersistentSystem s = system_of(csu());
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix a = random_gaussian(2, 2, rng);
      const CMatrix b = random_gaussian(2, 2, rng);
      const ProductResult r = choi_effros_product(s, corner(a), corner(b));
      CHECK(diff(r.element, corner(a * b)) <= 1e-8);
    }
  }

  TEST_CASE("inputs outside S are rejected") {
    const PersistentSystem s = system_of(markov1());
    CHECK_THROWS_AS(choi_effros_product(s, abelian({1, 0, 0}), abelian({1, 1, 1})), InputError);
  }
}

TEST_SUITE("product_table") {
  TEST_CASE("Markov channel: the group algebra of Z_2") {
    const PersistentSystem s = system_of(markov1());
    const ProductTable t = product_table(s);
    const CVector one = s.expand(abelian({1, 1, 1})).coefficients;
    const CVector v = s.expand(abelian({0, 1, -1})).coefficients;
    CHECK((t.multiply(one, one) - one).norm() <= 1e-12);
    CHECK((t.multiply(one, v) - v).norm() <= 1e-12);
    CHECK((t.multiply(v, v) - one).norm() <= 1e-10);
    CHECK(t.expansion_residual <= 1e-9);
    // Unit row and column are exact.
    for (std::size_t j = 0; j < t.dim(); ++j)
      for (std::size_t k = 0; k < t.dim(); ++k) {
        CHECK(t.at(0, j, k) == Complex(j == k ? 1.0 : 0.0));
        CHECK(t.at(j, 0, k) == Complex(j == k ? 1.0 : 0.0));
      }
  }

  TEST_CASE("Kraus channel: A o A = I with A = diag(1, -1)") {
    const PersistentSystem s = system_of(kraus2());
    const ProductTable t = product_table(s);
    CMatrix a = CMatrix::Identity(2, 2);
    a(1, 1) = -1.0;
    const CVector ca = s.expand(AlgebraElement(AlgebraShape({2}), {a})).coefficients;
    const CVector ci = s.expand(AlgebraElement::identity(AlgebraShape({2}))).coefficients;
    CHECK((t.multiply(ca, ca) - ci).norm() <= 1e-12);
  }

  TEST_CASE("generator channel: a 4-dimensional associative algebra with trivial center") {
    const PersistentSystem s = system_of(csu());
    const ProductTable t = product_table(s);
    CHECK(t.dim() == 4);
    CHECK(center_dimension(t) == 1);
    const CstarCertificate c = certify_cstar(s, t);
    CHECK(c.associativity <= 1e-10);
  }

  TEST_CASE("involution compatibility of the coefficients") {
    for (const Channel& ch : {markov1(), kraus2(), csu()}) {
      const PersistentSystem s = system_of(ch);
      const ProductTable t = product_table(s);
      const CMatrix& a = s.adjoint_matrix();
      for (std::size_t i = 0; i < t.dim(); ++i)
        for (std::size_t j = 0; j < t.dim(); ++j) {
          const CVector ei = CVector::Unit(static_cast<Eigen::Index>(t.dim()), static_cast<Eigen::Index>(i));
          const CVector ej = CVector::Unit(static_cast<Eigen::Index>(t.dim()), static_cast<Eigen::Index>(j));
          const CVector lhs = a * t.multiply(ei, ej).conjugate();
          const CVector rhs = t.multiply(a * ej, a * ei);
          CHECK((lhs - rhs).norm() <= 1e-10);
        }
    }
  }
}

TEST_SUITE("certify_cstar") {
  TEST_CASE("Markov, Kraus and generator tables pass") {
    for (const Channel& ch : {markov1(), kraus2(), csu()}) {
      const PersistentSystem s = system_of(ch);
      const CstarCertificate c = certify_cstar(s, product_table(s));
      CHECK(c.passed);
      CHECK(c.associativity <= 1e-8);
      CHECK(c.cstar_identity <= 1e-8);
      CHECK(c.positivity_ok);
    }
  }

  TEST_CASE("a corrupted coefficient breaks associativity at the size of the error") {
    const PersistentSystem s = system_of(csu());
    ProductTable t = product_table(s);
    t.at(1, 2, 3) += 1e-3;
    const CstarCertificate c = certify_cstar(s, t);
    CHECK_FALSE(c.associativity_ok);
    CHECK_FALSE(c.passed);
    CHECK(c.associativity >= 1e-4);
    CHECK(c.associativity <= 1e-2);
  }
}

TEST_SUITE("certify_automorphism") {
  TEST_CASE("Markov channel: T v = -v and T is multiplicative for o") {
    const Channel ch = markov1();
    const PersistentSystem s = system_of(ch);
    const ProductTable t = product_table(s);
    const AutomorphismCertificate a = certify_automorphism(ch, s, t);
    CHECK(a.passed);
    CHECK(a.multiplicativity <= 1e-10);
    CHECK(a.isometry_ok);
    const auto v = abelian({0, 1, -1});
    CHECK(diff(ch(v), -1.0 * v) <= 1e-14);
    const auto tv = ch(v);
    CHECK(diff(choi_effros_product(s, tv, tv).element, ch(choi_effros_product(s, v, v).element)) <= 1e-10);
  }

  TEST_CASE("Kraus channel: the swap on diagonals") {
    const Channel ch = kraus2();
    const PersistentSystem s = system_of(ch);
    const AutomorphismCertificate a = certify_automorphism(ch, s, product_table(s));
    CHECK(a.passed);
    // Restriction squared is the identity and is not itself the identity.
    const CMatrix& r = a.restriction;
    CHECK(max_abs(r * r - CMatrix::Identity(2, 2)) <= 1e-12);
    CHECK(max_abs(r - CMatrix::Identity(2, 2)) >= 0.5);
  }

  TEST_CASE("generator channel: the restriction is the identity") {
    const Channel ch = csu();
    const PersistentSystem s = system_of(ch);
    const AutomorphismCertificate a = certify_automorphism(ch, s, product_table(s));
    CHECK(a.passed);
    CHECK(max_abs(a.restriction - CMatrix::Identity(4, 4)) <= 1e-10);
  }
}

TEST_SUITE("multiplicative_domain") {
  TEST_CASE("automorphism: the whole algebra") {
    std::mt19937_64 rng(2);
    const Channel ch = inner_automorphism(random_unitary(3, rng));
    CHECK(multiplicative_domain(ch).dim() == 9);
    CHECK(stable_multiplicative_domain(ch).dim() == 9);
  }

  TEST_CASE("Kraus channel: the diagonal subalgebra") {
    const Channel ch = kraus2();
    const MultiplicativeDomain md = multiplicative_domain(ch);
    CHECK(md.dim() == 2);
    CHECK(brute_force_domain_dim(ch) == 2);
    const AlgebraShape sh({2});
    CHECK(same_span(md.stacked, stack({AlgebraElement(sh, {unit(2, 0, 0)}), AlgebraElement(sh, {unit(2, 1, 1)})}),
                    1e-10));
    // E_12 fails: Phi(E_12^* E_12) = E_11 but Phi(E_12)^* Phi(E_12) = 0.
    const AlgebraElement e12(sh, {unit(2, 0, 1)});
    CHECK(norm(ch(multiply(adjoint(e12), e12))) == doctest::Approx(1.0));
    CHECK(norm(multiply(adjoint(ch(e12)), ch(e12))) == 0.0);
  }

  TEST_CASE("lifted Markov channels agree with the brute-force oracle") {
    for (const RMatrix& t : {markov1_matrix(0.5, 0.25), markov2_matrix(0.5)}) {
      const Channel ch = lift_via_conditional_expectation(t);
      CHECK(multiplicative_domain(ch).dim() == brute_force_domain_dim(ch));
    }
    // T o E mixes the diagonal, so only the scalars survive for the first matrix.
    CHECK(multiplicative_domain(lift_via_conditional_expectation(markov1_matrix(0.5, 0.25))).dim() == 1);
  }

  TEST_CASE("output is a subalgebra and passes the quadratic identities") {
    std::vector<Channel> chans = {markov1(), kraus2(), csu(),
                                  from_stochastic(markov2_matrix(0.5)),
                                  lift_via_conditional_expectation(markov2_matrix(0.5))};
    for (const auto& rc : random_gapped_channels(12, 77)) chans.push_back(rc.channel);
    for (const auto& ch : chans) {
      for (const MultiplicativeDomain& md : {multiplicative_domain(ch), stable_multiplicative_domain(ch)}) {
        CHECK(md.validation_residual <= 1e-8);
        CHECK(md.dim() == rank_of(md.stacked));
        for (const auto& x : md.basis) {
          CHECK(containment_residual(adjoint(x).vec(), md.stacked) <= 1e-9);
          for (const auto& y : md.basis) {
            CHECK(containment_residual(multiply(x, y).vec(), md.stacked) <= 1e-9);
          }
        }
      }
      CHECK(multiplicative_domain(ch).dim() == brute_force_domain_dim(ch));
    }
  }

  TEST_CASE("the domain of all powers shrinks for the second Markov matrix") {
    const Channel ch = from_stochastic(markov2_matrix(0.5));
    CHECK(multiplicative_domain(ch).dim() == 2);
    CHECK(stable_multiplicative_domain(ch).dim() == 1);
  }
}

TEST_SUITE("decoherence_split") {
  TEST_CASE("Markov channel: Hamiltonian verdict, domain strictly inside S") {
    const DecoherenceReport r = decoherence_split(markov1());
    CHECK(r.verdict == Verdict::hamiltonian_persistent_part);
    CHECK(r.domain_in_S);
    CHECK_FALSE(r.domain_equals_S);
  }

  TEST_CASE("Kraus channel: Hamiltonian verdict, domain equals S") {
    const DecoherenceReport r = decoherence_split(kraus2());
    CHECK(r.verdict == Verdict::hamiltonian_persistent_part);
    CHECK(r.domain_equals_S);
  }

  TEST_CASE("identity channel: S is the whole algebra") {
    const DecoherenceReport r = decoherence_split(identity_channel(AlgebraShape({2, 1})));
    CHECK(r.verdict == Verdict::hamiltonian_persistent_part);
    REQUIRE(r.system.has_value());
    CHECK(r.system->dim() == 5);
    CHECK(r.domain_equals_S);
  }

  TEST_CASE("degenerate inputs map to verdicts") {
    CMatrix m = CMatrix::Identity(2, 2);
    m(1, 1) = 0.999999999;
    DecoherenceOptions o;
    o.spectral.epsilon_ph = 6e-10;
    CHECK(decoherence_split(Channel(AlgebraShape({1, 1}), m, Provenance::raw), o).verdict ==
          Verdict::not_gapped);
    CHECK(decoherence_split(from_kraus(KrausFamily{2, {unit(2, 0, 1)}})).verdict == Verdict::not_unital);
  }

  TEST_CASE("verdict strings round trip") {
    for (Verdict v : {Verdict::hamiltonian_persistent_part, Verdict::operator_system_only,
                      Verdict::not_gapped, Verdict::not_unital}) {
      CHECK(verdict_from_string(to_string(v)) == v);
    }
  }
}

TEST_SUITE("conjecture_probe") {
  TEST_CASE("controls pass and the report is reproducible") {
    const ProbeReport a = conjecture_probe(60, AlgebraShape({2}), 5);
    const ProbeReport b = conjecture_probe(60, AlgebraShape({2}), 5);
    CHECK(a.trials == 60);
    CHECK(a.controls == 6);
    CHECK(a.controls_passed == a.controls);
    CHECK(a.survivors == b.survivors);
    CHECK(a.counterexamples.size() == b.counterexamples.size());
  }

  TEST_CASE("unitary conjugations survive and are automorphisms") {
    std::mt19937_64 rng(3);
    const ProbeTrial t = probe_channel(inner_automorphism(random_unitary(3, rng)));
    CHECK(t.survived);
    CHECK(t.automorphism);
  }

  TEST_CASE("the Kraus channel is filtered out") {
    const ProbeTrial t = probe_channel(kraus2());
    CHECK_FALSE(t.survived);
    CHECK(t.min_modulus <= 1e-12);
  }
}
