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
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "decolab/error.hpp"
#include "decolab/koopman.hpp"
#include "decolab/spectral.hpp"
#include "support/fixtures.hpp"

using namespace decolab;
using namespace decolab::testing;

namespace {

std::vector<Complex> roots_of_unity(std::size_t k) {
  std::vector<Complex> out;
  for (std::size_t j = 0; j < k; ++j) {
    out.push_back(std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k)));
  }
  return out;
}

// Eventual image by brute force: iterate the image set until it stops shrinking.
std::set<std::size_t> iterated_image(const FiniteMap& t, std::size_t* steps) {
  std::set<std::size_t> cur;
  for (std::size_t i = 0; i < t.size(); ++i) cur.insert(i);
  *steps = 0;
  while (true) {
    std::set<std::size_t> next;
    for (std::size_t i : cur) next.insert(t.targets[i]);
    if (next == cur) return cur;
    cur = std::move(next);
    ++*steps;
  }
}

}  // namespace

TEST_SUITE("koopman_channel") {
  TEST_CASE("identity map gives the identity channel") {
    const Channel ch = koopman_channel(FiniteMap{{0, 1, 2, 3}});
    CHECK(max_abs(ch.superop() - CMatrix::Identity(4, 4)) == 0.0);
    CHECK(ch.provenance() == Provenance::koopman);
  }

  TEST_CASE("3-cycle: spectrum is the cube roots of unity") {
    const Channel ch = koopman_channel(FiniteMap{{1, 2, 0}});
    CHECK(match_spectra(eig(ch.superop()).eigenvalues, roots_of_unity(3), 1e-12).matched);
    CHECK(is_unital(ch));
  }

  TEST_CASE("constant map: rank one with spectrum {1, 0, 0}") {
    const Channel ch = koopman_channel(FiniteMap{{0, 0, 0}});
    CHECK(rank_of(ch.superop()) == 1);
    CHECK(match_spectra(eig(ch.superop()).eigenvalues, {1.0, 0.0, 0.0}, 1e-12).matched);
  }

  TEST_CASE("K[i][j] = 1 iff j = tau(i)") {
    const FiniteMap t{{2, 2, 0, 1}};
    const CMatrix k = koopman_channel(t).superop();
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j)
        CHECK(k(i, j) == Complex(static_cast<std::size_t>(j) == t.targets[static_cast<std::size_t>(i)] ? 1.0 : 0.0));
  }

  TEST_CASE("invalid maps") {
    CHECK_THROWS_AS(koopman_channel(FiniteMap{{}}), InputError);
    CHECK_THROWS_AS(koopman_channel(FiniteMap{{0, 3}}), InputError);
  }
}

TEST_SUITE("cycle_structure") {
  TEST_CASE("3-cycle") {
    const CycleStructure cs = cycle_structure(FiniteMap{{1, 2, 0}});
    CHECK(cs.cycles == std::vector<std::size_t>{3});
    CHECK(cs.tail_lengths == std::vector<std::size_t>{0, 0, 0});
    CHECK(cs.stabilization_index == 0);
  }

  TEST_CASE("0 -> 0, 1 -> 0, 2 -> 1") {
    const CycleStructure cs = cycle_structure(FiniteMap{{0, 0, 1}});
    CHECK(cs.cycles == std::vector<std::size_t>{1});
    CHECK(cs.tail_lengths == std::vector<std::size_t>{0, 1, 2});
    CHECK(cs.stabilization_index == 2);
    CHECK(match_spectra(cs.predicted_spectrum, {1.0, 0.0, 0.0}, 1e-15).matched);
  }

  TEST_CASE("random maps on 12 points: prediction matches the eigensolver") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
      const FiniteMap t = random_finite_map(12, rng);
      const CycleStructure cs = cycle_structure(t);
      CHECK(match_spectra(cs.predicted_spectrum, eig(koopman_channel(t).superop()).eigenvalues, 1e-8).matched);
      std::size_t steps = 0;
      const auto img = iterated_image(t, &steps);
      CHECK(std::vector<std::size_t>(img.begin(), img.end()) == cs.eventual_image);
      CHECK(steps == cs.stabilization_index);
    }
  }

  TEST_CASE("equal-length cycles pair correctly") {
    // Two 2-cycles and a fixed point: {1, -1, 1, -1, 1}.
    const CycleStructure cs = cycle_structure(FiniteMap{{1, 0, 3, 2, 4}});
    CHECK(cs.cycles.size() == 3);
    CHECK(match_spectra(cs.predicted_spectrum, {1.0, -1.0, 1.0, -1.0, 1.0}, 1e-15).matched);
    CHECK_FALSE(match_spectra(cs.predicted_spectrum, {1.0, -1.0, 1.0, 1.0, 1.0}, 1e-8).matched);
  }
}

TEST_SUITE("verify_endomorphism_correspondence") {
  TEST_CASE("round trip on random maps") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
      const FiniteMap t = random_finite_map(1 + trial % 9, rng);
      const CorrespondenceVerdict v = verify_endomorphism_correspondence(t);
      CHECK(v.ok);
      CHECK(v.round_trip);
      CHECK(v.multiplicativity_residual == 0.0);
    }
  }

  TEST_CASE("3-cycle is recovered") {
    CHECK(recover_finite_map(koopman_channel(FiniteMap{{1, 2, 0}})).targets == std::vector<std::size_t>{1, 2, 0});
  }

  TEST_CASE("doubly stochastic non-permutation is not a Koopman channel") {
    const Channel ch = from_stochastic(RMatrix::Constant(2, 2, 0.5));
    CHECK_THROWS_WITH_AS(recover_finite_map(ch), doctest::Contains("not a Koopman channel"), InputError);
  }
}

TEST_SUITE("koopman invariants") {
  TEST_CASE("injective iff bijective iff unimodular spectrum; eventual range matches") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t m = 1 + static_cast<std::size_t>(trial) % 10;
      FiniteMap t = random_finite_map(m, rng);
      if (trial % 4 == 0) {
        // Random permutation.
        std::vector<std::size_t> p(m);
        for (std::size_t i = 0; i < m; ++i) p[i] = i;
        std::shuffle(p.begin(), p.end(), rng);
        t.targets = p;
      }
      const Channel ch = koopman_channel(t);
      const std::set<std::size_t> image(t.targets.begin(), t.targets.end());
      const bool bijective = image.size() == m;
      const auto ev = eig(ch.superop()).eigenvalues;
      const bool unimodular =
          std::all_of(ev.begin(), ev.end(), [](Complex z) { return std::abs(std::abs(z) - 1.0) <= 1e-8; });
      CHECK((rank_of(ch.superop()) == m) == bijective);
      CHECK(unimodular == bijective);
      const CycleStructure cs = cycle_structure(t);
      const EventualRange r = eventual_range(ch);
      CHECK(static_cast<std::size_t>(r.basis.cols()) == cs.eventual_image.size());
      CHECK(r.stabilization_index == cs.stabilization_index);
    }
  }
}
