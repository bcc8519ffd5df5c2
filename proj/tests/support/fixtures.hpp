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

// Shared generators and independent oracles for the test programs.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "decolab/channel.hpp"
#include "decolab/error.hpp"
#include "decolab/examples.hpp"
#include "decolab/io.hpp"
#include "decolab/spectral.hpp"

namespace decolab::testing {

inline Channel example_channel(const std::string& name, const ExampleParams& p = {}) {
  return build_channel(builtin_example(name, p));
}

inline CMatrix unit(std::size_t n, std::size_t i, std::size_t j) {
  CMatrix e = CMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = 1.0;
  return e;
}

inline double max_abs(const CMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Families used for the random gapped channel suite.
enum class RandomFamily { generic_kraus, unitary_mixture, dephased_permutation };

struct RandomChannel {
  Channel channel;
  RandomFamily family;
  std::uint64_t seed;
};

namespace detail {

inline CMatrix permutation_unitary(const std::vector<std::size_t>& perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  CMatrix w = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) w(i, static_cast<Eigen::Index>(perm[i])) = 1.0;
  return w;
}

inline Channel draw(RandomFamily family, std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  switch (family) {
    case RandomFamily::generic_kraus: {
      std::uniform_int_distribution<std::size_t> k(2, n * n);
      return from_kraus(random_unital_kraus(n, k(rng), rng));
    }
    case RandomFamily::unitary_mixture: {
      const double t = 0.9 * unif(rng);
      std::uniform_int_distribution<std::size_t> k(1, n * n);
      KrausFamily f = random_unital_kraus(n, k(rng), rng);
      for (auto& v : f.operators) v *= std::sqrt(1.0 - t);
      f.operators.push_back(std::sqrt(t) * random_unitary(n, rng));
      return from_kraus(f);
    }
    case RandomFamily::dephased_permutation: {
      // Off-diagonal entries shrink by p; the diagonal is permuted.
      const double p = 0.05 + 0.8 * unif(rng);
      std::vector<std::size_t> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      CMatrix w = permutation_unitary(perm);
      CVector phases(static_cast<Eigen::Index>(n));
      for (auto& z : phases) z = std::polar(1.0, 2.0 * std::numbers::pi * unif(rng));
      w = w * phases.asDiagonal();
      KrausFamily f{n, {std::sqrt(p) * w}};
      for (std::size_t i = 0; i < n; ++i) {
        f.operators.push_back(std::sqrt(1.0 - p) * unit(n, i, i) * w);
      }
      return from_kraus(f);
    }
  }
  throw std::logic_error("unknown family");
}

}  // namespace detail

/// Seeded unital CP channels on M_2 and M_3 with gap >= min_gap; redraws
/// until the gap condition holds.
inline std::vector<RandomChannel> random_gapped_channels(std::size_t count,
                                                         std::uint64_t seed,
                                                         double min_gap = 0.1) {
  std::vector<RandomChannel> out;
  std::uint64_t s = seed;
  while (out.size() < count) {
    std::mt19937_64 rng(s);
    const std::size_t n = 2 + out.size() % 2;
    const auto family = static_cast<RandomFamily>(out.size() % 3);
    Channel ch = detail::draw(family, n, rng);
    try {
      const SpectralSplit split = analyze_spectrum(ch);
      if (split.gap >= min_gap && !split.interior.empty()) {
        out.push_back({std::move(ch), family, s});
      }
    } catch (const Error&) {
      // Redraw on not-gapped draws.
    }
    ++s;
  }
  return out;
}

/// Unital *-endomorphism of a multi-block algebra: target block k receives
/// U_k^* (x_{src(k)} (x) I_{m_k}) U_k, where n_k = m_k n_{src(k)}.
struct BlockEndomorphism {
  AlgebraShape shape;
  std::vector<std::size_t> source;
  std::vector<std::size_t> multiplicity;
  std::vector<CMatrix> unitaries;

  AlgebraElement apply(const AlgebraElement& x) const {
    std::vector<CMatrix> blocks;
    for (std::size_t k = 0; k < shape.block_count(); ++k) {
      const std::size_t m = multiplicity[k];
      const CMatrix& src = x.block(source[k]);
      const CMatrix amplified =
          kron(src, CMatrix::Identity(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m)));
      blocks.push_back(unitaries[k].adjoint() * amplified * unitaries[k]);
    }
    return AlgebraElement(shape, blocks);
  }

  Channel channel() const {
    const auto basis = matrix_unit_basis(shape);
    const auto d = static_cast<Eigen::Index>(shape.element_dim());
    CMatrix s(d, d);
    for (Eigen::Index c = 0; c < d; ++c) s.col(c) = apply(basis[static_cast<std::size_t>(c)]).vec();
    return Channel(shape, s, Provenance::raw);
  }
};

/// kind 0: inner automorphism of a single block; 1: block permutation with
/// unitaries; 2: general block map with collapses and multiplicities.
inline BlockEndomorphism random_endomorphism(int kind, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> small(1, 3);
  std::uniform_int_distribution<std::size_t> count(2, 4);
  std::vector<std::size_t> dims;
  if (kind == 0) {
    dims = {std::uniform_int_distribution<std::size_t>(1, 6)(rng)};
  } else {
    std::size_t d = 0;
    const std::size_t k = count(rng);
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t n = small(rng);
      if (d + n * n > 36) n = 1;
      if (d + n * n > 36) break;
      dims.push_back(n);
      d += n * n;
    }
  }
  AlgebraShape shape(dims);
  BlockEndomorphism e{shape, {}, {}, {}};
  const std::size_t kb = dims.size();
  std::vector<std::size_t> perm(kb);
  for (std::size_t i = 0; i < kb; ++i) perm[i] = i;
  if (kind == 1) {
    // Permute only among blocks of equal size.
    for (const std::size_t n : dims) {
      std::vector<std::size_t> group;
      for (std::size_t i = 0; i < kb; ++i) {
        if (dims[i] == n) group.push_back(i);
      }
      std::vector<std::size_t> shuffled = group;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (std::size_t i = 0; i < group.size(); ++i) perm[group[i]] = shuffled[i];
    }
  }
  for (std::size_t k = 0; k < kb; ++k) {
    std::size_t src = perm[k];
    if (kind == 2) {
      std::vector<std::size_t> ok;
      for (std::size_t j = 0; j < kb; ++j) {
        if (dims[k] % dims[j] == 0) ok.push_back(j);
      }
      src = ok[std::uniform_int_distribution<std::size_t>(0, ok.size() - 1)(rng)];
    }
    e.source.push_back(src);
    e.multiplicity.push_back(dims[k] / dims[src]);
    e.unitaries.push_back(random_unitary(dims[k], rng));
  }
  return e;
}

/// Characteristic polynomial coefficients c_0..c_n of det(zI - M), monic,
/// by the Faddeev-LeVerrier recursion.
inline std::vector<Complex> characteristic_polynomial(const CMatrix& m) {
  const auto n = m.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
  c[static_cast<std::size_t>(n)] = 1.0;
  CMatrix mk = CMatrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    mk = m * mk + c[static_cast<std::size_t>(n - k + 1)] * CMatrix::Identity(n, n);
    c[static_cast<std::size_t>(n - k)] = -(m * mk).trace() / static_cast<double>(k);
  }
  return c;
}

/// Durand-Kerner simultaneous iteration followed by Newton polishing.
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
  const std::size_t n = c.size() - 1;
  auto eval = [&](Complex z) {
    Complex v = c[n];
    for (std::size_t i = n; i-- > 0;) v = v * z + c[i];
    return v;
  };
  auto deriv = [&](Complex z) {
    Complex v = static_cast<double>(n) * c[n];
    for (std::size_t i = n; i-- > 1;) v = v * z + static_cast<double>(i) * c[i];
    return v;
  };
  double bound = 1.0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, 1.0 + std::abs(c[i]));
  std::vector<Complex> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = std::polar(0.5 * bound, 0.4 + 2.0 * std::numbers::pi * static_cast<double>(i) / n);
  }
  for (int it = 0; it < 2000; ++it) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = c[n];
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) den *= z[i] - z[j];
      }
      const Complex step = eval(z[i]) / den;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  for (auto& r : z) {
    for (int it = 0; it < 5; ++it) {
      const Complex d = deriv(r);
      if (std::abs(d) == 0.0) break;
      r -= eval(r) / d;
    }
  }
  return z;
}

/// vec(Phi(x)) for x in the span of matrix units, assembled by applying the
/// channel to each unit separately.
inline CMatrix superop_by_evaluation(const AlgebraShape& shape,
                                     const std::function<AlgebraElement(const AlgebraElement&)>& f) {
  const auto basis = matrix_unit_basis(shape);
  const auto d = static_cast<Eigen::Index>(shape.element_dim());
  CMatrix s(d, d);
  for (Eigen::Index c = 0; c < d; ++c) s.col(c) = f(basis[static_cast<std::size_t>(c)]).vec();
  return s;
}

/// Multiplicative domain by brute force over matrix units: x = sum c_p e_p
/// lies in it iff Phi(e_p y) - Phi(e_p) Phi(y) and the mirrored expression,
/// summed against c, vanish for every unit y.
inline std::size_t brute_force_domain_dim(const Channel& ch, double tol = 1e-9) {
  const auto basis = matrix_unit_basis(ch.shape());
  const std::size_t d = basis.size();
  const auto rows = static_cast<Eigen::Index>(2 * d * d);
  CMatrix a(rows, static_cast<Eigen::Index>(d));
  for (std::size_t p = 0; p < d; ++p) {
    const AlgebraElement fp = ch(basis[p]);
    std::vector<CVector> pieces;
    for (std::size_t y = 0; y < d; ++y) {
      const AlgebraElement fy = ch(basis[y]);
      pieces.push_back((ch(multiply(basis[p], basis[y])) - multiply(fp, fy)).vec());
      pieces.push_back((ch(multiply(basis[y], basis[p])) - multiply(fy, fp)).vec());
    }
    Eigen::Index r = 0;
    for (const auto& v : pieces) {
      a.block(r, static_cast<Eigen::Index>(p), v.size(), 1) = v;
      r += v.size();
    }
  }
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * std::max(1.0, s(0))) ++rank;
  }
  return d - rank;
}

/// Rank of the column span, by SVD with a relative cut.
inline std::size_t rank_of(const CMatrix& m, double tol = 1e-9) {
  if (m.cols() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * std::max(1.0, s(0))) ++r;
  }
  return r;
}

/// Largest distance of a column of a from span(b).
inline double containment_residual(const CMatrix& a, const CMatrix& b) {
  if (a.cols() == 0) return 0.0;
  if (b.cols() == 0) return a.colwise().norm().maxCoeff();
  Eigen::HouseholderQR<CMatrix> qr(b);
  const CMatrix q = qr.householderQ() * CMatrix::Identity(b.rows(), b.cols());
  const CMatrix rest = a - q * (q.adjoint() * a);
  return rest.colwise().norm().maxCoeff();
}

}  // namespace decolab::testing
