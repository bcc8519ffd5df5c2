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

#include "decolab/channel.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

#include "decolab/error.hpp"

namespace decolab {

using Index = Eigen::Index;

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::kraus:
      return "kraus";
    case Provenance::stochastic:
      return "stochastic";
    case Provenance::koopman:
      return "koopman";
    case Provenance::lifted:
      return "lifted";
    case Provenance::generator_exp:
      return "generator_exp";
    case Provenance::raw:
      return "raw";
  }
  return "raw";
}

Provenance provenance_from_string(const std::string& s) {
  for (const Provenance p :
       {Provenance::kraus, Provenance::stochastic, Provenance::koopman,
        Provenance::lifted, Provenance::generator_exp, Provenance::raw}) {
    if (to_string(p) == s) return p;
  }
  throw InputError("unknown channel provenance '" + s + "'");
}

Channel::Channel(AlgebraShape shape, CMatrix superop, Provenance provenance)
    : shape_(std::move(shape)),
      superop_(std::move(superop)),
      provenance_(provenance) {
  const auto d = static_cast<Index>(shape_.element_dim());
  if (superop_.rows() != d || superop_.cols() != d) {
    std::ostringstream os;
    os << "channel: superoperator is " << superop_.rows() << "x"
       << superop_.cols() << ", algebra needs " << d << "x" << d;
    throw InputError(os.str());
  }
  require_finite(superop_, "channel");
  if (provenance_ == Provenance::raw) return;
  const double scale = std::max(1.0, superop_.norm());
  const double residual = realness_residual();
  if (provenance_ == Provenance::generator_exp) {
    if (residual > tol::agreement * scale) {
      std::ostringstream os;
      os << "generator does not exponentiate to a real map (residual "
         << residual << ")";
      throw InputError(os.str());
    }
  } else if (residual > tol::structural * scale) {
    std::ostringstream os;
    os << to_string(provenance_) << " channel is not a real map (residual "
       << residual << ")";
    throw InvariantError(os.str());
  }
}

AlgebraElement Channel::operator()(const AlgebraElement& x) const {
  if (!(x.shape() == shape_)) {
    throw InputError("channel applied to an element of another algebra");
  }
  return AlgebraElement::from_vec(shape_, superop_ * x.vec());
}

double Channel::realness_residual() const {
  // vec(Phi(x^*)) = S J conj(v), vec(Phi(x)^*) = J conj(S v); with v = e_i the
  // difference is column i of S J - J conj(S).
  const CMatrix j = adjoint_permutation(shape_);
  const CMatrix diff = superop_ * j - j * superop_.conjugate();
  double worst = 0.0;
  for (Index i = 0; i < diff.cols(); ++i) {
    worst = std::max(worst, diff.col(i).norm());
  }
  return worst;
}

Channel identity_channel(const AlgebraShape& shape) {
  const auto d = static_cast<Index>(shape.element_dim());
  return Channel(shape, CMatrix::Identity(d, d), Provenance::kraus);
}

Channel from_kraus(const KrausFamily& family) {
  if (family.operators.empty()) {
    throw InputError("from_kraus: empty Kraus family");
  }
  const auto n = static_cast<Index>(family.dim);
  if (n == 0) throw InputError("from_kraus: dimension must be positive");
  CMatrix s = CMatrix::Zero(n * n, n * n);
  for (std::size_t i = 0; i < family.operators.size(); ++i) {
    const CMatrix& v = family.operators[i];
    if (v.rows() != n || v.cols() != n) {
      std::ostringstream os;
      os << "from_kraus: operator " << i << " is " << v.rows() << "x"
         << v.cols() << ", expected " << n << "x" << n;
      throw InputError(os.str());
    }
    require_finite(v, "from_kraus");
    // vec(V^* A V) = (V^T (x) V^*) vec(A)
    s += kron(v.transpose(), v.adjoint());
  }
  return Channel(AlgebraShape::full(family.dim), std::move(s),
                 Provenance::kraus);
}

void validate_stochastic(const RMatrix& t) {
  if (t.rows() != t.cols() || t.rows() == 0) {
    throw InputError("stochastic matrix must be square and non-empty");
  }
  if (!t.allFinite()) throw InputError("stochastic matrix has non-finite entries");
  for (Index i = 0; i < t.rows(); ++i) {
    for (Index j = 0; j < t.cols(); ++j) {
      if (t(i, j) < 0.0) {
        std::ostringstream os;
        os << "stochastic matrix: negative entry " << t(i, j) << " at row " << i
           << ", column " << j;
        throw InputError(os.str());
      }
    }
    const double sum = t.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-12) {
      std::ostringstream os;
      os << "stochastic matrix: row " << i << " sums to " << sum;
      throw InputError(os.str());
    }
  }
}

Channel from_stochastic(const RMatrix& t) {
  validate_stochastic(t);
  return Channel(AlgebraShape::abelian(static_cast<std::size_t>(t.rows())),
                 t.cast<Complex>(), Provenance::stochastic);
}

Channel lift_via_conditional_expectation(const RMatrix& t) {
  validate_stochastic(t);
  const auto m = static_cast<std::size_t>(t.rows());
  const AlgebraShape shape = AlgebraShape::full(m);
  const auto d = static_cast<Index>(shape.element_dim());
  CMatrix s = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      s(static_cast<Index>(shape.vec_index(0, i, i)),
        static_cast<Index>(shape.vec_index(0, j, j))) =
          t(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  return Channel(shape, std::move(s), Provenance::lifted);
}

Channel from_generator(const GeneratorSpec& spec) {
  const auto d = static_cast<Index>(spec.shape.element_dim());
  if (spec.generator.rows() != d || spec.generator.cols() != d) {
    throw InputError("from_generator: generator size does not match algebra");
  }
  require_finite(spec.generator, "from_generator");
  if (!(spec.time_step > 0.0) || !std::isfinite(spec.time_step)) {
    throw InputError("from_generator: time step must be positive");
  }
  return Channel(spec.shape, matrix_exp(spec.generator, spec.time_step),
                 Provenance::generator_exp);
}

CMatrix lindblad_generator(std::size_t n, const CMatrix& hamiltonian,
                           const std::vector<CMatrix>& jumps) {
  const auto dim = static_cast<Index>(n);
  const CMatrix id = CMatrix::Identity(dim, dim);
  CMatrix l = CMatrix::Zero(dim * dim, dim * dim);
  if (hamiltonian.size() != 0) {
    if (hamiltonian.rows() != dim || hamiltonian.cols() != dim) {
      throw InputError("lindblad_generator: hamiltonian has the wrong size");
    }
    const Complex i(0.0, 1.0);
    l += i * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  }
  for (const auto& k : jumps) {
    if (k.rows() != dim || k.cols() != dim) {
      throw InputError("lindblad_generator: jump operator has the wrong size");
    }
    const CMatrix kk = k.adjoint() * k;
    l += kron(k.transpose(), k.adjoint()) - 0.5 * kron(id, kk) -
         0.5 * kron(kk.transpose(), id);
  }
  return l;
}

ChoiMatrix choi(const Channel& ch) {
  const AlgebraShape& shape = ch.shape();
  if (!shape.is_single_block()) {
    throw InputError("choi: multi-block channel must be embedded first");
  }
  const std::size_t n = shape.block_dim(0);
  const auto ni = static_cast<Index>(n);
  ChoiMatrix out{n, CMatrix::Zero(ni * ni, ni * ni)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const CVector image =
          ch.superop().col(static_cast<Index>(shape.vec_index(0, i, j)));
      out.entries.block(static_cast<Index>(i) * ni, static_cast<Index>(j) * ni,
                        ni, ni) = Eigen::Map<const CMatrix>(image.data(), ni, ni);
    }
  }
  return out;
}

namespace {

// Choi matrix of X -> iota(Phi(E(X))) on M_N.
CMatrix extended_choi(const Channel& ch) {
  const AlgebraShape& shape = ch.shape();
  const std::size_t big = shape.matrix_size();
  const auto bi = static_cast<Index>(big);
  // Global row/column -> (block, local index).
  std::vector<std::size_t> block_of(big);
  std::vector<std::size_t> local(big);
  std::size_t at = 0;
  for (std::size_t k = 0; k < shape.block_count(); ++k) {
    for (std::size_t r = 0; r < shape.block_dim(k); ++r) {
      block_of[at] = k;
      local[at] = r;
      ++at;
    }
  }
  CMatrix c = CMatrix::Zero(bi * bi, bi * bi);
  for (std::size_t i = 0; i < big; ++i) {
    for (std::size_t j = 0; j < big; ++j) {
      if (block_of[i] != block_of[j]) continue;  // E kills off-block units
      const CVector image = ch.superop().col(static_cast<Index>(
          shape.vec_index(block_of[i], local[i], local[j])));
      const CMatrix embedded =
          AlgebraElement::from_vec(shape, image).to_block_diagonal();
      c.block(static_cast<Index>(i) * bi, static_cast<Index>(j) * bi, bi, bi) =
          embedded;
    }
  }
  return c;
}

}  // namespace

CpWitness is_completely_positive(const Channel& ch, double tol) {
  const CMatrix c =
      ch.shape().is_single_block() ? choi(ch).entries : extended_choi(ch);
  CpWitness w;
  w.selfadjoint_residual = (c - c.adjoint()).norm();
  const CMatrix h = 0.5 * (c + c.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const auto& values = solver.eigenvalues();
  w.min_eigenvalue = values(0);
  w.eigenvector = solver.eigenvectors().col(0);
  w.choi_norm = std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
  const double scale = std::max(w.choi_norm, 1e-300);
  w.completely_positive =
      w.min_eigenvalue >= -tol * scale &&
      w.selfadjoint_residual <= tol::structural * std::max(1.0, c.norm());
  return w;
}

bool is_unital(const Channel& ch, double tol) {
  const AlgebraElement one = AlgebraElement::identity(ch.shape());
  return norm(ch(one) - one) <= tol;
}

Channel power(const Channel& ch, std::size_t n) {
  const auto d = static_cast<Index>(ch.shape().element_dim());
  CMatrix out = CMatrix::Identity(d, d);
  CMatrix base = ch.superop();
  // binary powering
  while (n > 0) {
    if (n & 1U) out = out * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return Channel(ch.shape(), std::move(out), Provenance::raw);
}

Channel compose(const Channel& a, const Channel& b) {
  if (!(a.shape() == b.shape())) {
    throw InputError("compose: channels act on different algebras");
  }
  return Channel(a.shape(), a.superop() * b.superop(), Provenance::raw);
}

KrausFamily random_unital_kraus(std::size_t n, std::size_t count,
                                std::mt19937_64& rng) {
  if (n == 0 || count == 0) {
    throw InputError("random_unital_kraus: dimension and count must be positive");
  }
  KrausFamily family{n, {}};
  const auto ni = static_cast<Index>(n);
  CMatrix m = CMatrix::Zero(ni, ni);
  for (std::size_t i = 0; i < count; ++i) {
    family.operators.push_back(random_gaussian(n, n, rng));
    m += family.operators.back().adjoint() * family.operators.back();
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m);
  const CMatrix inv_sqrt = solver.operatorInverseSqrt();
  for (auto& v : family.operators) v = v * inv_sqrt;
  return family;
}

Channel inner_automorphism(const CMatrix& u) {
  require_square(u, "inner_automorphism");
  return from_kraus(KrausFamily{static_cast<std::size_t>(u.rows()), {u}});
}

}  // namespace decolab
