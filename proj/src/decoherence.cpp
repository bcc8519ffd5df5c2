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

#include "decolab/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "decolab/error.hpp"

namespace decolab {

using Index = Eigen::Index;

namespace {

constexpr double kTableTol = 1e-9;
constexpr double kProbeTol = 1e-6;

CMatrix stack(const std::vector<AlgebraElement>& elems, Index rows) {
  CMatrix b(rows, static_cast<Index>(elems.size()));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    b.col(static_cast<Index>(i)) = elems[i].vec();
  }
  return b;
}

// Gram-Schmidt step against an orthonormal set; returns the residual.
CVector orthogonalize(const CVector& v, const std::vector<CVector>& ortho,
                      bool real_coefficients) {
  CVector r = v;
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& q : ortho) {
      Complex c = q.dot(r);
      if (real_coefficients) c = Complex(c.real(), 0.0);
      r -= c * q;
    }
  }
  return r;
}

// Greedy pivoted Gram-Schmidt: repeatedly take the candidate with the largest
// residual until `target` vectors are found.
std::vector<CVector> pivoted_basis(const std::vector<CVector>& seed,
                                   const std::vector<CVector>& candidates,
                                   std::size_t target, bool real_coefficients) {
  std::vector<CVector> ortho = seed;
  std::vector<bool> used(candidates.size(), false);
  while (ortho.size() < target) {
    double best = 0.0;
    std::size_t pick = candidates.size();
    CVector best_vec;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      CVector r = orthogonalize(candidates[c], ortho, real_coefficients);
      const double nr = r.norm();
      if (nr > best) {
        best = nr;
        pick = c;
        best_vec = std::move(r);
      }
    }
    if (pick == candidates.size() || best < 1e-6) break;
    used[pick] = true;
    ortho.push_back(best_vec / best);
  }
  return ortho;
}

double element_norm(const PersistentSystem& sys, const CVector& coeffs) {
  return norm(sys.element(coeffs));
}

CVector random_coefficients(std::size_t d, std::mt19937_64& rng) {
  return random_gaussian(d, 1, rng).col(0);
}

// Unit-norm samples in S: basis elements first, then random combinations.
std::vector<CVector> sample_system(const PersistentSystem& sys,
                                   std::size_t count, std::uint64_t seed) {
  std::vector<CVector> out;
  const std::size_t d = sys.dim();
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < d && out.size() < count; ++i) {
    CVector c = CVector::Zero(static_cast<Index>(d));
    c(static_cast<Index>(i)) = 1.0;
    out.push_back(c / element_norm(sys, c));
  }
  while (out.size() < count) {
    CVector c = random_coefficients(d, rng);
    const double nc = element_norm(sys, c);
    if (nc > 0.0) out.push_back(c / nc);
  }
  return out;
}

CVector adjoint_coefficients(const PersistentSystem& sys, const CVector& c) {
  return sys.adjoint_matrix() * c.conjugate();
}

}  // namespace

// ---------------------------------------------------------------------------
// PersistentSystem

PersistentSystem::PersistentSystem(AlgebraShape shape,
                                   std::vector<AlgebraElement> basis,
                                   CMatrix p_projection)
    : shape_(std::move(shape)), basis_(std::move(basis)), p_(std::move(p_projection)) {
  const auto rows = static_cast<Index>(shape_.element_dim());
  if (basis_.empty()) throw InputError("persistent system must be nonempty");
  stacked_ = stack(basis_, rows);
  const Index d = stacked_.cols();

  CMatrix normalized = stacked_;
  for (Index i = 0; i < d; ++i) normalized.col(i).normalize();
  const auto sv = singular_values(normalized);
  min_singular_ = sv.back();
  if (min_singular_ < tol::agreement) {
    throw InvariantError("persistent system basis is linearly dependent");
  }
  pinv_ = (stacked_.adjoint() * stacked_).ldlt().solve(stacked_.adjoint());

  adjoint_ = CMatrix(d, d);
  selfadjoint_ = true;
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const AlgebraElement star = adjoint(basis_[i]);
    const Expansion e = expand(star);
    adjoint_.col(static_cast<Index>(i)) = e.coefficients;
    adjoint_residual_ = std::max(adjoint_residual_, e.residual);
    if ((star.vec() - basis_[i].vec()).norm() != 0.0) selfadjoint_ = false;
  }
}

Expansion PersistentSystem::expand_vec(const CVector& v) const {
  Expansion e;
  e.coefficients = pinv_ * v;
  e.residual = (v - stacked_ * e.coefficients).norm();
  return e;
}

Expansion PersistentSystem::expand(const AlgebraElement& x) const {
  if (!(x.shape() == shape_)) {
    throw InputError("persistent system: element lives on a different algebra");
  }
  return expand_vec(x.vec());
}

AlgebraElement PersistentSystem::element(const CVector& coefficients) const {
  if (coefficients.size() != stacked_.cols()) {
    throw InputError("persistent system: coefficient vector has wrong length");
  }
  return AlgebraElement::from_vec(shape_, stacked_ * coefficients);
}

PersistentSystem persistent_system(const Channel& ch, const SpectralSplit& split) {
  const AlgebraShape& shape = ch.shape();
  const CMatrix& p = split.p_projection;
  const auto dd = static_cast<Index>(shape.element_dim());
  if (p.rows() != dd || p.cols() != dd) {
    throw InputError("persistent_system: projection does not match the algebra");
  }
  const AlgebraElement one = AlgebraElement::identity(shape);
  const CVector one_vec = one.vec();
  const double unit_defect = (p * one_vec - one_vec).norm();
  if (unit_defect > tol::agreement * std::max(1.0, one_vec.norm())) {
    std::ostringstream os;
    os << "persistent_system: P1 != 1 (defect " << unit_defect
       << "); channel is not unital or the split is inconsistent";
    throw InputError(os.str());
  }

  const std::size_t rank = split.rank_p();
  const CMatrix range = range_basis(p, tol::agreement);
  if (static_cast<std::size_t>(range.cols()) != rank) {
    std::ostringstream os;
    os << "persistent_system: rank of P is " << range.cols() << " but "
       << rank << " peripheral eigenvalues were found";
    throw NumericalError(os.str());
  }

  const CMatrix j = adjoint_permutation(shape);
  const std::vector<CVector> seed{one_vec / one_vec.norm()};

  // Selfadjoint candidates: real and imaginary parts of the range vectors.
  std::vector<CVector> hermitian;
  bool star_closed = true;
  for (Index c = 0; c < range.cols(); ++c) {
    const CVector w = range.col(c);
    const CVector wstar = j * w.conjugate();
    for (CVector h : {CVector(0.5 * (w + wstar)),
                      CVector(Complex(0.0, -0.5) * (w - wstar))}) {
      // Make the imaginary-part candidate exactly selfadjoint as well.
      h = 0.5 * (h + CVector(j * h.conjugate()));
      const double nh = h.norm();
      if (nh < tol::structural) continue;
      if ((p * h - h).norm() > tol::agreement * nh) star_closed = false;
      hermitian.push_back(h);
    }
  }

  std::vector<CVector> ortho;
  if (star_closed) ortho = pivoted_basis(seed, hermitian, rank, true);
  bool selfadjoint = star_closed && ortho.size() == rank;
  if (!selfadjoint) {
    std::vector<CVector> cols;
    for (Index c = 0; c < range.cols(); ++c) cols.push_back(range.col(c));
    ortho = pivoted_basis(seed, cols, rank, false);
  }
  if (ortho.size() != rank) {
    throw NumericalError("persistent_system: could not assemble a basis of P(A)");
  }

  std::vector<AlgebraElement> basis;
  basis.push_back(one);
  for (std::size_t i = 1; i < ortho.size(); ++i) {
    CVector v = ortho[i];
    if (selfadjoint) v = 0.5 * (v + CVector(j * v.conjugate()));
    basis.push_back(AlgebraElement::from_vec(shape, v));
  }
  return PersistentSystem(shape, std::move(basis), p);
}

// ---------------------------------------------------------------------------
// Product

ProductResult choi_effros_product(const PersistentSystem& sys,
                                  const AlgebraElement& a,
                                  const AlgebraElement& b) {
  for (const AlgebraElement* x : {&a, &b}) {
    const Expansion e = sys.expand(*x);
    if (e.residual > tol::agreement * std::max(1.0, x->vec().norm())) {
      std::ostringstream os;
      os << "choi_effros_product: operand is not in the persistent system "
            "(distance "
         << e.residual << ")";
      throw InputError(os.str());
    }
  }
  const CVector pab = sys.p_projection() * multiply(a, b).vec();
  ProductResult out{AlgebraElement::from_vec(sys.shape(), pab), {}};
  out.coefficients = sys.expand_vec(pab).coefficients;
  return out;
}

ProductTable::ProductTable(std::size_t dim)
    : dim_(dim), c_(dim * dim * dim, Complex(0.0)) {}

CVector ProductTable::multiply(const CVector& a, const CVector& b) const {
  const auto d = static_cast<Index>(dim_);
  if (a.size() != d || b.size() != d) {
    throw InputError("product table: coefficient vector has wrong length");
  }
  CVector out = CVector::Zero(d);
  for (std::size_t i = 0; i < dim_; ++i) {
    const Complex ai = a(static_cast<Index>(i));
    if (ai == Complex(0.0)) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      const Complex aibj = ai * b(static_cast<Index>(j));
      if (aibj == Complex(0.0)) continue;
      for (std::size_t k = 0; k < dim_; ++k) {
        out(static_cast<Index>(k)) += aibj * at(i, j, k);
      }
    }
  }
  return out;
}

CMatrix ProductTable::left_regular(const CVector& a) const {
  const auto d = static_cast<Index>(dim_);
  CMatrix l = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < dim_; ++i) {
    const Complex ai = a(static_cast<Index>(i));
    if (ai == Complex(0.0)) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      for (std::size_t k = 0; k < dim_; ++k) {
        l(static_cast<Index>(k), static_cast<Index>(j)) += ai * at(i, j, k);
      }
    }
  }
  return l;
}

ProductTable product_table(const PersistentSystem& sys) {
  const std::size_t d = sys.dim();
  ProductTable table(d);
  const auto& basis = sys.basis();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const CVector pab = sys.p_projection() * multiply(basis[i], basis[j]).vec();
      const Expansion e = sys.expand_vec(pab);
      const double scale = std::max(1.0, pab.norm());
      table.expansion_residual = std::max(table.expansion_residual, e.residual / scale);
      if (e.residual > kTableTol * scale) {
        std::ostringstream os;
        os << "product_table: P(e_" << i << " e_" << j
           << ") leaves the persistent system (residual " << e.residual << ")";
        throw NumericalError(os.str());
      }
      for (std::size_t k = 0; k < d; ++k) {
        table.at(i, j, k) = e.coefficients(static_cast<Index>(k));
      }
    }
  }
  // Element 0 is the unit: snap its row and column after checking them.
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      const Complex want = j == k ? Complex(1.0) : Complex(0.0);
      const double defect =
          std::max(std::abs(table.at(0, j, k) - want), std::abs(table.at(j, 0, k) - want));
      if (defect > kTableTol) {
        std::ostringstream os;
        os << "product_table: unit law fails on e_" << j << " (defect "
           << defect << ")";
        throw NumericalError(os.str());
      }
      table.at(0, j, k) = want;
      table.at(j, 0, k) = want;
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Certificates

CstarCertificate certify_cstar(const PersistentSystem& sys,
                               const ProductTable& table, std::uint64_t seed,
                               std::size_t samples) {
  const std::size_t d = sys.dim();
  const auto di = static_cast<Index>(d);
  const CMatrix& b = sys.stacked();
  CstarCertificate out;

  auto unit_vec = [di](std::size_t i) {
    CVector v = CVector::Zero(di);
    v(static_cast<Index>(i)) = 1.0;
    return v;
  };

  std::vector<CVector> rows(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      CVector v(di);
      for (std::size_t k = 0; k < d; ++k) v(static_cast<Index>(k)) = table.at(i, j, k);
      rows[i * d + j] = std::move(v);
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) {
        const CVector lhs = table.multiply(rows[i * d + j], unit_vec(k));
        const CVector rhs = table.multiply(unit_vec(i), rows[j * d + k]);
        out.associativity = std::max(out.associativity, (b * (lhs - rhs)).norm());
      }
    }
  }

  for (std::size_t j = 0; j < d; ++j) {
    const CVector e = unit_vec(j);
    out.unit = std::max(out.unit, (b * (table.multiply(unit_vec(0), e) - e)).norm());
    out.unit = std::max(out.unit, (b * (table.multiply(e, unit_vec(0)) - e)).norm());
  }

  const CMatrix& adj = sys.adjoint_matrix();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const CVector lhs = adjoint_coefficients(sys, rows[i * d + j]);
      const CVector rhs = table.multiply(adj.col(static_cast<Index>(j)),
                                         adj.col(static_cast<Index>(i)));
      out.involution = std::max(out.involution, (b * (lhs - rhs)).norm());
    }
  }

  const auto xs = sample_system(sys, samples, seed);
  for (const auto& c : xs) {
    const CVector xstar_x = table.multiply(adjoint_coefficients(sys, c), c);
    const double nx = element_norm(sys, xstar_x);
    out.cstar_identity = std::max(out.cstar_identity, std::abs(nx - 1.0));

    const auto ev = eig(table.left_regular(xstar_x)).eigenvalues;
    const double scale = std::max(nx, 1e-300);
    for (const Complex z : ev) {
      const double bad = std::max(-z.real(), std::abs(z.imag())) / scale;
      out.positivity = std::max(out.positivity, bad);
    }
  }

  out.associativity_ok = out.associativity <= tol::agreement;
  out.unit_ok = out.unit <= tol::agreement;
  out.involution_ok = out.involution <= tol::agreement;
  out.cstar_identity_ok = out.cstar_identity <= tol::agreement;
  out.positivity_ok = out.positivity <= tol::agreement;
  out.passed = out.associativity_ok && out.unit_ok && out.involution_ok &&
               out.cstar_identity_ok && out.positivity_ok;

  if (!out.cstar_identity_ok && out.associativity_ok) {
    out.note = "C*-identity fails under original norm";
    // Operator norm of y -> x o y for the Frobenius inner product on S.
    Eigen::HouseholderQR<CMatrix> qr(b);
    const CMatrix r = qr.matrixQR().topRows(di).triangularView<Eigen::Upper>();
    const CMatrix r_inv = r.inverse();
    auto regular_norm = [&](const CVector& c) {
      return operator_norm(r * table.left_regular(c) * r_inv);
    };
    double worst = 0.0;
    for (const auto& c : xs) {
      const double n1 = regular_norm(c);
      if (n1 == 0.0) continue;
      const CVector cs = c / n1;
      const CVector xstar_x = table.multiply(adjoint_coefficients(sys, cs), cs);
      worst = std::max(worst, std::abs(regular_norm(xstar_x) - 1.0));
    }
    out.regular_norm_cstar_identity = worst;
  }
  return out;
}

AutomorphismCertificate certify_automorphism(const Channel& ch,
                                             const PersistentSystem& sys,
                                             const ProductTable& table,
                                             std::uint64_t seed,
                                             std::size_t samples) {
  if (!(ch.shape() == sys.shape())) {
    throw InputError("certify_automorphism: channel and system differ in shape");
  }
  const std::size_t d = sys.dim();
  const auto di = static_cast<Index>(d);
  const CMatrix& b = sys.stacked();
  AutomorphismCertificate out;
  out.restriction = CMatrix(di, di);
  for (std::size_t i = 0; i < d; ++i) {
    const CVector img = ch.superop() * b.col(static_cast<Index>(i));
    const Expansion e = sys.expand_vec(img);
    out.restriction.col(static_cast<Index>(i)) = e.coefficients;
    out.invariance_residual =
        std::max(out.invariance_residual, e.residual / std::max(1.0, img.norm()));
  }
  const auto sv = singular_values(out.restriction);
  out.condition_number = sv.back() > 0.0 ? sv.front() / sv.back()
                                         : std::numeric_limits<double>::infinity();
  out.invertible = sv.back() > tol::agreement * std::max(1.0, sv.front());

  const CMatrix& f = out.restriction;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      CVector cij(di);
      for (std::size_t k = 0; k < d; ++k) cij(static_cast<Index>(k)) = table.at(i, j, k);
      const CVector lhs = f * cij;
      const CVector rhs =
          table.multiply(f.col(static_cast<Index>(i)), f.col(static_cast<Index>(j)));
      out.multiplicativity = std::max(out.multiplicativity, (b * (lhs - rhs)).norm());
    }
    const CVector lhs = f * sys.adjoint_matrix().col(static_cast<Index>(i));
    const CVector rhs = adjoint_coefficients(sys, f.col(static_cast<Index>(i)));
    out.involution = std::max(out.involution, (b * (lhs - rhs)).norm());
  }

  for (const auto& c : sample_system(sys, samples, seed)) {
    const double image = norm(ch(sys.element(c)));
    out.isometry = std::max(out.isometry, std::abs(image - 1.0));
  }
  out.isometry_ok = out.isometry <= tol::agreement;
  out.passed = out.invertible && out.invariance_residual <= tol::agreement &&
               out.multiplicativity <= tol::agreement &&
               out.involution <= tol::agreement;
  return out;
}

// ---------------------------------------------------------------------------
// Multiplicative domain and centre

namespace {

void require_unital_cp(const Channel& ch, const char* who) {
  if (!is_unital(ch, tol::agreement)) {
    throw InputError(std::string(who) + ": channel is not unital");
  }
  if (!is_completely_positive(ch, tol::agreement).completely_positive) {
    throw InputError(std::string(who) + ": channel is not completely positive");
  }
}

// Rows of Phi(x y) - Phi(x) Phi(y) and Phi(y x) - Phi(y) Phi(x) over the
// matrix units y, as a linear map of vec(x).
CMatrix bimodule_constraints(const AlgebraShape& shape, const CMatrix& s) {
  const auto dd = static_cast<Index>(shape.element_dim());
  CMatrix system(2 * dd * dd, dd);
  Index row = 0;
  for (const auto& y : matrix_unit_basis(shape)) {
    const AlgebraElement py = AlgebraElement::from_vec(shape, s * y.vec());
    system.middleRows(row, dd) = s * right_multiplication(y) - right_multiplication(py) * s;
    row += dd;
    system.middleRows(row, dd) = s * left_multiplication(y) - left_multiplication(py) * s;
    row += dd;
  }
  return system;
}

// Quadratic identities on the basis and on one generic combination.
double quadratic_residual(const AlgebraShape& shape, const CMatrix& s,
                          const std::vector<AlgebraElement>& basis) {
  auto apply = [&](const AlgebraElement& x) {
    return AlgebraElement::from_vec(shape, s * x.vec());
  };
  std::vector<AlgebraElement> probes = basis;
  if (!basis.empty()) {
    AlgebraElement sum = AlgebraElement::zero(shape);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      sum += Complex(1.0, 0.5 * static_cast<double>(i)) * basis[i];
    }
    probes.push_back(sum);
  }
  double worst = 0.0;
  for (const auto& x : probes) {
    const AlgebraElement xs = adjoint(x);
    const double scale = std::max(1.0, norm(x) * norm(x));
    const double r1 = norm(apply(multiply(xs, x)) - multiply(apply(xs), apply(x)));
    const double r2 = norm(apply(multiply(x, xs)) - multiply(apply(x), apply(xs)));
    worst = std::max(worst, std::max(r1, r2) / scale);
  }
  return worst;
}

MultiplicativeDomain finish_domain(const AlgebraShape& shape, CMatrix stacked) {
  MultiplicativeDomain out;
  out.stacked = std::move(stacked);
  for (Index c = 0; c < out.stacked.cols(); ++c) {
    out.basis.push_back(AlgebraElement::from_vec(shape, out.stacked.col(c)));
  }
  return out;
}

void validate_domain(const MultiplicativeDomain& d, double tol, const char* who) {
  if (d.validation_residual > tol) {
    std::ostringstream os;
    os << who << ": quadratic identities fail on the computed domain (residual "
       << d.validation_residual << ")";
    throw InputError(os.str());
  }
}

}  // namespace

MultiplicativeDomain multiplicative_domain(const Channel& ch, double tol) {
  require_unital_cp(ch, "multiplicative_domain");
  const CMatrix& s = ch.superop();
  const double scale = std::max(1.0, operator_norm(s));
  MultiplicativeDomain out = finish_domain(
      ch.shape(), null_space(bimodule_constraints(ch.shape(), s), tol, scale));
  out.powers = 1;
  out.validation_residual = quadratic_residual(ch.shape(), s, out.basis);
  validate_domain(out, tol, "multiplicative_domain");
  return out;
}

MultiplicativeDomain stable_multiplicative_domain(const Channel& ch, double tol,
                                                  std::size_t max_power) {
  require_unital_cp(ch, "stable_multiplicative_domain");
  const AlgebraShape& shape = ch.shape();
  const auto dd = static_cast<Index>(shape.element_dim());
  if (max_power == 0) max_power = 2 * static_cast<std::size_t>(dd);
  CMatrix basis = CMatrix::Identity(dd, dd);
  CMatrix power = CMatrix::Identity(dd, dd);
  std::size_t last_drop = 0;
  double worst = 0.0;
  for (std::size_t n = 1; n <= max_power && basis.cols() > 0; ++n) {
    power = ch.superop() * power;
    const double scale = std::max(1.0, operator_norm(power));
    const CMatrix restricted = bimodule_constraints(shape, power) * basis;
    const CMatrix keep = null_space(restricted, tol, scale);
    if (keep.cols() < basis.cols()) last_drop = n;
    basis = basis * keep;
    // Re-orthonormalize to stop drift across many products.
    if (basis.cols() > 0) {
      Eigen::HouseholderQR<CMatrix> qr(basis);
      basis = qr.householderQ() * CMatrix::Identity(dd, basis.cols());
    }
  }
  MultiplicativeDomain out = finish_domain(shape, basis);
  out.powers = std::max<std::size_t>(1, last_drop);
  power = CMatrix::Identity(dd, dd);
  for (std::size_t n = 1; n <= max_power; ++n) {
    power = ch.superop() * power;
    worst = std::max(worst, quadratic_residual(shape, power, out.basis));
  }
  out.validation_residual = worst;
  validate_domain(out, tol, "stable_multiplicative_domain");
  return out;
}

std::size_t center_dimension(const ProductTable& table, double tol) {
  const std::size_t d = table.dim();
  const auto di = static_cast<Index>(d);
  CMatrix system = CMatrix::Zero(di * di, di);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        system(static_cast<Index>(j * d + k), static_cast<Index>(i)) =
            table.at(i, j, k) - table.at(j, i, k);
      }
    }
  }
  return static_cast<std::size_t>(null_space(system, tol, 1.0).cols());
}

// ---------------------------------------------------------------------------
// Pipeline

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::hamiltonian_persistent_part:
      return "hamiltonian_persistent_part";
    case Verdict::operator_system_only:
      return "operator_system_only";
    case Verdict::not_gapped:
      return "not_gapped";
    case Verdict::not_unital:
      return "not_unital";
  }
  return "operator_system_only";
}

Verdict verdict_from_string(const std::string& s) {
  for (const Verdict v : {Verdict::hamiltonian_persistent_part,
                          Verdict::operator_system_only, Verdict::not_gapped,
                          Verdict::not_unital}) {
    if (to_string(v) == s) return v;
  }
  throw InputError("unknown verdict '" + s + "'");
}

DecoherenceReport decoherence_split(const Channel& ch,
                                    const DecoherenceOptions& options) {
  DecoherenceReport report;
  report.unital = is_unital(ch, tol::agreement);
  report.eigenvalues = eig(ch.superop()).eigenvalues;
  for (const Complex z : report.eigenvalues) {
    report.spectral_radius = std::max(report.spectral_radius, std::abs(z));
  }

  try {
    report.split = analyze_spectrum(ch, options.spectral);
  } catch (const NotGappedError& e) {
    report.verdict = Verdict::not_gapped;
    report.notes.emplace_back(e.what());
  } catch (const InputError& e) {
    report.verdict = Verdict::not_gapped;
    report.notes.emplace_back(e.what());
  } catch (const NumericalError& e) {
    report.verdict = Verdict::not_gapped;
    report.notes.emplace_back(std::string("spectral split failed: ") + e.what());
  }
  if (!report.unital) {
    report.verdict = Verdict::not_unital;
    report.notes.emplace_back("channel does not fix the unit");
    return report;
  }
  if (!report.split) return report;
  if (!report.split->cross_check_note.empty()) {
    report.notes.push_back("contour cross-check: " + report.split->cross_check_note);
  }

  report.verdict = Verdict::operator_system_only;
  auto attempt = [&report](const char* stage, auto&& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      report.notes.push_back(std::string(stage) + ": " + e.what());
      return false;
    }
  };

  attempt("transient decay", [&] {
    report.decay = transient_decay(ch, *report.split, options.decay);
  });
  if (!attempt("persistent system",
               [&] { report.system = persistent_system(ch, *report.split); })) {
    return report;
  }
  attempt("cp check of P", [&] {
    const Channel p(ch.shape(), report.split->p_projection, Provenance::raw);
    report.p_completely_positive = is_completely_positive(p, tol::agreement);
  });
  attempt("product table", [&] { report.table = product_table(*report.system); });
  if (report.table) {
    report.cstar = certify_cstar(*report.system, *report.table, options.seed,
                                 options.samples);
    report.automorphism = certify_automorphism(
        ch, *report.system, *report.table, options.seed, options.samples);
  }
  attempt("multiplicative domain",
          [&] { report.domain = multiplicative_domain(ch, tol::agreement); });
  attempt("stable multiplicative domain", [&] {
    report.stable_domain = stable_multiplicative_domain(ch, tol::agreement);
    const CMatrix& b = report.system->stacked();
    const CMatrix& m = report.stable_domain->stacked;
    if (m.cols() == 0) {
      report.domain_in_S = true;
    } else {
      const CMatrix coeffs = b.colPivHouseholderQr().solve(m);
      report.domain_in_S =
          (m - b * coeffs).norm() <= tol::agreement * std::max(1.0, m.norm());
    }
    report.domain_equals_S =
        report.domain_in_S && report.stable_domain->dim() == report.system->dim();
  });

  attempt("invariant state",
          [&] { report.invariant_state = maximal_invariant_state(ch); });
  if (report.stable_domain && !report.domain_in_S) {
    report.notes.emplace_back(
        report.invariant_state && !report.invariant_state->faithful
            ? "common multiplicative domain of the powers is not inside S; "
              "no faithful invariant state exists"
            : "common multiplicative domain of the powers is not inside S");
  }

  const bool cp = report.p_completely_positive &&
                  report.p_completely_positive->completely_positive;
  if (cp && report.cstar && report.cstar->passed && report.automorphism &&
      report.automorphism->passed) {
    report.verdict = Verdict::hamiltonian_persistent_part;
  }
  if (report.verdict == Verdict::hamiltonian_persistent_part &&
      !report.automorphism->isometry_ok) {
    report.notes.emplace_back("restriction to S is not isometric for the original norm");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Probe

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ProbeTrial probe_channel(const Channel& ch) {
  ProbeTrial t;
  const auto ev = eig(ch.superop()).eigenvalues;
  t.min_modulus = std::numeric_limits<double>::infinity();
  for (const Complex z : ev) t.min_modulus = std::min(t.min_modulus, std::abs(z));
  t.survived = t.min_modulus >= 1.0 - kProbeTol;
  if (!t.survived) return t;
  const auto units = matrix_unit_basis(ch.shape());
  std::vector<AlgebraElement> images;
  for (const auto& e : units) images.push_back(ch(e));
  for (std::size_t i = 0; i < units.size(); ++i) {
    for (std::size_t j = 0; j < units.size(); ++j) {
      const double r =
          norm(ch(multiply(units[i], units[j])) - multiply(images[i], images[j]));
      t.multiplicativity_residual = std::max(t.multiplicativity_residual, r);
    }
  }
  t.automorphism = t.multiplicativity_residual <= kProbeTol;
  return t;
}

ProbeReport conjecture_probe(std::size_t trials, const AlgebraShape& shape,
                             std::uint64_t seed) {
  if (!shape.is_single_block()) {
    throw InputError("conjecture_probe: only full matrix algebras M_n are supported");
  }
  const std::size_t n = shape.block_dim(0);
  ProbeReport report;
  report.trials = trials;
  report.dim = n;
  report.seed = seed;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, t);
    std::mt19937_64 rng(s);
    std::uniform_int_distribution<std::size_t> count(1, n * n);
    const KrausFamily family = random_unital_kraus(n, count(rng), rng);
    ProbeTrial trial = probe_channel(from_kraus(family));
    trial.index = t;
    trial.seed = s;
    trial.kraus_count = family.operators.size();
    if (trial.survived) {
      ++report.survivors;
      if (trial.automorphism) {
        ++report.survivors_automorphic;
      } else {
        trial.kraus = family.operators;
        report.counterexamples.push_back(std::move(trial));
      }
    }
    if (t % 10 == 9) {
      const CMatrix u = random_unitary(n, rng);
      const ProbeTrial control = probe_channel(inner_automorphism(u));
      ++report.controls;
      if (control.survived && control.automorphism) ++report.controls_passed;
    }
  }
  return report;
}

}  // namespace decolab
