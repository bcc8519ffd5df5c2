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

#include "decolab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "decolab/error.hpp"

namespace decolab {

namespace {

using Index = Eigen::Index;

// Permute m so that eigenvalues exposed by its zero pattern sit on the
// diagonal of triangular leading/trailing parts (the permutation step of
// LAPACK's xGEBAL). Returns [ilo, ihi], the remaining coupled block.
std::pair<Index, Index> isolate_eigenvalues(CMatrix& a) {
  const Index n = a.rows();
  Index ilo = 0;
  Index ihi = n - 1;
  auto swap_index = [&a](Index i, Index j) {
    if (i == j) return;
    a.row(i).swap(a.row(j));
    a.col(i).swap(a.col(j));
  };

  // Rows with no off-diagonal entry in the active columns go to the bottom.
  bool found = true;
  while (found && ihi >= ilo) {
    found = false;
    for (Index j = ihi; j >= ilo; --j) {
      bool isolated = true;
      for (Index k = ilo; k <= ihi && isolated; ++k) {
        if (k != j && a(j, k) != Complex(0.0)) isolated = false;
      }
      if (isolated) {
        swap_index(j, ihi);
        --ihi;
        found = true;
        break;
      }
    }
  }
  // Columns with no off-diagonal entry in the active rows go to the left.
  found = true;
  while (found && ilo <= ihi) {
    found = false;
    for (Index j = ilo; j <= ihi; ++j) {
      bool isolated = true;
      for (Index k = ilo; k <= ihi && isolated; ++k) {
        if (k != j && a(k, j) != Complex(0.0)) isolated = false;
      }
      if (isolated) {
        swap_index(j, ilo);
        ++ilo;
        found = true;
        break;
      }
    }
  }
  return {ilo, ihi};
}

Eigen::ComplexSchur<CMatrix> checked_schur(const CMatrix& m, bool compute_u) {
  Eigen::ComplexSchur<CMatrix> schur(m.rows());
  schur.compute(m, compute_u);
  if (schur.info() != Eigen::Success) {
    std::ostringstream os;
    os << "complex Schur iteration did not converge (dimension " << m.rows()
       << ", iteration cap " << schur.getMaxIterations() << ", norm "
       << m.norm() << ")";
    throw NumericalError(os.str());
  }
  return schur;
}

// Swap the adjacent diagonal entries k, k+1 of the upper triangular t,
// updating the Schur vectors u.
void swap_schur_entries(CMatrix& t, CMatrix& u, Index k) {
  const Complex t11 = t(k, k);
  const Complex t12 = t(k, k + 1);
  const Complex t22 = t(k + 1, k + 1);
  Complex x1 = t12;
  Complex x2 = t22 - t11;
  const double len = std::hypot(std::abs(x1), std::abs(x2));
  if (len == 0.0) return;
  x1 /= len;
  x2 /= len;
  Eigen::Matrix2cd q;
  q << x1, -std::conj(x2), x2, std::conj(x1);
  t.middleRows(k, 2) = q.adjoint() * t.middleRows(k, 2);
  t.middleCols(k, 2) = t.middleCols(k, 2) * q;
  u.middleCols(k, 2) = u.middleCols(k, 2) * q;
  t(k + 1, k) = Complex(0.0);
  t(k, k) = t22;
  t(k + 1, k + 1) = t11;
}

}  // namespace

void require_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << what << ": expected a non-empty square matrix, got " << m.rows()
       << "x" << m.cols();
    throw InputError(os.str());
  }
}

void require_finite(const CMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InputError(std::string(what) + ": matrix has non-finite entries");
  }
}

SpectralRegion SpectralRegion::outside_circle(double radius) {
  return SpectralRegion(
      [radius](Complex z) { return std::abs(z) > radius; },
      [radius](Complex z) { return std::abs(std::abs(z) - radius); });
}

SpectralRegion SpectralRegion::inside_circle(double radius) {
  return SpectralRegion(
      [radius](Complex z) { return std::abs(z) < radius; },
      [radius](Complex z) { return std::abs(std::abs(z) - radius); });
}

EigResult eig(const CMatrix& m, bool with_vectors) {
  require_square(m, "eig");
  require_finite(m, "eig");
  EigResult result;
  if (with_vectors) {
    Eigen::ComplexEigenSolver<CMatrix> solver(m.rows());
    solver.compute(m, true);
    if (solver.info() != Eigen::Success) {
      std::ostringstream os;
      os << "eigensolver did not converge (dimension " << m.rows()
         << ", norm " << m.norm() << ")";
      throw NumericalError(os.str());
    }
    const CVector& values = solver.eigenvalues();
    const CMatrix& vectors = solver.eigenvectors();
    result.eigenvalues.assign(values.data(), values.data() + values.size());
    for (Index i = 0; i < values.size(); ++i) {
      const double r = (m * vectors.col(i) - values(i) * vectors.col(i)).norm();
      result.residual = std::max(result.residual, r);
    }
    result.eigenvectors = vectors;
    return result;
  }

  CMatrix a = m;
  const auto [ilo, ihi] = isolate_eigenvalues(a);
  const Index n = a.rows();
  result.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (Index k = 0; k < ilo; ++k) result.eigenvalues.push_back(a(k, k));
  if (ihi >= ilo) {
    const Index len = ihi - ilo + 1;
    const CMatrix block = a.block(ilo, ilo, len, len);
    const auto schur = checked_schur(block, false);
    for (Index k = 0; k < len; ++k) {
      result.eigenvalues.push_back(schur.matrixT()(k, k));
    }
  }
  for (Index k = ihi + 1; k < n; ++k) result.eigenvalues.push_back(a(k, k));
  return result;
}

InvariantSubspace schur_subspace(const CMatrix& m,
                                 const SpectralRegion& keep) {
  require_square(m, "schur_subspace");
  require_finite(m, "schur_subspace");
  const Index n = m.rows();
  const auto schur = checked_schur(m, true);
  CMatrix t = schur.matrixT();
  CMatrix u = schur.matrixU();
  t.triangularView<Eigen::StrictlyLower>().setZero();

  for (Index i = 0; i < n; ++i) {
    const Complex z = t(i, i);
    if (keep.boundary_distance(z) < tol::structural) {
      std::ostringstream os;
      os << "ambiguous spectral split: eigenvalue " << z
         << " lies within 1e-10 of the region boundary";
      throw NumericalError(os.str());
    }
  }

  // Bubble kept eigenvalues to the leading positions.
  Index kept = 0;
  for (Index i = 0; i < n; ++i) {
    if (!keep.contains(t(i, i))) continue;
    for (Index k = i; k > kept; --k) swap_schur_entries(t, u, k - 1);
    ++kept;
  }

  InvariantSubspace out;
  for (Index i = 0; i < kept; ++i) out.kept_eigenvalues.push_back(t(i, i));
  out.basis = u.leftCols(kept);
  if (kept == 0) {
    out.projection = CMatrix::Zero(n, n);
    return out;
  }
  if (kept == n) {
    out.projection = CMatrix::Identity(n, n);
    return out;
  }

  const Index rest = n - kept;
  const CMatrix t11 = t.topLeftCorner(kept, kept);
  const CMatrix t12 = t.topRightCorner(kept, rest);
  const CMatrix t22 = t.bottomRightCorner(rest, rest);
  // Column j of T11 R - R T22 = T12 only involves columns l <= j of R.
  CMatrix r = CMatrix::Zero(kept, rest);
  for (Index j = 0; j < rest; ++j) {
    CVector rhs = t12.col(j);
    for (Index l = 0; l < j; ++l) rhs += r.col(l) * t22(l, j);
    CMatrix shifted = t11;
    shifted.diagonal().array() -= t22(j, j);
    r.col(j) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  CMatrix block = CMatrix::Zero(n, n);
  block.topLeftCorner(kept, kept).setIdentity();
  block.topRightCorner(kept, rest) = r;
  out.projection = u * block * u.adjoint();
  if (!out.projection.allFinite()) {
    throw NumericalError("schur_subspace: Sylvester solve overflowed");
  }
  return out;
}

CMatrix resolvent(const CMatrix& m, Complex z) {
  require_square(m, "resolvent");
  CMatrix shifted = -m;
  shifted.diagonal().array() += z;
  Eigen::PartialPivLU<CMatrix> lu(shifted);
  const double rcond = lu.rcond();
  CMatrix r = lu.inverse();
  if (!(rcond > 1e-14) || !r.allFinite()) {
    std::ostringstream os;
    os << "resolvent: z = " << z << " is in the numerical spectrum (rcond "
       << rcond << ")";
    throw NumericalError(os.str());
  }
  return r;
}

ContourProjection contour_projection(const CMatrix& m, const ContourSpec& c) {
  require_square(m, "contour_projection");
  require_finite(m, "contour_projection");
  if (!(c.radius > 0.0)) {
    throw InputError("contour_projection: radius must be positive");
  }
  if (c.nodes < 1 || c.nodes > kContourNodeCap) {
    throw InputError("contour_projection: node count out of range");
  }
  for (const Complex z : eig(m).eigenvalues) {
    if (std::abs(std::abs(z) - c.radius) < tol::agreement) {
      std::ostringstream os;
      os << "contour_projection: eigenvalue " << z
         << " lies on the contour |z| = " << c.radius;
      throw NumericalError(os.str());
    }
  }

  const Index n = m.rows();
  // Sum of z_k R(z_k) over the nodes k = offset, offset + stride, ... of an
  // N-point grid; (1/N) times the full sum is the trapezoid rule since
  // dz = i z dtheta.
  auto partial_sum = [&](std::size_t count, std::size_t offset,
                         std::size_t stride) {
    CMatrix acc = CMatrix::Zero(n, n);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(count);
    for (std::size_t k = offset; k < count; k += stride) {
      const Complex z = std::polar(c.radius, step * static_cast<double>(k));
      acc += z * resolvent(m, z);
    }
    return acc;
  };

  std::size_t nodes = c.nodes;
  CMatrix sum = partial_sum(nodes, 0, 1);
  while (true) {
    CMatrix q = sum / static_cast<double>(nodes);
    const double residual = (q * q - q).norm();
    if (residual <= tol::structural) {
      return ContourProjection{std::move(q), nodes, residual};
    }
    if (nodes * 2 > kContourNodeCap) {
      std::ostringstream os;
      os << "contour_projection: no convergence at the node cap ("
         << kContourNodeCap << " nodes, ||Q^2 - Q|| = " << residual << ")";
      throw NumericalError(os.str());
    }
    sum += partial_sum(nodes * 2, 1, 2);
    nodes *= 2;
  }
}

std::vector<double> singular_values(const CMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

double operator_norm(const CMatrix& m) {
  require_finite(m, "operator_norm");
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

CMatrix matrix_exp(const CMatrix& m, double t) {
  require_square(m, "matrix_exp");
  require_finite(m, "matrix_exp");
  const CMatrix scaled = t * m;
  CMatrix out = scaled.exp();
  if (!out.allFinite()) {
    std::ostringstream os;
    os << "matrix_exp: overflow (||t m||_F = " << scaled.norm() << ")";
    throw NumericalError(os.str());
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix null_space(const CMatrix& m, double rel_tol, double scale) {
  const Index cols = m.cols();
  if (m.rows() == 0 || cols == 0) return CMatrix::Identity(cols, cols);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) : 0.0;
  const double cut = rel_tol * std::max(scale, top);
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return svd.matrixV().rightCols(cols - rank);
}

CMatrix range_basis(const CMatrix& m, double rel_tol) {
  const Index rows = m.rows();
  if (m.cols() == 0) return CMatrix::Zero(rows, 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double top = s.size() > 0 ? s(0) : 0.0;
  const double cut = rel_tol * top;
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut && top > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

CMatrix random_gaussian(std::size_t rows, std::size_t cols,
                        std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  CMatrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = 0; i < out.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = Complex(re, im);
    }
  }
  return out;
}

CMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  const CMatrix z = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

SpectrumMatch match_spectra(std::vector<Complex> a, std::vector<Complex> b,
                            double tol) {
  SpectrumMatch out;
  if (a.size() != b.size()) {
    out.worst_distance = std::numeric_limits<double>::infinity();
    return out;
  }
  auto order = [](Complex x, Complex y) {
    const double ax = std::arg(x);
    const double ay = std::arg(y);
    if (ax != ay) return ax < ay;
    return std::abs(x) < std::abs(y);
  };
  std::sort(a.begin(), a.end(), order);
  std::sort(b.begin(), b.end(), order);
  std::vector<bool> used(b.size(), false);
  for (const Complex x : a) {
    std::size_t best = b.size();
    double best_distance = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best_distance) {
        best_distance = d;
        best = j;
      }
    }
    used[best] = true;
    out.worst_distance = std::max(out.worst_distance, best_distance);
  }
  out.matched = out.worst_distance <= tol;
  return out;
}

}  // namespace decolab
