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

// Dense complex linear algebra kernel.
//
// Everything above this layer (algebras, channels, spectral splits) talks to
// matrices only through the functions declared here. Eigen does the heavy
// lifting for Schur, SVD and the matrix exponential; the spectral projections
// (ordered Schur + Sylvester, and the circle quadrature of the resolvent) are
// assembled here.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

namespace decolab {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

/// Tolerance hierarchy shared by every module.
namespace tol {
inline constexpr double structural = 1e-10;      ///< exact identities
inline constexpr double agreement = 1e-8;        ///< cross-method agreement
inline constexpr double classification = 1e-6;  ///< yes/no spectral decisions
}  // namespace tol

/// Circle |z| = radius traversed counter-clockwise, sampled at `nodes` points.
struct ContourSpec {
  double radius = 0.5;
  std::size_t nodes = 16;
};

inline constexpr std::size_t kContourNodeCap = 65536;

struct EigResult {
  std::vector<Complex> eigenvalues;
  /// Columns are unit eigenvectors, present only when requested.
  std::optional<CMatrix> eigenvectors;
  /// max_i ||M v_i - lambda_i v_i||; zero when no vectors were computed.
  double residual = 0.0;
};

/// A region of the complex plane used to select part of a spectrum.
///
/// `boundary_distance` lets the split detect eigenvalues sitting on the
/// boundary, where the spectral projection is ill-defined.
class SpectralRegion {
 public:
  SpectralRegion(std::function<bool(Complex)> keep,
                 std::function<double(Complex)> boundary_distance)
      : keep_(std::move(keep)), distance_(std::move(boundary_distance)) {}

  static SpectralRegion outside_circle(double radius);
  static SpectralRegion inside_circle(double radius);

  bool contains(Complex z) const { return keep_(z); }
  double boundary_distance(Complex z) const { return distance_(z); }

 private:
  std::function<bool(Complex)> keep_;
  std::function<double(Complex)> distance_;
};

struct InvariantSubspace {
  CMatrix basis;       ///< orthonormal columns spanning the kept subspace
  CMatrix projection;  ///< spectral projection along the complement
  std::vector<Complex> kept_eigenvalues;
};

struct ContourProjection {
  CMatrix projection;
  std::size_t nodes = 0;          ///< nodes used after adaptive doubling
  double idempotency_residual = 0;  ///< ||Q^2 - Q||_F at the final node count
};

/// Eigenvalues of a square matrix, with multiplicity.
///
/// Without eigenvectors the matrix is first permuted to isolate eigenvalues
/// that are exposed by its zero pattern (rows/columns with no off-diagonal
/// coupling), so structurally triangular parts are resolved exactly; the
/// remaining block goes through the complex Schur form. With eigenvectors
/// the eigenvalues and vectors come from one consistent solve.
EigResult eig(const CMatrix& m, bool with_vectors = false);

/// Invariant subspace and spectral projection for the eigenvalues in `keep`.
///
/// Routes through an ordered complex Schur form T = [[T11, T12], [0, T22]]
/// and the triangular Sylvester equation T11 R - R T22 = T12, so defective
/// spectra are handled without eigenvectors.
InvariantSubspace schur_subspace(const CMatrix& m, const SpectralRegion& keep);

/// (z I - m)^{-1}.
CMatrix resolvent(const CMatrix& m, Complex z);

/// Trapezoid quadrature of (1 / 2 pi i) \oint (z - m)^{-1} dz on a circle,
/// i.e. the spectral projection onto the eigenvalues strictly inside it.
/// The node count doubles until ||Q^2 - Q||_F <= 1e-10 or the node cap.
ContourProjection contour_projection(const CMatrix& m, const ContourSpec& c);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// exp(t m) by scaling and squaring with a Pade approximant.
CMatrix matrix_exp(const CMatrix& m, double t);

// Helpers shared by the higher layers.

std::vector<double> singular_values(const CMatrix& m);
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Orthonormal basis of the null space: right singular vectors whose singular
/// value is <= rel_tol * max(scale, sigma_max). `scale` keeps a matrix made of
/// rounding noise from being read as full rank.
CMatrix null_space(const CMatrix& m, double rel_tol, double scale = 1.0);

/// Orthonormal basis of the column space under the same threshold.
CMatrix range_basis(const CMatrix& m, double rel_tol);

/// Standard complex Gaussian matrix (real and imaginary parts N(0, 1/2)).
CMatrix random_gaussian(std::size_t rows, std::size_t cols,
                        std::mt19937_64& rng);

/// Haar-distributed unitary (QR of a Gaussian with phase correction).
CMatrix random_unitary(std::size_t n, std::mt19937_64& rng);

struct SpectrumMatch {
  bool matched = false;
  double worst_distance = 0.0;
};

/// Compare two eigenvalue multisets: both are ordered by argument then
/// modulus, then each entry of `a` is paired with the nearest unused entry of
/// `b`. Matched iff sizes agree and every pair is within `tol`.
SpectrumMatch match_spectra(std::vector<Complex> a, std::vector<Complex> b,
                            double tol);

void require_square(const CMatrix& m, const char* what);
void require_finite(const CMatrix& m, const char* what);

}  // namespace decolab
