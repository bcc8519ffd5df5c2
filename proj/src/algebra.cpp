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

#include "decolab/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <sstream>

#include "decolab/error.hpp"

namespace decolab {

using Index = Eigen::Index;

AlgebraShape::AlgebraShape(std::vector<std::size_t> block_dims)
    : dims_(std::move(block_dims)) {
  if (dims_.empty()) {
    throw InputError("algebra shape needs at least one block");
  }
  offsets_.reserve(dims_.size());
  for (const std::size_t n : dims_) {
    if (n == 0) throw InputError("algebra block dimensions must be positive");
    offsets_.push_back(element_dim_);
    element_dim_ += n * n;
    matrix_size_ += n;
  }
}

AlgebraShape AlgebraShape::abelian(std::size_t m) {
  return AlgebraShape(std::vector<std::size_t>(m, 1));
}

AlgebraShape AlgebraShape::full(std::size_t n) {
  return AlgebraShape(std::vector<std::size_t>{n});
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<CMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (blocks_.size() != shape_.block_count()) {
    throw InputError("algebra element: block count does not match shape");
  }
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto n = static_cast<Index>(shape_.block_dim(k));
    if (blocks_[k].rows() != n || blocks_[k].cols() != n) {
      std::ostringstream os;
      os << "algebra element: block " << k << " is " << blocks_[k].rows()
         << "x" << blocks_[k].cols() << ", expected " << n << "x" << n;
      throw InputError(os.str());
    }
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& shape) {
  std::vector<CMatrix> blocks;
  for (const std::size_t n : shape.block_dims()) {
    blocks.push_back(CMatrix::Zero(static_cast<Index>(n), static_cast<Index>(n)));
  }
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const AlgebraShape& shape) {
  std::vector<CMatrix> blocks;
  for (const std::size_t n : shape.block_dims()) {
    blocks.push_back(
        CMatrix::Identity(static_cast<Index>(n), static_cast<Index>(n)));
  }
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::from_vec(const AlgebraShape& shape,
                                        const CVector& v) {
  if (static_cast<std::size_t>(v.size()) != shape.element_dim()) {
    throw InputError("from_vec: vector length does not match the algebra");
  }
  std::vector<CMatrix> blocks;
  for (std::size_t k = 0; k < shape.block_count(); ++k) {
    const auto n = static_cast<Index>(shape.block_dim(k));
    blocks.push_back(Eigen::Map<const CMatrix>(
        v.data() + shape.block_offset(k), n, n));
  }
  return AlgebraElement(shape, std::move(blocks));
}

AlgebraElement AlgebraElement::from_block_diagonal(const AlgebraShape& shape,
                                                   const CMatrix& m) {
  const auto big = static_cast<Index>(shape.matrix_size());
  if (m.rows() != big || m.cols() != big) {
    throw InputError("from_block_diagonal: matrix size does not match");
  }
  std::vector<CMatrix> blocks;
  Index at = 0;
  for (const std::size_t dim : shape.block_dims()) {
    const auto n = static_cast<Index>(dim);
    blocks.push_back(m.block(at, at, n, n));
    at += n;
  }
  return AlgebraElement(shape, std::move(blocks));
}

CVector AlgebraElement::vec() const {
  CVector v(static_cast<Index>(shape_.element_dim()));
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const auto& b = blocks_[k];
    Eigen::Map<CMatrix>(v.data() + shape_.block_offset(k), b.rows(),
                        b.cols()) = b;
  }
  return v;
}

CMatrix AlgebraElement::to_block_diagonal() const {
  const auto big = static_cast<Index>(shape_.matrix_size());
  CMatrix m = CMatrix::Zero(big, big);
  Index at = 0;
  for (const auto& b : blocks_) {
    m.block(at, at, b.rows(), b.cols()) = b;
    at += b.rows();
  }
  return m;
}

namespace {
void require_same_shape(const AlgebraElement& a, const AlgebraElement& b,
                        const char* what) {
  if (!(a.shape() == b.shape())) {
    throw InputError(std::string(what) + ": algebra shapes differ");
  }
}
}  // namespace

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
  require_same_shape(*this, other, "operator+");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] += other.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
  require_same_shape(*this, other, "operator-");
  for (std::size_t k = 0; k < blocks_.size(); ++k) blocks_[k] -= other.blocks_[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(Complex s) {
  for (auto& b : blocks_) b *= s;
  return *this;
}

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) {
  a += b;
  return a;
}

AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) {
  a -= b;
  return a;
}

AlgebraElement operator*(Complex s, AlgebraElement a) {
  a *= s;
  return a;
}

AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) {
  require_same_shape(x, y, "multiply");
  std::vector<CMatrix> blocks;
  blocks.reserve(x.blocks().size());
  for (std::size_t k = 0; k < x.blocks().size(); ++k) {
    blocks.push_back(x.block(k) * y.block(k));
  }
  return AlgebraElement(x.shape(), std::move(blocks));
}

AlgebraElement adjoint(const AlgebraElement& x) {
  std::vector<CMatrix> blocks;
  blocks.reserve(x.blocks().size());
  for (const auto& b : x.blocks()) blocks.push_back(b.adjoint());
  return AlgebraElement(x.shape(), std::move(blocks));
}

double norm(const AlgebraElement& x) {
  double out = 0.0;
  for (const auto& b : x.blocks()) out = std::max(out, operator_norm(b));
  return out;
}

bool is_positive(const AlgebraElement& x, double tol) {
  const double scale = norm(x);
  for (const auto& b : x.blocks()) {
    if ((b - b.adjoint()).norm() > tol * std::max(1.0, scale)) return false;
    const CMatrix h = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol * scale) return false;
  }
  return true;
}

std::vector<AlgebraElement> matrix_unit_basis(const AlgebraShape& shape) {
  std::vector<AlgebraElement> basis;
  basis.reserve(shape.element_dim());
  for (std::size_t idx = 0; idx < shape.element_dim(); ++idx) {
    CVector v = CVector::Zero(static_cast<Index>(shape.element_dim()));
    v(static_cast<Index>(idx)) = 1.0;
    basis.push_back(AlgebraElement::from_vec(shape, v));
  }
  return basis;
}

CMatrix adjoint_permutation(const AlgebraShape& shape) {
  const auto d = static_cast<Index>(shape.element_dim());
  CMatrix j = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < shape.block_count(); ++k) {
    const std::size_t n = shape.block_dim(k);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        // (x^*)(r, c) = conj(x(c, r))
        j(static_cast<Index>(shape.vec_index(k, r, c)),
          static_cast<Index>(shape.vec_index(k, c, r))) = 1.0;
      }
    }
  }
  return j;
}

CMatrix left_multiplication(const AlgebraElement& a) {
  const auto& shape = a.shape();
  const auto d = static_cast<Index>(shape.element_dim());
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < shape.block_count(); ++k) {
    const auto n = static_cast<Index>(shape.block_dim(k));
    const auto off = static_cast<Index>(shape.block_offset(k));
    out.block(off, off, n * n, n * n) = kron(CMatrix::Identity(n, n), a.block(k));
  }
  return out;
}

CMatrix right_multiplication(const AlgebraElement& a) {
  const auto& shape = a.shape();
  const auto d = static_cast<Index>(shape.element_dim());
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < shape.block_count(); ++k) {
    const auto n = static_cast<Index>(shape.block_dim(k));
    const auto off = static_cast<Index>(shape.block_offset(k));
    out.block(off, off, n * n, n * n) =
        kron(a.block(k).transpose(), CMatrix::Identity(n, n));
  }
  return out;
}

AlgebraElement random_element(const AlgebraShape& shape, std::mt19937_64& rng) {
  std::vector<CMatrix> blocks;
  for (const std::size_t n : shape.block_dims()) {
    blocks.push_back(random_gaussian(n, n, rng));
  }
  return AlgebraElement(shape, std::move(blocks));
}

}  // namespace decolab
