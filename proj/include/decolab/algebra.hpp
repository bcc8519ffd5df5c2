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

// Finite-dimensional C*-algebras  A = M_{n_1} (+) ... (+) M_{n_K}.
//
// Vectorization convention (used by every superoperator in the library):
// each block is stacked column-major and the blocks are concatenated in shape
// order. For a single 2x2 block [[a, b], [c, d]] the vector is (a, c, b, d),
// so the matrix-unit basis in vec order is E11, E21, E12, E22.
//
// Commutative algebras C^m are the shape (1, ..., 1).

#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "decolab/numerics.hpp"

namespace decolab {

class AlgebraShape {
 public:
  explicit AlgebraShape(std::vector<std::size_t> block_dims);

  /// C^m as the shape (1, ..., 1).
  static AlgebraShape abelian(std::size_t m);
  /// The full matrix algebra M_n.
  static AlgebraShape full(std::size_t n);

  const std::vector<std::size_t>& block_dims() const { return dims_; }
  std::size_t block_count() const { return dims_.size(); }
  std::size_t block_dim(std::size_t k) const { return dims_[k]; }
  /// Offset of block k inside vec coordinates.
  std::size_t block_offset(std::size_t k) const { return offsets_[k]; }
  /// D = sum n_k^2.
  std::size_t element_dim() const { return element_dim_; }
  /// N = sum n_k, the size of the block-diagonal embedding into M_N.
  std::size_t matrix_size() const { return matrix_size_; }
  bool is_single_block() const { return dims_.size() == 1; }

  /// Position of block entry (i, j) of block k in vec coordinates.
  std::size_t vec_index(std::size_t k, std::size_t i, std::size_t j) const {
    return offsets_[k] + i + j * dims_[k];
  }

  bool operator==(const AlgebraShape& other) const {
    return dims_ == other.dims_;
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  std::size_t element_dim_ = 0;
  std::size_t matrix_size_ = 0;
};

class AlgebraElement {
 public:
  AlgebraElement(AlgebraShape shape, std::vector<CMatrix> blocks);

  static AlgebraElement zero(const AlgebraShape& shape);
  static AlgebraElement identity(const AlgebraShape& shape);
  static AlgebraElement from_vec(const AlgebraShape& shape, const CVector& v);
  /// Compress an N x N matrix onto the diagonal blocks (the block-diagonal
  /// conditional expectation M_N -> A).
  static AlgebraElement from_block_diagonal(const AlgebraShape& shape,
                                            const CMatrix& m);

  const AlgebraShape& shape() const { return shape_; }
  const CMatrix& block(std::size_t k) const { return blocks_[k]; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

  CVector vec() const;
  /// Block-diagonal N x N matrix.
  CMatrix to_block_diagonal() const;

  AlgebraElement& operator+=(const AlgebraElement& other);
  AlgebraElement& operator-=(const AlgebraElement& other);
  AlgebraElement& operator*=(Complex s);

 private:
  AlgebraShape shape_;
  std::vector<CMatrix> blocks_;
};

AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b);
AlgebraElement operator*(Complex s, AlgebraElement a);

/// Blockwise matrix product.
AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y);
/// Blockwise conjugate transpose.
AlgebraElement adjoint(const AlgebraElement& x);
/// C*-norm: the largest block operator norm.
double norm(const AlgebraElement& x);
/// Selfadjoint to `tol` and every block eigenvalue >= -tol * ||x||.
bool is_positive(const AlgebraElement& x, double tol);

/// Matrix units of every block, in vec order.
std::vector<AlgebraElement> matrix_unit_basis(const AlgebraShape& shape);

/// D x D permutation J with vec(x^*) = J conj(vec(x)).
CMatrix adjoint_permutation(const AlgebraShape& shape);
/// vec(a x) = left_multiplication(a) vec(x).
CMatrix left_multiplication(const AlgebraElement& a);
/// vec(x a) = right_multiplication(a) vec(x).
CMatrix right_multiplication(const AlgebraElement& a);

/// Entries i.i.d. complex Gaussian.
AlgebraElement random_element(const AlgebraShape& shape, std::mt19937_64& rng);

}  // namespace decolab
