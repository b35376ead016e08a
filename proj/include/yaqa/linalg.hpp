/*
 * Copyright 2026 The yaqa-round Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef YAQA_LINALG_HPP
#define YAQA_LINALG_HPP

#include "yaqa/error.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace yaqa
{

/// Dense row-major matrix of doubles.
class Matrix
{
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
    : _rows(rows), _cols(cols), _data(rows * cols, fill)
  {
  }
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return _rows; }
  std::size_t cols() const noexcept { return _cols; }
  std::size_t size() const noexcept { return _data.size(); }
  bool empty() const noexcept { return _data.empty(); }

  double &operator()(std::size_t i, std::size_t j) { return _data[i * _cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return _data[i * _cols + j]; }

  std::span<double> row(std::size_t i) { return {_data.data() + i * _cols, _cols}; }
  std::span<const double> row(std::size_t i) const { return {_data.data() + i * _cols, _cols}; }

  std::vector<double> &data() noexcept { return _data; }
  const std::vector<double> &data() const noexcept { return _data; }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix &b);

  double trace() const;

  Matrix &operator+=(const Matrix &o);
  Matrix &operator-=(const Matrix &o);
  Matrix &operator*=(double s);

  friend bool operator==(const Matrix &a, const Matrix &b)
  {
    return a._rows == b._rows && a._cols == b._cols && a._data == b._data;
  }

private:
  std::size_t _rows = 0;
  std::size_t _cols = 0;
  std::vector<double> _data;
};

Matrix operator+(Matrix a, const Matrix &b);
Matrix operator-(Matrix a, const Matrix &b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix &a, const Matrix &b);

/// a^T * b without materialising the transpose.
Matrix matmul_tn(const Matrix &a, const Matrix &b);

std::ostream &operator<<(std::ostream &os, const Matrix &m);

/// Symmetric matrix. Construction symmetrises the input as (A + A^T) / 2 so
/// that entry (i, j) and (j, i) are always bit-identical.
class SymMatrix
{
public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t n) : _m(n, n) {}
  explicit SymMatrix(const Matrix &a);

  static SymMatrix identity(std::size_t n) { return SymMatrix(Matrix::identity(n)); }

  std::size_t dim() const noexcept { return _m.rows(); }
  double operator()(std::size_t i, std::size_t j) const { return _m(i, j); }
  void set(std::size_t i, std::size_t j, double v)
  {
    _m(i, j) = v;
    _m(j, i) = v;
  }

  const Matrix &matrix() const noexcept { return _m; }
  double trace() const { return _m.trace(); }

  /// H + reg * (tr(H) / n) * I.
  SymMatrix regularized(double reg) const;

  friend bool operator==(const SymMatrix &a, const SymMatrix &b) { return a._m == b._m; }

private:
  Matrix _m;
};

struct LDLFactors
{
  Matrix L;              // unit lower triangular
  std::vector<double> D; // pivots, all > 0
};

struct BlockLDLFactors
{
  Matrix L; // block unit lower triangular, identity diagonal blocks
  Matrix D; // block diagonal
  std::size_t block = 1;

  double trace_d() const { return D.trace(); }
};

struct EigenDecomp
{
  Matrix Q;                   // columns are eigenvectors
  std::vector<double> values; // descending
};

/// H + reg*(tr(H)/n)*I = L diag(D) L^T.
LDLFactors ldl(const SymMatrix &h, double reg = 0.0);

/// Block Gaussian elimination with g x g pivot blocks. For g == 1 the
/// arithmetic is identical to ldl(), operation for operation.
BlockLDLFactors block_ldl(const SymMatrix &h, std::size_t g, double reg = 0.0);

/// Cyclic Jacobi eigensolver, eigenvalues sorted descending.
EigenDecomp sym_eigen(const SymMatrix &h);

/// sum_i sqrt(max(lambda_i, 0)); eigenvalues below 1e-12 * lambda_max count as zero.
double trace_sqrt(const SymMatrix &h);

/// Number of eigenvalues above rel_tol * lambda_max.
std::size_t numerical_rank(const SymMatrix &h, double rel_tol = 1e-6);

/// Replaces negative eigenvalues by zero.
SymMatrix clamp_psd(const SymMatrix &h);

Matrix kron(const Matrix &a, const Matrix &b);

double frob_inner(const Matrix &a, const Matrix &b);
double frob_norm(const Matrix &a);
double frob_cosine(const Matrix &a, const Matrix &b);

/// Row-major flattening: vec(W)[i * n + j] = W(i, j). With this ordering the
/// row-vector identity vec(X) (A kron B) = vec(A^T X B) holds.
std::vector<double> vec(const Matrix &w);
Matrix unvec(std::span<const double> v, std::size_t m, std::size_t n);

/// Row vector times matrix.
std::vector<double> vecmat(std::span<const double> v, const Matrix &a);
/// x^T A x.
double quad_form(std::span<const double> x, const Matrix &a);

// Binary container: "KRND", u32 version, u64 rows, u64 cols, row-major f64 LE.
inline constexpr std::uint32_t kContainerVersion = 1;
void write_matrix(std::ostream &os, const Matrix &m);
Matrix read_matrix(std::istream &is);
void save_matrix(const std::string &path, const Matrix &m);
Matrix load_matrix(const std::string &path);

void write_csv(std::ostream &os, const Matrix &m);
Matrix read_csv(std::istream &is);

} // namespace yaqa

#endif // YAQA_LINALG_HPP
