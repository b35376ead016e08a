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

#include "yaqa/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace yaqa
{

const char *to_string(ErrorKind kind)
{
  switch (kind)
  {
    case ErrorKind::NotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorKind::BadBlockSize:
      return "BadBlockSize";
    case ErrorKind::NoConvergence:
      return "NoConvergence";
    case ErrorKind::ZeroMatrix:
      return "ZeroMatrix";
    case ErrorKind::ShapeMismatch:
      return "ShapeMismatch";
    case ErrorKind::TooLarge:
      return "TooLarge";
    case ErrorKind::NotPowerOfTwo:
      return "NotPowerOfTwo";
    case ErrorKind::EmptyData:
      return "EmptyData";
    case ErrorKind::InvalidArgument:
      return "InvalidArgument";
    case ErrorKind::Io:
      return "Io";
  }
  return "Unknown";
}

namespace
{

void require_same_shape(const Matrix &a, const Matrix &b, const char *op)
{
  if (a.rows() != b.rows() || a.cols() != b.cols())
  {
    std::ostringstream ss;
    ss << op << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorKind::ShapeMismatch, ss.str());
  }
}

void require_square(const Matrix &a, const char *op)
{
  if (a.rows() != a.cols())
    throw Error(ErrorKind::ShapeMismatch, std::string(op) + ": matrix is not square");
}

// Inverse of a small symmetric positive definite block by Gauss-Jordan
// elimination without pivoting. A 1x1 block yields exactly 1.0 / d.
Matrix spd_block_inverse(const Matrix &s)
{
  const std::size_t g = s.rows();
  Matrix a = s;
  Matrix inv = Matrix::identity(g);
  for (std::size_t p = 0; p < g; ++p)
  {
    const double piv_inv = 1.0 / a(p, p);
    for (std::size_t c = 0; c < g; ++c)
    {
      a(p, c) *= piv_inv;
      inv(p, c) *= piv_inv;
    }
    for (std::size_t r = 0; r < g; ++r)
    {
      if (r == p)
        continue;
      const double f = a(r, p);
      if (f == 0.0)
        continue;
      for (std::size_t c = 0; c < g; ++c)
      {
        a(r, c) -= f * a(p, c);
        inv(r, c) -= f * inv(p, c);
      }
    }
  }
  return inv;
}

bool is_positive_definite(const Matrix &s)
{
  const std::size_t g = s.rows();
  Matrix c(g, g);
  for (std::size_t j = 0; j < g; ++j)
  {
    double d = s(j, j);
    for (std::size_t k = 0; k < j; ++k)
      d -= c(j, k) * c(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
      return false;
    c(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < g; ++i)
    {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k)
        v -= c(i, k) * c(j, k);
      c(i, j) = v / c(j, j);
    }
  }
  return true;
}

} // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
  : _rows(rows), _cols(cols), _data(std::move(data))
{
  if (_data.size() != rows * cols)
    throw Error(ErrorKind::ShapeMismatch, "Matrix: data length does not match shape");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
{
  _rows = rows.size();
  _cols = _rows ? rows.begin()->size() : 0;
  _data.reserve(_rows * _cols);
  for (const auto &r : rows)
  {
    if (r.size() != _cols)
      throw Error(ErrorKind::ShapeMismatch, "Matrix: ragged initializer");
    _data.insert(_data.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n)
{
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> d)
{
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i)
    m(i, i) = d[i];
  return m;
}

Matrix Matrix::transpose() const
{
  Matrix t(_cols, _rows);
  for (std::size_t i = 0; i < _rows; ++i)
    for (std::size_t j = 0; j < _cols; ++j)
      t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
{
  if (r0 + nr > _rows || c0 + nc > _cols)
    throw Error(ErrorKind::ShapeMismatch, "Matrix::block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j)
      b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix &b)
{
  if (r0 + b.rows() > _rows || c0 + b.cols() > _cols)
    throw Error(ErrorKind::ShapeMismatch, "Matrix::set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      (*this)(r0 + i, c0 + j) = b(i, j);
}

double Matrix::trace() const
{
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(_rows, _cols); ++i)
    t += (*this)(i, i);
  return t;
}

Matrix &Matrix::operator+=(const Matrix &o)
{
  require_same_shape(*this, o, "operator+=");
  for (std::size_t i = 0; i < _data.size(); ++i)
    _data[i] += o._data[i];
  return *this;
}

Matrix &Matrix::operator-=(const Matrix &o)
{
  require_same_shape(*this, o, "operator-=");
  for (std::size_t i = 0; i < _data.size(); ++i)
    _data[i] -= o._data[i];
  return *this;
}

Matrix &Matrix::operator*=(double s)
{
  for (auto &v : _data)
    v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix &a, const Matrix &b)
{
  if (a.cols() != b.rows())
    throw Error(ErrorKind::ShapeMismatch, "matmul: inner dimensions differ");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
  {
    auto crow = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k)
    {
      const double aik = a(i, k);
      if (aik == 0.0)
        continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j)
        crow[j] += aik * brow[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix &a, const Matrix &b)
{
  if (a.rows() != b.rows())
    throw Error(ErrorKind::ShapeMismatch, "matmul_tn: row counts differ");
  Matrix c(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
  {
    auto brow = b.row(k);
    for (std::size_t i = 0; i < a.cols(); ++i)
    {
      const double aki = a(k, i);
      if (aki == 0.0)
        continue;
      auto crow = c.row(i);
      for (std::size_t j = 0; j < b.cols(); ++j)
        crow[j] += aki * brow[j];
    }
  }
  return c;
}

std::ostream &operator<<(std::ostream &os, const Matrix &m)
{
  for (std::size_t i = 0; i < m.rows(); ++i)
  {
    os << (i == 0 ? "[[" : " [");
    for (std::size_t j = 0; j < m.cols(); ++j)
      os << (j ? ", " : "") << m(i, j);
    os << (i + 1 == m.rows() ? "]]" : "]\n");
  }
  return os;
}

SymMatrix::SymMatrix(const Matrix &a) : _m(a.rows(), a.cols())
{
  require_square(a, "SymMatrix");
  const std::size_t n = a.rows();
  for (std::size_t i = 0; i < n; ++i)
  {
    _m(i, i) = a(i, i);
    for (std::size_t j = 0; j < i; ++j)
    {
      const double v = a(i, j) == a(j, i) ? a(i, j) : 0.5 * (a(i, j) + a(j, i));
      _m(i, j) = v;
      _m(j, i) = v;
    }
  }
}

SymMatrix SymMatrix::regularized(double reg) const
{
  if (reg < 0.0)
    throw Error(ErrorKind::InvalidArgument, "regularization must be nonnegative");
  SymMatrix out = *this;
  const std::size_t n = dim();
  if (reg == 0.0 || n == 0)
    return out;
  const double shift = reg * (trace() / static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    out._m(i, i) += shift;
  return out;
}

LDLFactors ldl(const SymMatrix &h_in, double reg)
{
  const SymMatrix h = h_in.regularized(reg);
  const std::size_t n = h.dim();
  LDLFactors f{Matrix::identity(n), std::vector<double>(n, 0.0)};
  Matrix &L = f.L;
  for (std::size_t j = 0; j < n; ++j)
  {
    double d = h(j, j);
    for (std::size_t k = 0; k < j; ++k)
      d -= (L(j, k) * f.D[k]) * L(j, k);
    if (!(d > 0.0) || !std::isfinite(d))
    {
      std::ostringstream ss;
      ss << "pivot " << j << " is " << d;
      throw Error(ErrorKind::NotPositiveDefinite, ss.str());
    }
    f.D[j] = d;
    const double inv = 1.0 / d;
    for (std::size_t i = j + 1; i < n; ++i)
    {
      double s = h(i, j);
      for (std::size_t k = 0; k < j; ++k)
        s -= (L(i, k) * f.D[k]) * L(j, k);
      L(i, j) = s * inv;
    }
  }
  return f;
}

BlockLDLFactors block_ldl(const SymMatrix &h_in, std::size_t g, double reg)
{
  const std::size_t n = h_in.dim();
  if (g == 0 || n % g != 0)
  {
    std::ostringstream ss;
    ss << "block size " << g << " does not divide " << n;
    throw Error(ErrorKind::BadBlockSize, ss.str());
  }
  const SymMatrix h = h_in.regularized(reg);
  const std::size_t nb = n / g;
  BlockLDLFactors f{Matrix::identity(n), Matrix(n, n), g};

  // L_JK * D_KK products are reused for every row block below J.
  std::vector<Matrix> ld(nb * nb);

  auto l_block = [&](std::size_t bi, std::size_t bj) { return f.L.block(bi * g, bj * g, g, g); };

  // (T * B^T) where T = L_IK D_KK and B = L_JK, accumulated as a fresh product.
  auto mul_bt = [g](const Matrix &t, const Matrix &b) {
    Matrix c(g, g);
    for (std::size_t a = 0; a < g; ++a)
      for (std::size_t e = 0; e < g; ++e)
      {
        double s = 0.0;
        for (std::size_t k = 0; k < g; ++k)
          s += t(a, k) * b(e, k);
        c(a, e) = s;
      }
    return c;
  };
  auto mul = [g](const Matrix &a, const Matrix &b) {
    Matrix c(g, g);
    for (std::size_t r = 0; r < g; ++r)
      for (std::size_t e = 0; e < g; ++e)
      {
        double s = 0.0;
        for (std::size_t k = 0; k < g; ++k)
          s += a(r, k) * b(k, e);
        c(r, e) = s;
      }
    return c;
  };

  for (std::size_t bj = 0; bj < nb; ++bj)
  {
    Matrix s = h.matrix().block(bj * g, bj * g, g, g);
    for (std::size_t bk = 0; bk < bj; ++bk)
    {
      const Matrix prod = mul_bt(ld[bj * nb + bk], l_block(bj, bk));
      for (std::size_t i = 0; i < s.size(); ++i)
        s.data()[i] -= prod.data()[i];
    }
    s = SymMatrix(s).matrix();
    if (!is_positive_definite(s))
    {
      std::ostringstream ss;
      ss << "pivot block " << bj << " is not positive definite";
      throw Error(ErrorKind::NotPositiveDefinite, ss.str());
    }
    f.D.set_block(bj * g, bj * g, s);
    const Matrix s_inv = spd_block_inverse(s);
    for (std::size_t bi = bj + 1; bi < nb; ++bi)
    {
      Matrix t = h.matrix().block(bi * g, bj * g, g, g);
      for (std::size_t bk = 0; bk < bj; ++bk)
      {
        const Matrix prod = mul_bt(ld[bi * nb + bk], l_block(bj, bk));
        for (std::size_t i = 0; i < t.size(); ++i)
          t.data()[i] -= prod.data()[i];
      }
      f.L.set_block(bi * g, bj * g, mul(t, s_inv));
    }
    for (std::size_t bi = bj + 1; bi < nb; ++bi)
      ld[bi * nb + bj] = mul(l_block(bi, bj), s);
  }
  return f;
}

EigenDecomp sym_eigen(const SymMatrix &h)
{
  const std::size_t n = h.dim();
  Matrix a = h.matrix();
  Matrix v = Matrix::identity(n);
  const double norm = frob_norm(a);
  const std::size_t budget = 100 * n * n;
  std::size_t rotations = 0;

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j)
          s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const double tol = 1e-15 * norm;
  while (norm > 0.0 && off_norm() > tol)
  {
    std::size_t applied = 0;
    for (std::size_t p = 0; p + 1 < n; ++p)
    {
      for (std::size_t q = p + 1; q < n; ++q)
      {
        const double apq = a(p, q);
        const double g = 100.0 * std::abs(apq);
        if (std::abs(apq) < 1e-18 * norm ||
            (std::abs(a(p, p)) + g == std::abs(a(p, p)) && std::abs(a(q, q)) + g == std::abs(a(q, q))))
        {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        if (++rotations > budget)
          throw Error(ErrorKind::NoConvergence, "Jacobi rotation budget exhausted");
        ++applied;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k)
        {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k)
        {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k)
        {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    if (applied == 0)
      break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomp e{Matrix(n, n), std::vector<double>(n)};
  for (std::size_t c = 0; c < n; ++c)
  {
    e.values[c] = a(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r)
      e.Q(r, c) = v(r, order[c]);
  }
  return e;
}

double trace_sqrt(const SymMatrix &h)
{
  if (h.dim() == 0)
    return 0.0;
  const EigenDecomp e = sym_eigen(h);
  const double cutoff = 1e-12 * std::max(e.values.front(), 0.0);
  double s = 0.0;
  for (double l : e.values)
    if (l > cutoff)
      s += std::sqrt(l);
  return s;
}

std::size_t numerical_rank(const SymMatrix &h, double rel_tol)
{
  if (h.dim() == 0)
    return 0;
  const EigenDecomp e = sym_eigen(h);
  const double cutoff = rel_tol * std::max(e.values.front(), 0.0);
  return static_cast<std::size_t>(std::count_if(e.values.begin(), e.values.end(), [&](double l) { return l > cutoff; }));
}

SymMatrix clamp_psd(const SymMatrix &h)
{
  const std::size_t n = h.dim();
  if (n == 0)
    return h;
  const EigenDecomp e = sym_eigen(h);
  if (e.values.back() >= 0.0)
    return h;
  Matrix out(n, n);
  for (std::size_t k = 0; k < n; ++k)
  {
    const double l = std::max(e.values[k], 0.0);
    if (l == 0.0)
      continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        out(i, j) += l * e.Q(i, k) * e.Q(j, k);
  }
  return SymMatrix(out);
}

Matrix kron(const Matrix &a, const Matrix &b)
{
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
    {
      const double aij = a(i, j);
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q)
          k(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
    }
  return k;
}

double frob_inner(const Matrix &a, const Matrix &b)
{
  require_same_shape(a, b, "frob_inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += a.data()[i] * b.data()[i];
  return s;
}

double frob_norm(const Matrix &a)
{
  double s = 0.0;
  for (double v : a.data())
    s += v * v;
  return std::sqrt(s);
}

double frob_cosine(const Matrix &a, const Matrix &b)
{
  require_same_shape(a, b, "frob_cosine");
  const double na = frob_norm(a);
  const double nb = frob_norm(b);
  if (na == 0.0 || nb == 0.0)
    throw Error(ErrorKind::ZeroMatrix, "frob_cosine of a zero matrix");
  return std::clamp(frob_inner(a, b) / (na * nb), -1.0, 1.0);
}

std::vector<double> vec(const Matrix &w) { return w.data(); }

Matrix unvec(std::span<const double> v, std::size_t m, std::size_t n)
{
  if (v.size() != m * n)
    throw Error(ErrorKind::ShapeMismatch, "unvec: length does not equal m*n");
  return Matrix(m, n, std::vector<double>(v.begin(), v.end()));
}

std::vector<double> vecmat(std::span<const double> v, const Matrix &a)
{
  if (v.size() != a.rows())
    throw Error(ErrorKind::ShapeMismatch, "vecmat: length mismatch");
  std::vector<double> out(a.cols(), 0.0);
  for (std::size_t k = 0; k < a.rows(); ++k)
  {
    if (v[k] == 0.0)
      continue;
    auto r = a.row(k);
    for (std::size_t j = 0; j < a.cols(); ++j)
      out[j] += v[k] * r[j];
  }
  return out;
}

double quad_form(std::span<const double> x, const Matrix &a)
{
  if (a.rows() != x.size() || a.cols() != x.size())
    throw Error(ErrorKind::ShapeMismatch, "quad_form: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
  {
    if (x[i] == 0.0)
      continue;
    double r = 0.0;
    auto row = a.row(i);
    for (std::size_t j = 0; j < x.size(); ++j)
      r += row[j] * x[j];
    s += x[i] * r;
  }
  return s;
}

namespace
{

template <typename T> void put_le(std::ostream &os, T v)
{
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char *>(buf), sizeof(T));
}

template <typename T> T get_le(std::istream &is)
{
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char *>(buf), sizeof(T)))
    throw Error(ErrorKind::Io, "truncated matrix container");
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<T>(buf[i]) << (8 * i);
  return v;
}

} // namespace

void write_matrix(std::ostream &os, const Matrix &m)
{
  os.write("KRND", 4);
  put_le<std::uint32_t>(os, kContainerVersion);
  put_le<std::uint64_t>(os, m.rows());
  put_le<std::uint64_t>(os, m.cols());
  for (double v : m.data())
  {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    put_le<std::uint64_t>(os, bits);
  }
}

Matrix read_matrix(std::istream &is)
{
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "KRND", 4) != 0)
    throw Error(ErrorKind::Io, "bad magic, expected KRND");
  const auto version = get_le<std::uint32_t>(is);
  if (version != kContainerVersion)
    throw Error(ErrorKind::Io, "unsupported container version " + std::to_string(version));
  const auto rows = get_le<std::uint64_t>(is);
  const auto cols = get_le<std::uint64_t>(is);
  if (rows != 0 && cols > (std::uint64_t{1} << 40) / rows)
    throw Error(ErrorKind::TooLarge, "container dimensions too large");
  Matrix m(rows, cols);
  for (auto &v : m.data())
  {
    const auto bits = get_le<std::uint64_t>(is);
    std::memcpy(&v, &bits, sizeof v);
  }
  return m;
}

void save_matrix(const std::string &path, const Matrix &m)
{
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  write_matrix(os, m);
  if (!os)
    throw Error(ErrorKind::Io, "write failed for " + path);
}

Matrix load_matrix(const std::string &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw Error(ErrorKind::Io, "cannot open " + path);
  return read_matrix(is);
}

void write_csv(std::ostream &os, const Matrix &m)
{
  os << std::setprecision(17);
  for (std::size_t i = 0; i < m.rows(); ++i)
  {
    for (std::size_t j = 0; j < m.cols(); ++j)
      os << (j ? "," : "") << m(i, j);
    os << '\n';
  }
}

Matrix read_csv(std::istream &is)
{
  std::vector<double> data;
  std::size_t rows = 0, cols = 0;
  std::string line;
  while (std::getline(is, line))
  {
    if (line.empty() || line[0] == '#')
      continue;
    std::stringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ','))
    {
      try
      {
        data.push_back(std::stod(cell));
      }
      catch (const std::exception &)
      {
        throw Error(ErrorKind::Io, "bad CSV cell '" + cell + "'");
      }
      ++c;
    }
    if (rows == 0)
      cols = c;
    else if (c != cols)
      throw Error(ErrorKind::ShapeMismatch, "ragged CSV row " + std::to_string(rows));
    ++rows;
  }
  return Matrix(rows, cols, std::move(data));
}

} // namespace yaqa
