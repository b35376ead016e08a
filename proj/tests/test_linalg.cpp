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

#include "doctest.h"

#include "yaqa/linalg.hpp"
#include "yaqa/random.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

using namespace yaqa;

namespace
{

Matrix reconstruct(const LDLFactors &f)
{
  return f.L * Matrix::diagonal(f.D) * f.L.transpose();
}

Matrix reconstruct(const BlockLDLFactors &f) { return f.L * f.D * f.L.transpose(); }

double rel_err(const Matrix &a, const Matrix &b) { return frob_norm(a - b) / frob_norm(b); }

} // namespace

TEST_SUITE("linalg")
{
  TEST_CASE("ldl of identity")
  {
    const auto f = ldl(SymMatrix::identity(3), 0.0);
    CHECK(f.L == Matrix::identity(3));
    CHECK(f.D == std::vector<double>{1, 1, 1});
  }

  TEST_CASE("ldl of a 2x2 by hand")
  {
    const SymMatrix h(Matrix{{4, 2}, {2, 3}});
    const auto f = ldl(h, 0.0);
    CHECK(f.L(1, 0) == doctest::Approx(0.5));
    CHECK(f.L(0, 1) == 0.0);
    CHECK(f.D[0] == doctest::Approx(4.0));
    CHECK(f.D[1] == doctest::Approx(2.0));
    CHECK(rel_err(reconstruct(f), h.matrix()) < 1e-15);
  }

  TEST_CASE("ldl reconstruction with regularization")
  {
    Rng rng(11);
    for (std::size_t n : {16u, 64u, 256u})
    {
      const SymMatrix h = rng.spd(n);
      const auto f = ldl(h, 1e-4);
      const Matrix target = h.regularized(1e-4).matrix();
      CHECK(rel_err(reconstruct(f), target) <= 1e-9);
      for (std::size_t i = 0; i < n; ++i)
      {
        CHECK(f.L(i, i) == 1.0);
        CHECK(f.D[i] > 0.0);
      }
    }
  }

  TEST_CASE("ldl rejects indefinite input")
  {
    const SymMatrix h(Matrix{{1, 2}, {2, 1}});
    try
    {
      ldl(h, 0.0);
      FAIL("expected NotPositiveDefinite");
    }
    catch (const Error &e)
    {
      CHECK(e.kind() == ErrorKind::NotPositiveDefinite);
    }
  }

  TEST_CASE("regularization rescues a singular p.s.d. matrix")
  {
    const SymMatrix h(Matrix{{1, 1}, {1, 1}});
    CHECK_THROWS_AS(ldl(h, 0.0), Error);
    CHECK_NOTHROW(ldl(h, 1e-4));
  }

  TEST_CASE("block_ldl with g=1 equals ldl bit for bit")
  {
    Rng rng(3);
    for (int t = 0; t < 5; ++t)
    {
      const SymMatrix h = rng.spd(12);
      const auto a = ldl(h, 1e-4);
      const auto b = block_ldl(h, 1, 1e-4);
      CHECK(a.L == b.L);
      CHECK(Matrix::diagonal(a.D) == b.D);
    }
  }

  TEST_CASE("block_ldl of block-diagonal input has L = I")
  {
    Rng rng(5);
    Matrix h(8, 8);
    h.set_block(0, 0, rng.spd(4).matrix());
    h.set_block(4, 4, rng.spd(4).matrix());
    const auto f = block_ldl(SymMatrix(h), 4, 0.0);
    CHECK(f.L == Matrix::identity(8));
    CHECK(rel_err(f.D, h) < 1e-15);
  }

  TEST_CASE("block_ldl reconstruction and structure")
  {
    Rng rng(9);
    for (std::size_t g : {2u, 4u})
    {
      const SymMatrix h = rng.spd(8);
      const auto f = block_ldl(h, g, 0.0);
      CHECK(rel_err(reconstruct(f), h.matrix()) <= 1e-9);
      for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j)
        {
          const bool same_block = i / g == j / g;
          if (same_block)
          {
            CHECK(f.L(i, j) == (i == j ? 1.0 : 0.0));
          }
          else if (j > i)
          {
            CHECK(f.L(i, j) == 0.0);
            CHECK(f.D(i, j) == 0.0);
          }
        }
    }
    const SymMatrix big = rng.spd(256);
    CHECK(rel_err(reconstruct(block_ldl(big, 8, 1e-4)), big.regularized(1e-4).matrix()) <= 1e-9);
  }

  TEST_CASE("block_ldl rejects block sizes that do not divide n")
  {
    try
    {
      block_ldl(SymMatrix::identity(6), 4, 0.0);
      FAIL("expected BadBlockSize");
    }
    catch (const Error &e)
    {
      CHECK(e.kind() == ErrorKind::BadBlockSize);
    }
  }

  TEST_CASE("sym_eigen small cases")
  {
    const auto d = sym_eigen(SymMatrix(Matrix{{3, 0}, {0, 1}}));
    CHECK(d.values == std::vector<double>{3, 1});
    CHECK(d.Q == Matrix::identity(2));

    const auto e = sym_eigen(SymMatrix(Matrix{{1, 0}, {0, 3}}));
    CHECK(e.values == std::vector<double>{3, 1});
    CHECK(std::abs(e.Q(1, 0)) == 1.0);

    // roots of (2 - x)^2 - 1
    const auto f = sym_eigen(SymMatrix(Matrix{{2, 1}, {1, 2}}));
    CHECK(f.values[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("sym_eigen reconstruction against Eigen")
  {
    Rng rng(21);
    for (std::size_t n : {8u, 32u, 64u})
    {
      const Matrix a = rng.gaussian(n, n);
      const SymMatrix h(a + a.transpose());
      const auto d = sym_eigen(h);
      const Matrix qtq = matmul_tn(d.Q, d.Q);
      CHECK(frob_norm(qtq - Matrix::identity(n)) <= 1e-8 * n);
      const Matrix rec = d.Q * Matrix::diagonal(d.values) * d.Q.transpose();
      CHECK(rel_err(rec, h.matrix()) <= 1e-8);
      for (std::size_t i = 1; i < n; ++i)
        CHECK(d.values[i - 1] >= d.values[i]);

      Eigen::MatrixXd em(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          em(i, j) = h(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em);
      for (std::size_t i = 0; i < n; ++i)
        CHECK(d.values[i] == doctest::Approx(es.eigenvalues()(n - 1 - i)).epsilon(1e-10));
    }
  }

  TEST_CASE("trace_sqrt")
  {
    CHECK(trace_sqrt(SymMatrix::identity(4)) == doctest::Approx(4.0));
    CHECK(trace_sqrt(SymMatrix(Matrix{{4, 0}, {0, 9}})) == doctest::Approx(5.0));

    Rng rng(8);
    const SymMatrix h = rng.spd(10);
    Eigen::MatrixXd em(10, 10);
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j)
        em(i, j) = h(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(em);
    const double oracle = es.operatorSqrt().trace();
    CHECK(trace_sqrt(h) == doctest::Approx(oracle).epsilon(1e-10));
  }

  TEST_CASE("trace_sqrt squared is at most rank times trace")
  {
    Rng rng(31);
    for (int t = 0; t < 20; ++t)
    {
      const std::size_t n = 4 + rng.index(20);
      const std::size_t k = 1 + rng.index(n);
      const SymMatrix h = rng.low_rank_spd(n, k, 0.0);
      const double ts = trace_sqrt(h);
      const auto rank = numerical_rank(h, 1e-10);
      CHECK(ts * ts <= static_cast<double>(rank) * h.trace() * (1 + 1e-6));
    }
  }

  TEST_CASE("kron structure and mixed product")
  {
    CHECK(kron(Matrix::identity(2), Matrix::identity(3)) == Matrix::identity(6));
    const Matrix k = kron(Matrix{{0, 1}, {0, 0}}, Matrix::identity(2));
    CHECK(k.block(0, 2, 2, 2) == Matrix::identity(2));
    CHECK(k.block(0, 0, 2, 2) == Matrix(2, 2));
    CHECK(k.block(2, 0, 2, 4) == Matrix(2, 4));

    Rng rng(2);
    const Matrix a = rng.gaussian(2, 3), b = rng.gaussian(4, 2), c = rng.gaussian(3, 2), d = rng.gaussian(2, 3);
    const Matrix lhs = kron(a, b) * kron(c, d);
    const Matrix rhs = kron(a * c, b * d);
    CHECK(frob_norm(lhs - rhs) <= 1e-10);
  }

  TEST_CASE("frob_cosine")
  {
    const Matrix a = Matrix::identity(2);
    CHECK(frob_cosine(a, a) == doctest::Approx(1.0));
    CHECK(frob_cosine(Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}}) == 0.0);
    CHECK(frob_cosine(a, Matrix{{1, 0}, {0, 0}}) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK_THROWS_AS(frob_cosine(a, Matrix(2, 2)), Error);
  }

  TEST_CASE("vec and unvec")
  {
    const Matrix one{{7}};
    CHECK(vec(one) == std::vector<double>{7});
    Rng rng(4);
    const Matrix w = rng.gaussian(3, 5);
    CHECK(unvec(vec(w), 3, 5) == w);
    CHECK_THROWS_AS(unvec(vec(w), 5, 4), Error);
  }

  TEST_CASE("vec convention matches the two-sided Kronecker form")
  {
    // vec(X) (A kron B) == vec(A^T X B), both sides evaluated independently.
    Rng rng(17);
    for (int t = 0; t < 10; ++t)
    {
      const Matrix x = rng.gaussian(2, 3);
      const Matrix a = rng.gaussian(2, 2);
      const Matrix b = rng.gaussian(3, 3);
      const auto lhs = vecmat(vec(x), kron(a, b));
      const auto rhs = vec(a.transpose() * x * b);
      for (std::size_t i = 0; i < lhs.size(); ++i)
        CHECK(lhs[i] == doctest::Approx(rhs[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("binary container and CSV")
  {
    Rng rng(1);
    const Matrix m = rng.gaussian(3, 4);
    std::stringstream ss;
    write_matrix(ss, m);
    const std::string bytes = ss.str();
    CHECK(bytes.size() == 4 + 4 + 8 + 8 + 8 * 12);
    CHECK(bytes.substr(0, 4) == "KRND");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);
    CHECK(static_cast<unsigned char>(bytes[8]) == 3);
    CHECK(static_cast<unsigned char>(bytes[16]) == 4);
    CHECK(read_matrix(ss) == m);

    std::stringstream bad("KRNX");
    CHECK_THROWS_AS(read_matrix(bad), Error);

    std::stringstream csv;
    write_csv(csv, m);
    CHECK(read_csv(csv) == m);
  }
}
