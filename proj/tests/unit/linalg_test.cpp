// Copyright 2026 The ccembed Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ccembed/linalg.hpp"

namespace ccembed {
namespace {

// Smallest eigenvalue by power iteration on (s I - A), s an upper bound.
double power_min_eigenvalue(const Matrix& A) {
  const double s = A.cwiseAbs().rowwise().sum().maxCoeff();
  const Matrix B = s * Matrix::Identity(A.rows(), A.cols()) - A;
  Vector v = Vector::Ones(A.rows()).normalized();
  double mu = 0.0;
  for (int it = 0; it < 20000; ++it) {
    Vector w = B * v;
    mu = v.dot(w);
    v = w.normalized();
  }
  return s - mu;
}

Matrix random_spd(int n, std::mt19937& rng) {
  std::normal_distribution<double> N;
  Matrix R(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) R(i, j) = N(rng);
  return R * R.transpose() + 0.1 * Matrix::Identity(n, n);
}

TEST(Linalg, MinEigenvalueMatchesPowerIteration) {
  std::mt19937 rng(7);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix A = random_spd(n, rng);
      EXPECT_NEAR(min_eigenvalue(SmallMatrix(A)), power_min_eigenvalue(A), 1e-8);
    }
  }
}

TEST(Linalg, MinEigenvalueSignAgreesWithLeadingMinors) {
  SmallMatrix a(2, 2);
  a << 2, 1, 1, 2;
  EXPECT_GT(a(0, 0), 0);
  EXPECT_GT(a.determinant(), 0);
  EXPECT_GT(min_eigenvalue(a), 0);
  SmallMatrix b(2, 2);
  b << 1, 2, 2, 1;
  EXPECT_LT(b.determinant(), 0);
  EXPECT_NEAR(min_eigenvalue(b), -1.0, 1e-14);
}

TEST(Linalg, PullbackOfIdentityIsGram) {
  Matrix J(3, 2);
  J << 1, 2, 0, 1, 3, -1;
  const Matrix P = pullback(Matrix::Identity(3, 3), J);
  Matrix expected(2, 2);
  expected << 10, -1, -1, 6;
  EXPECT_TRUE(P.isApprox(expected, 1e-15));
  EXPECT_EQ(P(0, 1), P(1, 0));
}

TEST(Linalg, MinSingularValueIsRootOfGramEigenvalue) {
  std::mt19937 rng(11);
  std::normal_distribution<double> N;
  Matrix J(5, 2);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 2; ++j) J(i, j) = N(rng);
  EXPECT_NEAR(min_singular_value(J), std::sqrt(power_min_eigenvalue(J.transpose() * J)),
              1e-8);
}

TEST(Linalg, SymFrobenius) {
  SmallMatrix a(2, 2);
  a << 1, 2, 2, 3;
  EXPECT_DOUBLE_EQ(sym_frobenius(a), std::sqrt(1.0 + 4 + 4 + 9));
}

}  // namespace
}  // namespace ccembed
