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

#include "ccembed/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ccembed/errors.hpp"

namespace ccembed {

double min_eigenvalue(const SmallMatrix& t) {
  const auto n = t.rows();
  if (n != t.cols() || n < 1 || n > 3)
    throw DimensionMismatch("min_eigenvalue expects a 1x1, 2x2 or 3x3 matrix");
  if (n == 1) return t(0, 0);
  if (n == 2) {
    const double mean = 0.5 * (t(0, 0) + t(1, 1));
    const double half_diff = 0.5 * (t(0, 0) - t(1, 1));
    return mean - std::hypot(half_diff, t(0, 1));
  }

  // Trigonometric solution of the depressed cubic for A = q I + p B.
  const double a00 = t(0, 0), a11 = t(1, 1), a22 = t(2, 2);
  const double a01 = t(0, 1), a02 = t(0, 2), a12 = t(1, 2);
  const double off = a01 * a01 + a02 * a02 + a12 * a12;
  const double q = (a00 + a11 + a22) / 3.0;
  const double d0 = a00 - q, d1 = a11 - q, d2 = a22 - q;
  const double p2 = d0 * d0 + d1 * d1 + d2 * d2 + 2.0 * off;
  if (p2 <= 0.0) return q;
  const double p = std::sqrt(p2 / 6.0);
  // det(B) with B = (A - q I) / p
  const double b00 = d0 / p, b11 = d1 / p, b22 = d2 / p;
  const double b01 = a01 / p, b02 = a02 / p, b12 = a12 / p;
  const double det = b00 * (b11 * b22 - b12 * b12) -
                     b01 * (b01 * b22 - b12 * b02) +
                     b02 * (b01 * b12 - b11 * b02);
  const double half_det = std::clamp(0.5 * det, -1.0, 1.0);
  const double phi = std::acos(half_det) / 3.0;
  // Roots are q + 2p cos(phi + 2k pi/3); k = 1 gives the smallest.
  return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
}

Matrix pullback(const Matrix& ambient_metric, const Matrix& jacobian) {
  if (ambient_metric.rows() != ambient_metric.cols() ||
      ambient_metric.cols() != jacobian.rows())
    throw DimensionMismatch(
        "pullback: metric is " + std::to_string(ambient_metric.rows()) + "x" +
        std::to_string(ambient_metric.cols()) + ", jacobian has " +
        std::to_string(jacobian.rows()) + " rows");
  Matrix out = jacobian.transpose() * ambient_metric * jacobian;
  Matrix sym = 0.5 * (out + out.transpose());
  return sym;
}

double min_singular_value(const Matrix& jacobian) {
  if (jacobian.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(jacobian);
  const auto& s = svd.singularValues();
  return s.size() == 0 ? 0.0 : s(s.size() - 1);
}

double sym_frobenius(const SmallMatrix& t) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < t.rows(); ++i)
    for (Eigen::Index j = 0; j < t.cols(); ++j) sum += t(i, j) * t(i, j);
  return std::sqrt(sum);
}

}  // namespace ccembed
