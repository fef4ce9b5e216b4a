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

#pragma once

#include <Eigen/Dense>

namespace ccembed {

/// Small dense matrices and vectors; the fixed maximum keeps them on the
/// stack. Manifold dimension is capped at 3, ambient Jacobians go through
/// the dynamic types below.
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;
using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Smallest eigenvalue of a symmetric matrix of size 1, 2 or 3 from the
/// closed-form roots of the characteristic polynomial. Only the upper
/// triangle is read.
double min_eigenvalue(const SmallMatrix& t);

/// J^T H J, symmetrized so the result is exactly symmetric. Throws
/// DimensionMismatch on incompatible shapes.
Matrix pullback(const Matrix& ambient_metric, const Matrix& jacobian);

/// Smallest singular value of a (tall) Jacobian.
double min_singular_value(const Matrix& jacobian);

/// Frobenius norm of a symmetric matrix.
double sym_frobenius(const SmallMatrix& t);

}  // namespace ccembed
