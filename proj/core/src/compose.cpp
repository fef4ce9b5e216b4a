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


#include "ccembed/compose.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "ccembed/errors.hpp"

namespace ccembed {

HalfSpaceModel::HalfSpaceModel(int N, double lambda) : N_(N), lambda_(lambda) {
  if (lambda == 0.0) throw ConfigError("lambda must be nonzero");
  if (N < 1) throw ConfigError("half-space model needs N >= 1");
}

Matrix HalfSpaceModel::compactified_metric() const {
  return Matrix::Identity(ambient_dim(), ambient_dim()) / (lambda_ * lambda_);
}

Matrix HalfSpaceModel::metric(const Vector& point) const {
  const double X = point(0);
  return compactified_metric() / (X * X);
}

PEmbedding compose(const CollarGrid& grid, const BdfField& bdf,
                   const EuclideanEmbedding& v, double lambda) {
  const int n = grid.node_count();
  if (!grid.same_nodes(v.grid) || static_cast<int>(bdf.x.size()) != n ||
      v.points.rows() != n)
    throw GridMismatch("bdf and embedding are sampled on different grids");
  const int N = v.ambient_dim();
  const int m = grid.dim();
  PEmbedding u{grid, HalfSpaceModel(N, lambda), bdf.x, v.points, {}};
  u.jacobians.resize(n);
  for (int i = 0; i < n; ++i) {
    Matrix J = Matrix::Zero(N + 1, m);
    J(0, 0) = bdf.dx_dr[i];
    J.bottomRows(N) = v.jacobians[i];
    u.jacobians[i] = J;
  }
  return u;
}

IsometryCheck pullback_halfspace(const PEmbedding& u, const SymTensorField& x2g) {
  const int n = u.grid.node_count();
  if (static_cast<int>(x2g.size()) != n)
    throw GridMismatch("x^2 g is sampled on a different grid");
  IsometryCheck out;
  out.pulled.resize(n);
  out.residual.resize(n);
  double sum2 = 0.0;
  const Matrix I = Matrix::Identity(u.model.ambient_dim(), u.model.ambient_dim());
  for (int i = 0; i < n; ++i) {
    out.pulled[i] = pullback(I, u.jacobians[i]);
    const double rel = (out.pulled[i] - x2g[i]).norm() / x2g[i].norm();
    out.residual[i] = rel;
    out.max_residual = std::max(out.max_residual, rel);
    sum2 += rel * rel;
  }
  out.rms_residual = std::sqrt(sum2 / n);
  return out;
}

PEmbeddingChecks verify_p_embedding(const PEmbedding& u, const SymTensorField& x2g,
                                    const PEmbeddingOptions& opts) {
  const CollarGrid& grid = u.grid;
  const int n = grid.node_count();
  const int nb = grid.boundary_count();
  PEmbeddingChecks out;
  out.min_boundary_dx = std::numeric_limits<double>::infinity();
  out.min_interior_x = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (i < nb) {
      out.max_boundary_x = std::max(out.max_boundary_x, std::abs(u.X[i]));
      out.min_boundary_dx =
          std::min(out.min_boundary_dx, u.jacobians[i].row(0).norm());
    } else {
      out.min_interior_x = std::min(out.min_interior_x, u.X[i]);
    }
  }
  out.simple_b_map = out.max_boundary_x == 0.0 && out.min_boundary_dx > 0.0 &&
                     out.min_interior_x > 0.0;

  Matrix points(n, u.model.ambient_dim());
  for (int i = 0; i < n; ++i) {
    points(i, 0) = u.X[i];
    points.row(i).tail(u.model.N()) = u.Y.row(i);
  }
  const EuclideanEmbedding image{grid, points, u.jacobians,
                                 EmbeddingSource::Analytic, "p-embedding", 0.0};
  const EmbeddingDiagnostics diag = embedding_diagnostics(image, x2g);
  out.min_singular_value = diag.min_singular_value;
  out.immersion = diag.min_singular_value > opts.immersion_tolerance;
  out.injectivity_ratio = diag.injectivity_ratio;
  out.injective = diag.injectivity_ratio > opts.injectivity_tolerance;
  return out;
}

InducedCurvatureRecord induced_curvature_inequality(
    const PEmbedding& u, const std::vector<double>& expected,
    double inequality_tolerance, double match_tolerance) {
  const int nb = u.grid.boundary_count();
  if (!expected.empty() && static_cast<int>(expected.size()) != nb)
    throw GridMismatch("expected kappa_inf needs one value per boundary node");
  const double l2 = u.model.lambda() * u.model.lambda();
  InducedCurvatureRecord out;
  out.induced.resize(nb);
  for (int i = 0; i < nb; ++i) {
    const Matrix& J = u.jacobians[i];
    const Matrix gram = J.transpose() * J;
    const Vector dx = J.row(0).transpose();
    out.induced[i] = -l2 * dx.dot(gram.ldlt().solve(dx));
    if (!expected.empty())
      out.max_gap = std::max(out.max_gap, std::abs(out.induced[i] - expected[i]));
  }
  out.min_induced = *std::min_element(out.induced.begin(), out.induced.end());
  out.max_induced = *std::max_element(out.induced.begin(), out.induced.end());
  out.inequality_holds = out.min_induced >= -l2 - inequality_tolerance;
  out.matches_expected = expected.empty() || out.max_gap <= match_tolerance;
  return out;
}

PEmbedding totally_geodesic_half_plane(int N, double lambda, int count) {
  if (N < 1) throw ConfigError("half-plane needs N >= 1");
  CollarGrid grid(1.0, count, {GridAxis{0.0, 1.0, count, false}});
  const int n = grid.node_count();
  PEmbedding u{grid, HalfSpaceModel(N, lambda), std::vector<double>(n),
               Matrix::Zero(n, N), std::vector<Matrix>(n)};
  for (int i = 0; i < n; ++i) {
    const SmallVector c = grid.coords(i);
    u.X[i] = c(0);
    u.Y(i, 0) = c(1);
    Matrix J = Matrix::Zero(N + 1, 2);
    J(0, 0) = 1.0;
    J(1, 1) = 1.0;
    u.jacobians[i] = J;
  }
  return u;
}

std::string pembedding_csv(const PEmbedding& u) {
  std::ostringstream os;
  os << std::setprecision(17) << 'r';
  for (int k = 1; k < u.grid.dim(); ++k) os << ",y" << k;
  os << ",X";
  for (int p = 0; p < u.model.N(); ++p) os << ",Y" << p + 1;
  os << '\n';
  for (int i = 0; i < u.grid.node_count(); ++i) {
    const SmallVector c = u.grid.coords(i);
    for (int k = 0; k < c.size(); ++k) os << (k ? "," : "") << c(k);
    os << ',' << u.X[i];
    for (int p = 0; p < u.model.N(); ++p) os << ',' << u.Y(i, p);
    os << '\n';
  }
  return os.str();
}

}  // namespace ccembed
