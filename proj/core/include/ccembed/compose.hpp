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

#include <string>
#include <vector>

#include "ccembed/bdf.hpp"
#include "ccembed/embed.hpp"

namespace ccembed {

/// Upper half-space [0, inf) x R^N with h = lambda^-2 (dX^2 + dY^2) / X^2,
/// of constant curvature -lambda^2.
class HalfSpaceModel {
 public:
  /// Throws ConfigError for lambda = 0 or N < 1.
  HalfSpaceModel(int N, double lambda);

  int N() const { return N_; }
  int ambient_dim() const { return N_ + 1; }
  double lambda() const { return lambda_; }
  double curvature() const { return -lambda_ * lambda_; }

  /// X^2 h, i.e. lambda^-2 times the identity.
  Matrix compactified_metric() const;
  /// h at a point with X > 0.
  Matrix metric(const Vector& point) const;

 private:
  int N_;
  double lambda_;
};

/// u = (x, v) sampled on the collar grid.
struct PEmbedding {
  CollarGrid grid;
  HalfSpaceModel model;
  /// The bdf values, copied from the BdfField.
  std::vector<double> X;
  /// node_count x N.
  Matrix Y;
  /// (N+1) x m per node; row 0 is dx.
  std::vector<Matrix> jacobians;
};

/// Throws GridMismatch when x and v live on different grids.
PEmbedding compose(const CollarGrid& grid, const BdfField& bdf,
                   const EuclideanEmbedding& v, double lambda);

struct IsometryCheck {
  /// dx^2 + dv^2 per node.
  std::vector<SmallMatrix> pulled;
  /// |(dx^2 + dv^2) - x^2 g|_F / |x^2 g|_F per node.
  std::vector<double> residual;
  double max_residual = 0.0;
  double rms_residual = 0.0;
};

/// Compares X^2 u^*h_{-1} = dx^2 + dv^2 with `x2g`, which must be x^2 times
/// the metric that was embedded (lambda^2 g for a rescaled run).
IsometryCheck pullback_halfspace(const PEmbedding& u, const SymTensorField& x2g);

struct PEmbeddingOptions {
  double immersion_tolerance = 1e-3;
  double injectivity_tolerance = 0.1;
};

struct PEmbeddingChecks {
  /// x = 0 exactly and dx != 0 at every r = 0 node, x > 0 elsewhere.
  bool simple_b_map = false;
  double max_boundary_x = 0.0;
  double min_boundary_dx = 0.0;
  double min_interior_x = 0.0;
  bool immersion = false;
  double min_singular_value = 0.0;
  bool injective = false;
  double injectivity_ratio = 0.0;

  bool all() const { return simple_b_map && immersion && injective; }
};

/// Injectivity distances are measured with `x2g` (the compactified induced
/// metric).
PEmbeddingChecks verify_p_embedding(const PEmbedding& u, const SymTensorField& x2g,
                                    const PEmbeddingOptions& opts = {});

struct InducedCurvatureRecord {
  /// kappa_inf of u^*h_{-lambda^2} at each r = 0 node.
  std::vector<double> induced;
  double min_induced = 0.0;
  double max_induced = 0.0;
  /// max |induced - expected| when expected values were given.
  double max_gap = 0.0;
  bool inequality_holds = false;
  bool matches_expected = true;
};

/// kappa_inf of the induced metric from the compactified ambient metric:
/// -lambda^2 dx^T (J^T J)^-1 dx at each boundary node, checked against
/// -lambda^2 - inequality_tolerance and, when `expected` is non-empty
/// (one value per boundary node), against those values within
/// `match_tolerance`.
InducedCurvatureRecord induced_curvature_inequality(
    const PEmbedding& u, const std::vector<double>& expected = {},
    double inequality_tolerance = 1e-8, double match_tolerance = 2e-3);

/// The coordinate half-plane {Y2 = ... = YN = 0} parametrized by
/// (X, Y1) in [0, 1]^2 on a count x count grid: totally geodesic, so its
/// kappa_inf equals -lambda^2.
PEmbedding totally_geodesic_half_plane(int N, double lambda, int count = 16);

/// CSV text "r,y1,...,X,Y1,...,YN".
std::string pembedding_csv(const PEmbedding& u);

}  // namespace ccembed
