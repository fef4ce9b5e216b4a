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

#include <span>
#include <vector>

#include "ccembed/metric.hpp"

namespace ccembed {

/// kappa_inf = -|dx|^2_{x^2 g} at a boundary node, for an arbitrary
/// boundary defining function x. Evaluated in compactified form: on the
/// boundary dx = c dr with c = <dx, dr>/|dr|^2 (both taken with gbar), so
/// |dx|^2_{x^2 g} = |dx|^2_gbar / c^2.
///
/// Throws NotABoundaryDefiningFunction when x does not vanish at the node
/// or has no normal component there.
double kappa_infinity(const MetricSpec& spec, const Expression& x,
                      std::span<const double> boundary_node);

/// Same, with x the spec's reference bdf: -|dr|^2_gbar.
double kappa_infinity(const MetricSpec& spec,
                      std::span<const double> boundary_node);

/// Sampled kappa_inf over the boundary nodes of every declared end.
struct KappaInfinityField {
  std::vector<SmallVector> boundary_coords;  // chart coordinates b
  std::vector<int> ends;
  std::vector<double> kappa;
  std::string bdf;   // printed bdf used
  std::string spec;  // spec name

  double min() const;
  double max() const;
};

/// Boundary-chart sample points: `per_axis` nodes along each boundary axis
/// (periodic axes start at the lower end, bounded axes use cell midpoints).
std::vector<SmallVector> boundary_samples(const ModelManifold& manifold,
                                          int per_axis);

KappaInfinityField kappa_infinity_field(const MetricSpec& spec,
                                        const Expression& x, int per_axis);

/// lambda^{-2} kappa. Throws ConfigError for lambda = 0.
double kappa_rescale(double kappa, double lambda);

struct TwoPlane {
  SmallVector base;
  SmallVector x;
  SmallVector y;
};

/// How derivatives of the Christoffel symbols are obtained.
enum class ChristoffelDerivative {
  /// From symbolic second derivatives of gbar and r.
  Symbolic,
  /// Fourth-order central differences of the Christoffel symbols, step
  /// min(max_step, r / 10).
  FiniteDifference,
};

struct CurvatureOptions {
  /// Interior points must have reference bdf above this.
  double r_min = 1e-3;
  ChristoffelDerivative derivative = ChristoffelDerivative::Symbolic;
  double max_step = 1e-3;
};

/// Sectional curvature of g = gbar / r^2, built from the Christoffel
/// symbols of g (symbolic first derivatives) and the Riemann tensor.
///
/// Throws DegeneratePlane (normalized Gram determinant below 1e-12) and
/// ConfigError when the base point is closer to the boundary than r_min.
double sectional_curvature(const MetricSpec& spec, const TwoPlane& plane,
                           const CurvatureOptions& opts = {});

/// Sectional curvature of the metric whose coordinate components are the
/// spec's components themselves (no conformal factor). Used for flat and
/// other closed-form test metrics.
double sectional_curvature_uncompactified(const MetricSpec& spec,
                                          const TwoPlane& plane,
                                          const CurvatureOptions& opts = {});

/// NormalTangent: the inward ray direction together with the first
/// boundary tangent. TangentTangent: the first two boundary tangents when
/// m >= 3, otherwise the two chart coordinate directions.
enum class PlaneFamily { NormalTangent, TangentTangent };

/// Point on the coordinate ray issuing from a boundary node at which the
/// reference bdf equals `r`. For the disk the ray is radial, for the
/// collar torus it is the r-coordinate line.
SmallVector ray_point(const MetricSpec& spec, int end,
                      std::span<const double> boundary_coords, double r);

TwoPlane ray_plane(const MetricSpec& spec, int end,
                   std::span<const double> boundary_coords, double r,
                   PlaneFamily family);

struct LimitSample {
  double r = 0.0;
  double curvature = 0.0;
  double error = 0.0;  // |K(pi_r) - kappa_inf|
};

/// |K(pi_r) - kappa_inf(p)| along the ray from boundary node p for each
/// radius. Radii must be decreasing and at least opts.r_min.
std::vector<LimitSample> curvature_limit_scan(
    const MetricSpec& spec, int end, std::span<const double> boundary_coords,
    PlaneFamily family, std::span<const double> radii,
    const CurvatureOptions& opts = {});

}  // namespace ccembed
