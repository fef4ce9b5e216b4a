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
#include <numbers>
#include <string>
#include <vector>

#include "ccembed/compose.hpp"
#include "ccembed/errors.hpp"
#include "ccembed/examples.hpp"

namespace ccembed {
namespace {

struct Stage {
  NormalFormData nf;
  BdfField bdf;
  AdjustedTensorG G;
};

Stage build(const std::string& example, CutoffKind kind, int n) {
  const MetricSpec spec = builtin_example(example);
  NormalFormData nf = flow_collar(spec, 0, 0.9, n, n);
  BdfField bdf = assemble_bdf(nf, compute_phi(make_cutoff(0.9, kind)));
  AdjustedTensorG G = assemble_G(spec, nf, bdf);
  return {std::move(nf), std::move(bdf), std::move(G)};
}

TEST(HalfSpace, Model) {
  const HalfSpaceModel h(3, 2.0);
  EXPECT_EQ(h.ambient_dim(), 4);
  EXPECT_DOUBLE_EQ(h.curvature(), -4.0);
  EXPECT_TRUE(h.compactified_metric().isApprox(0.25 * Matrix::Identity(4, 4)));
  Vector p = Vector::Zero(4);
  p(0) = 0.5;
  EXPECT_DOUBLE_EQ(h.metric(p)(2, 2), 1.0);
  EXPECT_THROW(HalfSpaceModel(3, 0.0), ConfigError);
}

TEST(Compose, XRowIsTheBdfDifferential) {
  const Stage s = build("flat-cylinder(1,1)", CutoffKind::Smoothstep5, 16);
  const EuclideanEmbedding v =
      analytic_embedding("flat-cylinder", std::vector<double>{1.0, 1.0}, s.nf.grid);
  const PEmbedding u = compose(s.nf.grid, s.bdf, v, 1.0);
  for (int n = 0; n < s.nf.grid.node_count(); ++n) {
    EXPECT_EQ(u.X[n], s.bdf.x[n]);
    EXPECT_EQ(u.jacobians[n](0, 0), s.bdf.dx_dr[n]);
    EXPECT_EQ(u.jacobians[n](0, 1), 0.0);
    EXPECT_EQ((u.jacobians[n].bottomRows(3) - v.jacobians[n]).norm(), 0.0);
  }
  for (int n = 0; n < s.nf.grid.boundary_count(); ++n) EXPECT_EQ(u.X[n], 0.0);
}

TEST(Compose, GridMismatch) {
  const Stage s = build("flat-cylinder(1,1)", CutoffKind::Smoothstep5, 16);
  const CollarGrid other(0.9, 12, {GridAxis{0.0, 2 * std::numbers::pi, 12, true}});
  const EuclideanEmbedding v =
      analytic_embedding("flat-cylinder", std::vector<double>{1.0, 1.0}, other);
  EXPECT_THROW(compose(s.nf.grid, s.bdf, v, 1.0), GridMismatch);
}

TEST(Compose, AnalyticPathIsAnIsometry) {
  // Zero cutoff: x = r, G = gbar - dr^2 = dr^2 + dy^2.
  const Stage s = build("flat-cylinder(1,1)", CutoffKind::Zero, 32);
  const EuclideanEmbedding v =
      analytic_embedding("flat-cylinder", std::vector<double>{1.0, 1.0}, s.nf.grid);
  const PEmbedding u = compose(s.nf.grid, s.bdf, v, 1.0);
  const IsometryCheck iso = pullback_halfspace(u, s.G.x2g);
  EXPECT_LE(iso.max_residual, 1e-8);
  const PEmbeddingChecks c = verify_p_embedding(u, s.G.x2g);
  EXPECT_TRUE(c.simple_b_map);
  EXPECT_TRUE(c.immersion);
  EXPECT_TRUE(c.injective);
  EXPECT_TRUE(c.all());
  // kappa_inf of gbar = 2 dr^2 + dy^2 is -1/2.
  const InducedCurvatureRecord k = induced_curvature_inequality(
      u, std::vector<double>(s.nf.grid.boundary_count(), -0.5));
  EXPECT_TRUE(k.inequality_holds);
  EXPECT_TRUE(k.matches_expected);
  EXPECT_NEAR(k.min_induced, -0.5, 1e-12);
}

TEST(InducedCurvature, TotallyGeodesicHalfPlane) {
  for (double lambda : {0.5, 1.0, 2.0}) {
    const PEmbedding u = totally_geodesic_half_plane(3, lambda);
    const InducedCurvatureRecord k = induced_curvature_inequality(u);
    EXPECT_NEAR(k.min_induced, -lambda * lambda, 1e-15);
    EXPECT_NEAR(k.max_induced, -lambda * lambda, 1e-15);
    EXPECT_TRUE(k.inequality_holds);
  }
}

TEST(InducedCurvature, TiltedHalfPlane) {
  // (r, y) -> (X, Y1, Y2) = (r, y, c r): induced metric
  // ((1 + c^2) dr^2 + dy^2) / (lambda r)^2, kappa_inf = -lambda^2 / (1 + c^2).
  const double c = 0.75;
  const double lambda = 2.0;
  PEmbedding u = totally_geodesic_half_plane(2, lambda);
  for (int n = 0; n < u.grid.node_count(); ++n) {
    u.Y(n, 1) = c * u.X[n];
    u.jacobians[n](2, 0) = c;
  }
  const InducedCurvatureRecord k = induced_curvature_inequality(
      u, std::vector<double>(u.grid.boundary_count(), -lambda * lambda / (1 + c * c)), 1e-8,
      1e-14);
  EXPECT_TRUE(k.matches_expected);
  EXPECT_TRUE(k.inequality_holds);
  EXPECT_GT(k.min_induced, -lambda * lambda);
}

TEST(InducedCurvature, ScaledXRowStillSatisfiesTheInequality) {
  // dx is a row of J, so dx^T (J^T J)^-1 dx <= 1 whatever its size.
  PEmbedding u = totally_geodesic_half_plane(2, 1.0);
  for (auto& J : u.jacobians) J(0, 0) = 2.0;
  const InducedCurvatureRecord k = induced_curvature_inequality(u);
  EXPECT_NEAR(k.min_induced, -1.0, 1e-14);
  EXPECT_TRUE(k.inequality_holds);
  EXPECT_THROW(induced_curvature_inequality(u, {1.0, 2.0}), GridMismatch);
}

TEST(VerifyPEmbedding, SeededZeroDxIsCaught) {
  PEmbedding u = totally_geodesic_half_plane(2, 1.0);
  const SymTensorField id(Frame::Coordinate,
                          std::vector<SmallMatrix>(u.grid.node_count(),
                                                   SmallMatrix::Identity(2, 2)));
  EXPECT_TRUE(verify_p_embedding(u, id).simple_b_map);
  u.jacobians[2].row(0).setZero();
  const PEmbeddingChecks c = verify_p_embedding(u, id);
  EXPECT_FALSE(c.simple_b_map);
  EXPECT_EQ(c.min_boundary_dx, 0.0);
  EXPECT_FALSE(c.all());
}

TEST(VerifyPEmbedding, ZeroCutoffIsStillASimpleBMap) {
  const Stage s = build("flat-cylinder(1,1)", CutoffKind::Zero, 16);
  for (int n = 0; n < s.nf.grid.node_count(); ++n) EXPECT_EQ(s.bdf.x[n], s.nf.grid.r(n));
}

TEST(Csv, PEmbeddingHeader) {
  const PEmbedding u = totally_geodesic_half_plane(3, 1.0, 8);
  const std::string csv = pembedding_csv(u);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,y1,X,Y1,Y2,Y3");
}

}  // namespace
}  // namespace ccembed
