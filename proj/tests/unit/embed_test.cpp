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

#include "ccembed/bdf.hpp"
#include "ccembed/embed.hpp"
#include "ccembed/errors.hpp"
#include "ccembed/examples.hpp"

namespace ccembed {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CollarGrid cylinder_grid(int n = 24) {
  return CollarGrid(0.9, n, {GridAxis{0.0, kTwoPi, n, true}});
}

Expression in_r(const std::string& s) {
  const std::vector<std::string> names = {"r"};
  return parse_expression(s, names);
}

SymTensorField pulled(const EuclideanEmbedding& v) {
  std::vector<SmallMatrix> out;
  for (const auto& J : v.jacobians)
    out.push_back(pullback(Matrix::Identity(v.ambient_dim(), v.ambient_dim()), J));
  return SymTensorField(Frame::Coordinate, std::move(out));
}

SymTensorField constK_G(int n) {
  const MetricSpec spec = builtin_example("normal-form-constK(0.5)");
  const NormalFormData nf = flow_collar(spec, 0, 0.9, n, n);
  const BdfField bdf =
      assemble_bdf(nf, compute_phi(make_cutoff(0.9, CutoffKind::Smoothstep5)));
  return assemble_G(spec, nf, bdf).G;
}

TEST(Revolution, PullbackIsTheRevolutionMetric) {
  const CollarGrid g = cylinder_grid();
  const EuclideanEmbedding v = revolution_embedding(g, in_r("1 + r"), in_r("0.5 + 0.3*r"));
  EXPECT_EQ(v.ambient_dim(), 3);
  for (int n = 0; n < g.node_count(); ++n) {
    const double r = g.r(n);
    const Matrix P = pullback(Matrix::Identity(3, 3), v.jacobians[n]);
    EXPECT_NEAR(P(0, 0), (1 + r) * (1 + r), 1e-12);
    EXPECT_NEAR(P(1, 1), std::pow(0.5 + 0.3 * r, 2), 1e-12);
    EXPECT_NEAR(P(0, 1), 0.0, 1e-12);
    EXPECT_NEAR(std::hypot(v.points(n, 0), v.points(n, 1)), 0.5 + 0.3 * r, 1e-14);
  }
}

TEST(Revolution, JacobianMatchesGridDifferences) {
  const CollarGrid g = cylinder_grid(48);
  const EuclideanEmbedding v = revolution_embedding(g, in_r("1 + r"), in_r("0.5 + 0.3*r"));
  for (int d = 0; d < 2; ++d) {
    const Matrix fd = g.derivative(d) * v.points;
    for (int n = 0; n < g.node_count(); ++n)
      EXPECT_LT((fd.row(n).transpose() - v.jacobians[n].col(d)).norm(), 1e-5);
  }
}

TEST(Revolution, RejectsTooSteepProfiles) {
  EXPECT_THROW(revolution_embedding(cylinder_grid(), in_r("0.5"), in_r("r")),
               RepresentabilityError);
}

TEST(Analytic, FlatCylinderAndTorusAreExact) {
  const CollarGrid g = cylinder_grid();
  for (const std::string name : {"flat-cylinder", "flat-torus"}) {
    const std::vector<double> params = {1.5, 0.7};
    const EuclideanEmbedding v = analytic_embedding(name, params, g);
    const SymTensorField G = analytic_metric(name, params, g);
    const SymTensorField P = pulled(v);
    for (int n = 0; n < g.node_count(); ++n)
      EXPECT_LT((P[n] - G[n]).norm(), 1e-12 * G[n].norm()) << name;
  }
  const std::vector<double> one = {1.0};
  EXPECT_THROW(analytic_embedding("flat-cylinder", one, g), ConfigError);
  EXPECT_THROW(analytic_embedding("sphere", one, g), ConfigError);
}

TEST(Optimizer, DetectsRotationalInvariance) {
  const SymTensorField G = constK_G(16);
  const CollarGrid g(0.9, 16, {GridAxis{0.0, kTwoPi, 16, true}});
  EXPECT_TRUE(is_rotationally_invariant(g, G));
  std::vector<SmallMatrix> bumped = G.values();
  bumped[3](1, 1) *= 1.01;
  EXPECT_FALSE(is_rotationally_invariant(g, SymTensorField(Frame::Coordinate, bumped)));
  EXPECT_THROW(twisted_seed(g, G, 2, {7}), RepresentabilityError);
}

TEST(Optimizer, ConvergesFromTheTwistedSeed) {
  const int n = 24;
  const SymTensorField G = constK_G(n);
  const CollarGrid g(0.9, n, {GridAxis{0.0, kTwoPi, n, true}});
  OptimizerConfig cfg;
  cfg.N = 10;
  const OptimizeResult res = optimize_embedding(g, G, cfg);
  EXPECT_TRUE(res.converged);
  EXPECT_EQ(res.init, "twisted");
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    EXPECT_LT(res.trace[i].residual, res.trace[i - 1].residual);
  const EmbeddingDiagnostics d = embedding_diagnostics(res.embedding, G);
  EXPECT_LE(d.max_relative_defect, 1e-3);
  EXPECT_GT(d.min_singular_value, 1e-3);
  EXPECT_GT(d.injectivity_ratio, 0.1);
}

TEST(Optimizer, LinearSeedWithContinuationOnASmallGrid) {
  // G of the flat cylinder, slightly bent so the twisted seed is not used.
  const CollarGrid g(0.9, 12, {GridAxis{0.0, kTwoPi, 12, true}});
  std::vector<SmallMatrix> values;
  for (int n = 0; n < g.node_count(); ++n) {
    SmallMatrix m(2, 2);
    const double y = g.boundary_coords(n)(0);
    m << 1.0, 0.0, 0.0, 1.0 + 0.1 * std::cos(y) * g.r(n);
    values.push_back(m);
  }
  const SymTensorField G(Frame::Coordinate, values);
  OptimizerConfig cfg;
  cfg.N = 6;
  cfg.init = OptimizerInit::Linear;
  cfg.max_iters = 400;
  const OptimizeResult res = optimize_embedding(g, G, cfg);
  EXPECT_EQ(res.init, "linear");
  EXPECT_TRUE(res.converged);
  EXPECT_LE(embedding_diagnostics(res.embedding, G).max_relative_defect, 1e-3);
}

TEST(Optimizer, SeededRunsAreDeterministic) {
  const int n = 16;
  const SymTensorField G = constK_G(n);
  const CollarGrid g(0.9, n, {GridAxis{0.0, kTwoPi, n, true}});
  OptimizerConfig cfg;
  cfg.N = 8;
  const OptimizeResult a = optimize_embedding(g, G, cfg);
  const OptimizeResult b = optimize_embedding(g, G, cfg);
  EXPECT_EQ((a.embedding.points - b.embedding.points).norm(), 0.0);
}

TEST(Optimizer, RejectsBadInputs) {
  const int n = 16;
  const SymTensorField G = constK_G(n);
  const CollarGrid g(0.9, n, {GridAxis{0.0, kTwoPi, n, true}});
  OptimizerConfig cfg;
  cfg.N = 1;
  EXPECT_THROW(optimize_embedding(g, G, cfg), ConfigError);
  std::vector<SmallMatrix> bad = G.values();
  bad[5] = -bad[5];
  cfg.N = 6;
  EXPECT_THROW(optimize_embedding(g, SymTensorField(Frame::Coordinate, bad), cfg),
               SingularMetric);
  const CollarGrid other(0.9, 12, {GridAxis{0.0, kTwoPi, 12, true}});
  EXPECT_THROW(optimize_embedding(other, G, cfg), GridMismatch);
}

TEST(Diagnostics, DoubleCoverIsNotInjective) {
  // theta -> 2 theta identifies antipodal boundary nodes.
  const CollarGrid g = cylinder_grid(16);
  const int n = g.node_count();
  EuclideanEmbedding v{g, Matrix::Zero(n, 3), std::vector<Matrix>(n),
                       EmbeddingSource::Analytic, "double-cover", 0.0};
  for (int i = 0; i < n; ++i) {
    const double r = g.r(i);
    const double t = g.boundary_coords(i)(0);
    v.points.row(i) << std::cos(2 * t), std::sin(2 * t), r;
    Matrix J(3, 2);
    J << 0.0, -2 * std::sin(2 * t), 0.0, 2 * std::cos(2 * t), 1.0, 0.0;
    v.jacobians[i] = J;
  }
  const EmbeddingDiagnostics d = embedding_diagnostics(v, pulled(v));
  EXPECT_LT(d.max_relative_defect, 1e-14);
  EXPECT_LT(d.injectivity_ratio, 1e-12);
  EXPECT_NEAR(d.min_singular_value, 1.0, 1e-12);
}

TEST(Csv, EmbeddingAndTraceHeaders) {
  const EuclideanEmbedding v =
      analytic_embedding("flat-cylinder", std::vector<double>{1.0, 1.0}, cylinder_grid(8));
  const std::string csv = embedding_csv(v);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,y1,v1,v2,v3");
  const std::string t = trace_csv({{0, 1.0, 0.0}});
  EXPECT_EQ(t.substr(0, t.find('\n')), "iter,residual,step");
}

}  // namespace
}  // namespace ccembed
