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
#include <vector>

#include "ccembed/curvature.hpp"
#include "ccembed/errors.hpp"
#include "ccembed/examples.hpp"

namespace ccembed {
namespace {

SmallVector vec(std::initializer_list<double> v) {
  SmallVector out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

std::span<const double> as_span(const SmallVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Gaussian curvature of E(r) dr^2 + G(r) dy^2:
// K = -(1 / sqrt(E G)) d/dr (d/dr sqrt(G) / sqrt(E)), evaluated with nested
// central differences.
template <typename F1, typename F2>
double warped_curvature(F1 E, F2 G, double r) {
  const double h = 1e-4;
  auto inner = [&](double t) {
    const double dsg = (std::sqrt(G(t + h)) - std::sqrt(G(t - h))) / (2 * h);
    return dsg / std::sqrt(E(t));
  };
  return -(inner(r + h) - inner(r - h)) / (2 * h) / std::sqrt(E(r) * G(r));
}

TEST(KappaInfinity, SymbolicOracles) {
  const std::vector<double> b = {0.3};
  const auto at = [&](const MetricSpec& s) {
    const SmallVector p = s.manifold().boundary_point(0, b);
    return kappa_infinity(s, as_span(p));
  };
  EXPECT_NEAR(at(builtin_example("hyperbolic-disk")), -1.0, 1e-14);
  EXPECT_NEAR(at(builtin_example("scaled-disk(4)")), -0.25, 1e-14);
  EXPECT_NEAR(at(builtin_example("normal-form-constK(0.5)")), -0.25, 1e-14);
  EXPECT_NEAR(at(builtin_example("borderline")), -(0.75 + 0.25 * std::cos(0.3)), 1e-14);
}

TEST(KappaInfinity, IndependentOfTheBdf) {
  for (const auto& name : builtin_example_names()) {
    const MetricSpec spec = builtin_example(name);
    const Expression x = parse_expression(
        "exp(0.3*sin(y1))*(" + spec.reference_bdf().to_string() + ")",
        spec.coordinate_names());
    const KappaInfinityField a = kappa_infinity_field(spec, spec.reference_bdf(), 16);
    const KappaInfinityField c = kappa_infinity_field(spec, x, 16);
    ASSERT_EQ(a.kappa.size(), c.kappa.size());
    for (std::size_t i = 0; i < a.kappa.size(); ++i)
      EXPECT_NEAR(a.kappa[i], c.kappa[i], 1e-12) << name;
  }
}

TEST(KappaInfinity, RescalingLaw) {
  for (const auto& name : builtin_example_names()) {
    const MetricSpec spec = builtin_example(name);
    const KappaInfinityField base = kappa_infinity_field(spec, spec.reference_bdf(), 8);
    for (double lambda : {0.5, 2.0, 5.0}) {
      const MetricSpec s = spec.rescaled(lambda);
      const KappaInfinityField f = kappa_infinity_field(s, s.reference_bdf(), 8);
      for (std::size_t i = 0; i < f.kappa.size(); ++i)
        EXPECT_NEAR(f.kappa[i], base.kappa[i] / (lambda * lambda), 1e-12);
    }
  }
  EXPECT_THROW(kappa_rescale(-1.0, 0.0), ConfigError);
}

TEST(KappaInfinity, RejectsNonBoundaryDefiningFunctions) {
  const MetricSpec spec = builtin_example("normal-form-constK(0.5)");
  const std::vector<double> p = {0.0, 1.0};
  const Expression shifted = parse_expression("r + 1", spec.coordinate_names());
  EXPECT_THROW(kappa_infinity(spec, shifted, p), NotABoundaryDefiningFunction);
  const Expression squared = parse_expression("r^2", spec.coordinate_names());
  EXPECT_THROW(kappa_infinity(spec, squared, p), NotABoundaryDefiningFunction);
}

TEST(KappaInfinity, FieldCoversBothEnds) {
  const ModelManifold M = ModelManifold::collar_torus(2, 1.0, {2 * std::numbers::pi},
                                                      BoundaryEnds::Both);
  const MetricSpec spec = MetricSpec::parse(M, {{"2", "0"}, {"1"}}, "r*(1 - r)");
  const KappaInfinityField f = kappa_infinity_field(spec, spec.reference_bdf(), 8);
  EXPECT_EQ(f.kappa.size(), 16u);
  EXPECT_NEAR(f.min(), -0.5, 1e-14);
  EXPECT_NEAR(f.max(), -0.5, 1e-14);
}

TEST(Sectional, HyperbolicDiskIsMinusOne) {
  const MetricSpec spec = builtin_example("hyperbolic-disk");
  for (auto base : {vec({0.1, 0.2}), vec({-0.6, 0.3}), vec({0.0, 0.9})}) {
    const TwoPlane plane{base, vec({1.0, 0.3}), vec({-0.2, 1.0})};
    EXPECT_NEAR(sectional_curvature(spec, plane), -1.0, 1e-10);
  }
}

TEST(Sectional, WarpedProductOracle) {
  // gbar = 4 dr^2 + (1 + r)^2 dy^2: K = -1 / (4 (1 + r)).
  const MetricSpec spec = builtin_example("normal-form-constK(0.5)");
  auto E = [](double r) { return 4.0 / (r * r); };
  auto G = [](double r) { return (1 + r) * (1 + r) / (r * r); };
  for (double r : {0.05, 0.2, 0.6}) {
    const TwoPlane plane{vec({r, 0.4}), vec({1.0, 0.0}), vec({0.0, 1.0})};
    const double oracle = warped_curvature(E, G, r);
    EXPECT_NEAR(oracle, -1.0 / (4 * (1 + r)), 1e-5);
    EXPECT_NEAR(sectional_curvature(spec, plane), oracle, 1e-5);
    EXPECT_NEAR(sectional_curvature(spec, plane), -1.0 / (4 * (1 + r)), 1e-12);
    CurvatureOptions fd;
    fd.derivative = ChristoffelDerivative::FiniteDifference;
    EXPECT_NEAR(sectional_curvature(spec, plane, fd), -1.0 / (4 * (1 + r)), 1e-5);
  }
}

TEST(Sectional, HalfSpaceInThreeDimensions) {
  const ModelManifold M =
      ModelManifold::collar_torus(3, 1.0, {2 * std::numbers::pi, 2 * std::numbers::pi});
  const MetricSpec spec =
      MetricSpec::parse(M, {{"1", "0", "0"}, {"1", "0"}, {"1"}}, "r");
  const TwoPlane plane{vec({0.3, 1.0, 2.0}), vec({1.0, 0.5, 0.0}), vec({0.0, 1.0, 1.0})};
  EXPECT_NEAR(sectional_curvature(spec, plane), -1.0, 1e-10);
}

TEST(Sectional, UncompactifiedFlatMetric) {
  const MetricSpec spec = builtin_example("flat-cylinder(1,2)");
  const TwoPlane plane{vec({0.5, 1.0}), vec({1.0, 0.0}), vec({0.0, 1.0})};
  EXPECT_NEAR(sectional_curvature_uncompactified(spec, plane), 0.0, 1e-12);
}

TEST(Sectional, Errors) {
  const MetricSpec spec = builtin_example("hyperbolic-disk");
  const TwoPlane degenerate{vec({0.1, 0.1}), vec({1.0, 2.0}), vec({2.0, 4.0})};
  EXPECT_THROW(sectional_curvature(spec, degenerate), DegeneratePlane);
  const TwoPlane near_boundary{vec({0.99999, 0.0}), vec({1.0, 0.0}), vec({0.0, 1.0})};
  EXPECT_THROW(sectional_curvature(spec, near_boundary), ConfigError);
}

TEST(LimitScan, RayPointHasTheRequestedBdfValue) {
  const MetricSpec spec = builtin_example("hyperbolic-disk");
  const std::vector<double> b = {1.1};
  for (double r : {0.2, 0.05}) {
    const SmallVector p = ray_point(spec, 0, b, r);
    EXPECT_NEAR(spec.bdf(as_span(p)), r, 1e-12);
    EXPECT_NEAR(std::atan2(p(1), p(0)), 1.1, 1e-12);
  }
}

TEST(LimitScan, ErrorsDecayLikeTheOracle) {
  const MetricSpec spec = builtin_example("normal-form-constK(0.5)");
  const std::vector<double> b = {0.5};
  const std::vector<double> radii = {0.2, 0.1, 0.05, 0.025};
  for (PlaneFamily fam : {PlaneFamily::NormalTangent, PlaneFamily::TangentTangent}) {
    const auto scan = curvature_limit_scan(spec, 0, b, fam, radii);
    ASSERT_EQ(scan.size(), radii.size());
    for (std::size_t i = 0; i < scan.size(); ++i)
      EXPECT_NEAR(scan[i].error, radii[i] / (4 * (1 + radii[i])), 1e-10);
  }
}

TEST(LimitScan, ValidatesRadii) {
  const MetricSpec spec = builtin_example("hyperbolic-disk");
  const std::vector<double> b = {0.0};
  const std::vector<double> increasing = {0.1, 0.2};
  EXPECT_THROW(curvature_limit_scan(spec, 0, b, PlaneFamily::NormalTangent, increasing),
               ConfigError);
  const std::vector<double> tiny = {0.1, 1e-4};
  EXPECT_THROW(curvature_limit_scan(spec, 0, b, PlaneFamily::NormalTangent, tiny),
               ConfigError);
}

}  // namespace
}  // namespace ccembed
