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

#include "ccembed/config.hpp"
#include "ccembed/errors.hpp"

namespace ccembed {
namespace {

const char* kInline = R"(
; inline collar
[manifold]
kind = collar-torus
dim = 2
r_max = 1
periods = 2*pi

[metric]
name = demo
g11 = 4
g22 = (1 + r)^2
lambda = 2

[bdf]
reference = r
cutoff = smooth-exp
epsilon = 0.5

[grid]
nr = 16
nb = 20

[embed]
method = gradient
N = 7
seed = 42
init = linear
weights = uniform

[verify]
isometry = 5e-4

[output]
dir = results
dump_fields = true
)";

TEST(Config, ParsesEverySection) {
  const PipelineConfig cfg = parse_config(kInline);
  EXPECT_EQ(cfg.name, "demo");
  EXPECT_TRUE(cfg.builtin.empty());
  EXPECT_EQ(cfg.kind, ManifoldKind::CollarTorus);
  ASSERT_EQ(cfg.periods.size(), 1u);
  EXPECT_DOUBLE_EQ(cfg.periods[0], 2 * std::numbers::pi);
  EXPECT_DOUBLE_EQ(cfg.lambda, 2.0);
  EXPECT_EQ(cfg.cutoff, CutoffKind::SmoothExp);
  EXPECT_DOUBLE_EQ(cfg.epsilon, 0.5);
  EXPECT_EQ(cfg.r_count, 16);
  EXPECT_EQ(cfg.boundary_count, 20);
  EXPECT_EQ(cfg.method, EmbedMethod::Gradient);
  EXPECT_EQ(cfg.optimizer.method, OptimizerMethod::Gradient);
  EXPECT_EQ(cfg.optimizer.N, 7);
  EXPECT_EQ(cfg.optimizer.seed, 42u);
  EXPECT_EQ(cfg.optimizer.init, OptimizerInit::Linear);
  EXPECT_EQ(cfg.optimizer.weights, NodeWeights::Uniform);
  EXPECT_DOUBLE_EQ(cfg.tolerances.isometry, 5e-4);
  EXPECT_DOUBLE_EQ(cfg.tolerances.kappa, 2e-3);
  EXPECT_EQ(cfg.out_dir, "results");
  EXPECT_TRUE(cfg.dump_fields);
  const MetricSpec spec = cfg.metric();
  const std::vector<double> p = {0.5, 0.0};
  EXPECT_DOUBLE_EQ(spec.compactified(p)(1, 1), 2.25);
  EXPECT_DOUBLE_EQ(spec.compactified(p)(0, 1), 0.0);
}

TEST(Config, BuiltinShortcut) {
  const PipelineConfig cfg = load_config("builtin:scaled-disk(4)");
  EXPECT_EQ(cfg.builtin, "scaled-disk(4)");
  EXPECT_EQ(cfg.r_count, 48);
  EXPECT_DOUBLE_EQ(cfg.epsilon, 0.9);
  EXPECT_EQ(cfg.metric().name(), "scaled-disk(4)");
  EXPECT_THROW(load_config("builtin:no-such-example"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST(Config, RejectsInvalidInput) {
  EXPECT_THROW(parse_config("[metric]\nbuiltin = hyperbolic-disk\nlambda = 0\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[metric]\nbuiltin = hyperbolic-disk\n[grid]\nnr = 4\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[metric]\nbuiltin = hyperbolic-disk\nfoo = 1\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[metrics]\nbuiltin = hyperbolic-disk\n"), ConfigError);
  EXPECT_THROW(parse_config("[metric]\nbuiltin = hyperbolic-disk\n[verify]\nkappa = -1\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[metric]\nbuiltin = hyperbolic-disk\n[grid]\nnr = 12.5\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[metric]\ng11 = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("[metric]\nbuiltin = hyperbolic-disk\n[manifold]\ndim = 2\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[embed]\nmethod = analytic\n[metric]\nbuiltin = borderline\n"),
               ConfigError);
  EXPECT_THROW(parse_config("[metric\n"), ConfigError);
}

TEST(Config, ToleranceOverrides) {
  PipelineConfig cfg = builtin_config("hyperbolic-disk");
  apply_tolerance_override(cfg, "isometry=1e-6");
  apply_tolerance_override(cfg, " kappa = 0.01 ");
  EXPECT_DOUBLE_EQ(cfg.tolerances.isometry, 1e-6);
  EXPECT_DOUBLE_EQ(cfg.tolerances.kappa, 0.01);
  EXPECT_THROW(apply_tolerance_override(cfg, "isometry"), ConfigError);
  EXPECT_THROW(apply_tolerance_override(cfg, "unknown=1"), ConfigError);
  EXPECT_THROW(apply_tolerance_override(cfg, "kappa=0"), ConfigError);
}

}  // namespace
}  // namespace ccembed
