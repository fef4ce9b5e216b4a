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
#include "ccembed/manifold.hpp"
#include "ccembed/metric.hpp"

namespace ccembed {

/// Verification thresholds, overridable with `--tol key=value`.
struct VerifyTolerances {
  double isometry = 1e-3;
  double immersion = 1e-3;
  double injectivity = 0.1;
  double kappa = 2e-3;
  double inequality = 1e-8;
  double consistency = 1e-9;
  /// kappa_inf must exceed -lambda^2 by more than hypothesis * lambda^2.
  double hypothesis = 1e-9;
  double cutoff_identity = 1e-8;

  /// Throws ConfigError for an unknown key or a non-positive value.
  void set(const std::string& key, double value);
  static std::vector<std::string> keys();
};

enum class EmbedMethod { GaussNewton, Gradient, Analytic };

struct PipelineConfig {
  std::string name = "custom";
  /// Built-in example call such as "scaled-disk(4)"; empty for inline specs.
  std::string builtin;

  ManifoldKind kind = ManifoldKind::CollarTorus;
  int dim = 2;
  double r_max = 1.0;
  std::vector<double> periods;
  BoundaryEnds ends = BoundaryEnds::Inner;
  /// Upper triangle of gbar, row by row.
  std::vector<std::vector<std::string>> components;
  std::string reference_bdf = "r";

  double lambda = 1.0;

  CutoffKind cutoff = CutoffKind::Smoothstep5;
  double epsilon = 0.9;
  double margin = 0.05;

  int r_count = 48;
  int boundary_count = 48;
  int flow_steps = 256;

  EmbedMethod method = EmbedMethod::GaussNewton;
  /// Analytic family call, e.g. "flat-cylinder(1,1)".
  std::string analytic;
  OptimizerConfig optimizer;

  VerifyTolerances tolerances;

  std::string out_dir = "out";
  bool dump_fields = false;

  /// Throws ConfigError when an invariant is violated (lambda = 0,
  /// resolutions below 8, non-positive tolerances, ...).
  void validate() const;
  /// Builds the metric spec (built-in or inline).
  MetricSpec metric() const;
};

/// Parses INI text with sections [manifold], [metric], [bdf], [grid],
/// [embed], [verify] and [output]. Unknown sections or keys are errors.
PipelineConfig parse_config(const std::string& text);

/// Reads a config file, or builds the default config of a built-in
/// example when `path` has the form "builtin:<example>".
PipelineConfig load_config(const std::string& path);

/// Default config running a built-in example.
PipelineConfig builtin_config(const std::string& example);

/// Applies "key=value" to the tolerances. Throws ConfigError.
void apply_tolerance_override(PipelineConfig& cfg, const std::string& assignment);

}  // namespace ccembed
