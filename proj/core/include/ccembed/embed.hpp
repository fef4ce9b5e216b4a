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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ccembed/expression.hpp"
#include "ccembed/grid.hpp"
#include "ccembed/metric.hpp"

namespace ccembed {

enum class EmbeddingSource { Analytic, Optimized };

/// A map from the collar grid into R^N with its Jacobians.
struct EuclideanEmbedding {
  CollarGrid grid;
  /// node_count x N.
  Matrix points;
  /// N x m per node.
  std::vector<Matrix> jacobians;
  EmbeddingSource source = EmbeddingSource::Analytic;
  /// Analytic family name or optimizer description.
  std::string name;
  double final_residual = 0.0;

  int ambient_dim() const { return static_cast<int>(points.cols()); }
};

/// Surface of revolution v = (B cos(w b), B sin(w b), Z(r)) for the metric
/// A(r)^2 dr^2 + B(r)^2 w^2 db^2 on a 2-d collar grid with one periodic
/// boundary axis of period 2 pi / w. A and B are expressions in variable 0
/// (r); Z' = sqrt(A^2 - B'^2). The Jacobian is exact.
///
/// Throws RepresentabilityError where A^2 < B'^2.
EuclideanEmbedding revolution_embedding(const CollarGrid& grid,
                                        const Expression& A,
                                        const Expression& B);

/// Closed-form embeddings by name:
///   flat-cylinder(a, b)   G = b^2 dr^2 + a^2 db^2  -> (a cos b, a sin b, b r)
///                         (via revolution_embedding)
///   flat-torus(a, b)      G = dr^2 + b^2 db^2  -> circle pair
///                         (a cos(r/a), a sin(r/a), b cos b, b sin b)
EuclideanEmbedding analytic_embedding(const std::string& name,
                                      std::span<const double> params,
                                      const CollarGrid& grid);

/// The metric that analytic_embedding(name, params) realizes, in collar
/// coordinates.
SymTensorField analytic_metric(const std::string& name,
                               std::span<const double> params,
                               const CollarGrid& grid);

enum class OptimizerMethod { GaussNewton, Gradient };
enum class OptimizerInit { Auto, Linear, Twisted };
enum class NodeWeights { InverseNorm, Uniform };

struct OptimizerConfig {
  int N = 10;
  int max_iters = 200;
  OptimizerMethod method = OptimizerMethod::GaussNewton;
  OptimizerInit init = OptimizerInit::Auto;
  /// Converged when the max relative defect is at or below this.
  double stop_residual = 1e-3;
  /// Iteration continues past stop_residual down to this value.
  double polish_residual = 1e-10;
  /// Homotopy steps from the initial metric to G (Linear init only).
  int continuation_steps = 10;
  /// Defect accepted before advancing to the next homotopy step.
  double intermediate_residual = 1e-3;
  /// Levenberg-Marquardt damping relative to the mean diagonal of A A^T,
  /// multiplied by the current max relative defect.
  double damping = 1e-2;
  double armijo = 1e-4;
  double min_step = 1e-12;
  std::uint64_t seed = 1;
  /// Amplitude of the seeded perturbation, relative to the mean scale of G.
  double perturbation = 1e-3;
  NodeWeights weights = NodeWeights::InverseNorm;
  /// Common factor applied to all node weights.
  double weight_scale = 1.0;
  /// Frequencies of the twisted seed beyond the base circle.
  std::vector<int> twist_frequencies = {7, 9};
};

struct TraceEntry {
  int iter = 0;
  double residual = 0.0;
  double step = 0.0;
};

struct OptimizeResult {
  EuclideanEmbedding embedding;
  std::vector<TraceEntry> trace;
  bool converged = false;
  /// "twisted" or "linear".
  std::string init;
};

/// True when G depends only on r on a 2-d grid with a periodic boundary
/// axis and has no dr db component (relative tolerance `tol`).
bool is_rotationally_invariant(const CollarGrid& grid, const SymTensorField& G,
                               double tol = 1e-8);

/// Starting map for rotationally invariant G: a base circle with radius
/// fraction c1(r) plus circles of higher frequency k sharing the rest of
/// the boundary length, and a height Z(r) absorbing the remaining radial
/// length. Slots beyond those are left at zero.
///
/// Throws RepresentabilityError if N is too small for a single circle and
/// height (N < 3).
Matrix twisted_seed(const CollarGrid& grid, const SymTensorField& G, int N,
                    const std::vector<int>& frequencies);

/// Minimizes sum_i w_i |J_i^T J_i - G_i|_F^2 over node positions, with J
/// from the grid's fourth-order difference operators. Returns a best-effort
/// result with converged = false when stop_residual is not reached.
///
/// Throws SingularMetric if G is not positive-definite at some node and
/// ConfigError for N < m.
OptimizeResult optimize_embedding(const CollarGrid& grid,
                                  const SymTensorField& G,
                                  const OptimizerConfig& cfg);

struct EmbeddingDiagnostics {
  double max_relative_defect = 0.0;
  double rms_relative_defect = 0.0;
  double min_singular_value = 0.0;
  /// min |v(a) - v(b)| / d_G(a, b) over sampled pairs.
  double injectivity_ratio = 0.0;
  /// Relative defect per node.
  std::vector<double> defect;
};

/// Intrinsic distances come from Dijkstra on the grid graph (all primitive
/// offsets with entries in [-2, 2]) with edge length sqrt(d^T G d), G
/// averaged over the edge end points, from `sources` evenly spaced nodes.
EmbeddingDiagnostics embedding_diagnostics(const EuclideanEmbedding& v,
                                           const SymTensorField& G,
                                           int sources = 32);

/// CSV text "r,y1,...,v1,...,vN".
std::string embedding_csv(const EuclideanEmbedding& v);
/// CSV text "iter,residual,step".
std::string trace_csv(const std::vector<TraceEntry>& trace);

}  // namespace ccembed
