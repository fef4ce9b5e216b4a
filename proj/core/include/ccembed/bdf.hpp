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

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ccembed/grid.hpp"
#include "ccembed/metric.hpp"

namespace ccembed {

/// K^2 = |dr|^2_gbar at a chart point.
double compute_K2(const MetricSpec& spec, std::span<const double> p);

/// K^2 at each of the given chart points.
std::vector<double> compute_K2(const MetricSpec& spec,
                               std::span<const SmallVector> points);

struct FlowOptions {
  /// RK4 steps per unit collar depth are chosen so the step never exceeds
  /// eps / steps.
  int steps = 256;
  /// Tolerance on |r(flow_t(b)) - t| along trajectories.
  double level_tolerance = 1e-8;
  /// Tolerance on the normalized cross term gbar(V, F_b) of the flowed
  /// metric.
  double orthogonality_tolerance = 1e-8;
};

/// Collar normal form gbar = dr^2 / K^2 + h(r) obtained from the flow of
/// V = K^{-2} grad_gbar r issued from the boundary nodes of one end.
struct NormalFormData {
  CollarGrid grid;
  int end = 0;
  /// Chart point reached at each collar node.
  std::vector<SmallVector> chart_points;
  /// Pushforward of the collar coordinate frame {d_r, d_b} at each node
  /// (m x m, first column is V).
  std::vector<SmallMatrix> frames;
  std::vector<double> K2;
  /// Boundary metric path h(r) on the boundary tangent directions.
  std::vector<SmallMatrix> h;
  double max_level_defect = 0.0;
  double max_cross_term = 0.0;

  double epsilon() const { return grid.epsilon(); }
  /// gbar in collar coordinates at a node, F^T gbar F.
  SmallMatrix flowed_metric(const MetricSpec& spec, int node) const;
};

/// Integrates the flow of V from every boundary node of `end` out to the
/// collar depth eps and samples it on an (r_count x boundary_count^(m-1))
/// grid. Tangent vectors are carried by the variational equation.
///
/// Throws FlowError (exits chart, K^2 reaches 0, level or orthogonality
/// defect above tolerance).
NormalFormData flow_collar(const MetricSpec& spec, int end, double eps,
                           int r_count, int boundary_count,
                           const FlowOptions& opts = {});

/// Largest eps_request / 2^k such that the sampled K^2 stays at or below
/// 1 - margin on [0, eps] (linear interpolation is used between the last
/// node below eps and eps itself).
///
/// The margin actually used is min(margin, (1 - max K^2|_{r=0}) / 2), so
/// that any metric with kappa_inf > -1 admits a collar. Throws
/// HypothesisViolation when K^2 >= 1 at a boundary node and ConfigError for
/// margin outside (0, 1).
double choose_epsilon(const NormalFormData& nf, double margin = 0.05);

enum class CutoffKind { Smoothstep5, SmoothExp, PiecewiseLinear, Zero };

CutoffKind parse_cutoff_kind(const std::string& name);
std::string to_string(CutoffKind kind);

/// Cutoff Q with Q(0) = 0 and Q = 1 on [eps/2, inf). Q(r)/r is evaluated
/// from its factored closed form, never by dividing by r.
class CutoffSpec {
 public:
  CutoffSpec(double eps, CutoffKind kind);

  CutoffKind kind() const { return kind_; }
  double epsilon() const { return eps_; }

  double Q(double r) const;
  double dQ(double r) const;
  double Q_over_r(double r) const;

 private:
  double eps_;
  CutoffKind kind_;
};

/// Throws ConfigError for eps <= 0.
CutoffSpec make_cutoff(double eps, CutoffKind kind);

/// phi(r) = -int_0^r Q(t)/t dt, the associated bdf x = e^phi r and its
/// constant extension.
class BdfProfile {
 public:
  BdfProfile(CutoffSpec cutoff, std::vector<double> table_r,
             std::vector<double> table_phi, double tolerance);

  const CutoffSpec& cutoff() const { return cutoff_; }
  double epsilon() const { return cutoff_.epsilon(); }
  /// The Zero cutoff gives x = r and no plateau.
  bool has_plateau() const { return cutoff_.kind() != CutoffKind::Zero; }

  double phi(double r) const;
  double x(double r) const;
  /// dx/dr = e^phi (1 - Q).
  double dx_dr(double r) const;
  /// e^phi, i.e. x / r, finite at r = 0.
  double x_over_r(double r) const;
  /// x on [eps/2, inf). Throws ConfigError without a plateau.
  double plateau() const;

  /// 1 + r phi'(r) with phi' from a fourth-order difference of phi.
  double measured_one_plus_rphi(double r) const;

  const std::vector<double>& table_r() const { return table_r_; }
  const std::vector<double>& table_phi() const { return table_phi_; }

 private:
  CutoffSpec cutoff_;
  std::vector<double> table_r_;
  std::vector<double> table_phi_;
  double tolerance_;
  double phi_half_ = 0.0;
};

/// Adaptive Simpson with Richardson correction on [a, b]. Throws
/// QuadratureError past the depth limit.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tolerance, int max_depth = 50);

/// phi by adaptive quadrature of the factored integrand on a table of
/// `table_intervals` cells over [0, eps/2].
BdfProfile compute_phi(const CutoffSpec& q, double tolerance = 1e-10,
                       int table_intervals = 256);

/// x and dx sampled on the collar grid.
struct BdfField {
  BdfProfile profile;
  /// x at each collar node.
  std::vector<double> x;
  /// dx/dr at each collar node (dx has no boundary components).
  std::vector<double> dx_dr;
  /// e^phi at each node.
  std::vector<double> x_over_r;

  /// x at an arbitrary chart point through the reference bdf.
  double x_at(const MetricSpec& spec, std::span<const double> p) const;
};

BdfField assemble_bdf(const NormalFormData& nf, BdfProfile profile);

/// G = x^2 g - dx^2 in collar coordinates, together with x^2 g.
struct AdjustedTensorG {
  /// G from the flowed metric, (x/r)^2 F^T gbar F - dx (x) dx.
  SymTensorField G;
  /// G from the normal form e^{2 phi} [(1/K^2 - (1 - Q)^2) dr^2 + h].
  SymTensorField G_normal_form;
  /// x^2 g in collar coordinates.
  SymTensorField x2g;
  std::vector<double> min_eigenvalue;
  double max_relative_disagreement = 0.0;

  double min_eigenvalue_overall() const;
};

/// Throws ConsistencyError when the two constructions disagree by more
/// than `tolerance` (relative Frobenius).
AdjustedTensorG assemble_G(const MetricSpec& spec, const NormalFormData& nf,
                           const BdfField& bdf, double tolerance = 1e-9);

/// CSV text "r,phi,x,one_plus_rphi" on `samples` points of [0, eps].
std::string bdf_profile_csv(const BdfProfile& profile, int samples = 201);

/// CSV text "r,y1,...,K2,h11,h12,..." with one row per collar node.
std::string normal_form_csv(const NormalFormData& nf,
                            const std::vector<std::string>& boundary_names);

}  // namespace ccembed
