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

#include "ccembed/curvature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <sstream>

#include "ccembed/errors.hpp"

namespace ccembed {

namespace {

std::span<const double> as_span(const SmallVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

}  // namespace

double kappa_infinity(const MetricSpec& spec, const Expression& x,
                      std::span<const double> boundary_node) {
  const int m = spec.dim();
  const double xv = x.evaluate(boundary_node);
  if (std::abs(xv) > 1e-10) {
    std::ostringstream os;
    os << "x = " << xv << " does not vanish at the boundary node";
    throw NotABoundaryDefiningFunction(os.str());
  }
  SmallVector dx(m);
  for (int k = 0; k < m; ++k) dx(k) = x.derivative(k).evaluate(boundary_node);

  const SmallMatrix g = spec.compactified(boundary_node);
  const SmallMatrix ginv = g.inverse();
  const SmallVector dr = spec.bdf_gradient(boundary_node);
  const double dr2 = dr.dot(ginv * dr);
  const double cross = dx.dot(ginv * dr);
  if (dx.norm() < 1e-14 || std::abs(cross) < 1e-14 * std::sqrt(dr2))
    throw NotABoundaryDefiningFunction(
        "x has zero normal differential at the boundary node");
  const double c = cross / dr2;
  return -dx.dot(ginv * dx) / (c * c);
}

double kappa_infinity(const MetricSpec& spec,
                      std::span<const double> boundary_node) {
  return kappa_infinity(spec, spec.reference_bdf(), boundary_node);
}

double KappaInfinityField::min() const {
  return kappa.empty() ? 0.0 : *std::min_element(kappa.begin(), kappa.end());
}

double KappaInfinityField::max() const {
  return kappa.empty() ? 0.0 : *std::max_element(kappa.begin(), kappa.end());
}

std::vector<SmallVector> boundary_samples(const ModelManifold& manifold,
                                          int per_axis) {
  const auto axes = manifold.boundary_axes();
  std::vector<std::vector<double>> ticks;
  for (const auto& a : axes) {
    auto& t = ticks.emplace_back();
    const double h = (a.upper - a.lower) / per_axis;
    for (int i = 0; i < per_axis; ++i)
      t.push_back(a.lower + (a.periodic ? i : i + 0.5) * h);
  }
  std::vector<SmallVector> out;
  if (ticks.size() == 1) {
    for (double v : ticks[0]) {
      SmallVector b(1);
      b << v;
      out.push_back(b);
    }
  } else {
    for (double u : ticks[0])
      for (double v : ticks[1]) {
        SmallVector b(2);
        b << u, v;
        out.push_back(b);
      }
  }
  return out;
}

KappaInfinityField kappa_infinity_field(const MetricSpec& spec,
                                        const Expression& x, int per_axis) {
  KappaInfinityField field;
  field.bdf = x.to_string();
  field.spec = spec.name();
  const auto samples = boundary_samples(spec.manifold(), per_axis);
  for (int end = 0; end < spec.manifold().boundary_count(); ++end) {
    for (const auto& b : samples) {
      const SmallVector p = spec.manifold().boundary_point(end, as_span(b));
      field.boundary_coords.push_back(b);
      field.ends.push_back(end);
      field.kappa.push_back(kappa_infinity(spec, x, as_span(p)));
    }
  }
  return field;
}

double kappa_rescale(double kappa, double lambda) {
  if (lambda == 0.0) throw ConfigError("lambda must be nonzero");
  return kappa / (lambda * lambda);
}

namespace {

// Coordinate metric with first and (optionally) second derivatives.
struct MetricJet {
  SmallMatrix g;
  std::array<SmallMatrix, 3> dg;
  std::array<std::array<SmallMatrix, 3>, 3> ddg;
};

using JetFn = std::function<MetricJet(std::span<const double>, bool)>;

// Gamma^rho_{mu nu} stored as gamma[rho](mu, nu).
using Christoffel = std::array<SmallMatrix, 3>;

// L_{s mu nu} = (d_mu g_{s nu} + d_nu g_{s mu} - d_s g_{mu nu}) / 2, with
// d[k] standing for d_k g (or its derivative).
SmallVector lowered(const std::array<SmallMatrix, 3>& d, int m, int mu,
                    int nu) {
  SmallVector out(m);
  for (int s = 0; s < m; ++s)
    out(s) = 0.5 * (d[mu](s, nu) + d[nu](s, mu) - d[s](mu, nu));
  return out;
}

Christoffel christoffel(const MetricJet& jet, const SmallMatrix& ginv, int m) {
  Christoffel gamma;
  for (int rho = 0; rho < m; ++rho) gamma[rho] = SmallMatrix::Zero(m, m);
  for (int mu = 0; mu < m; ++mu)
    for (int nu = 0; nu < m; ++nu) {
      const SmallVector raised = ginv * lowered(jet.dg, m, mu, nu);
      for (int rho = 0; rho < m; ++rho) gamma[rho](mu, nu) = raised(rho);
    }
  return gamma;
}

// d_l Gamma^rho_{mu nu} = -g^{rho a} d_l g_{ab} Gamma^b_{mu nu}
//                         + g^{rho s} d_l L_{s mu nu}
std::array<Christoffel, 3> christoffel_derivative(const MetricJet& jet,
                                                  const SmallMatrix& ginv,
                                                  const Christoffel& gamma,
                                                  int m) {
  std::array<Christoffel, 3> out;
  for (int l = 0; l < m; ++l) {
    for (int rho = 0; rho < m; ++rho) out[l][rho] = SmallMatrix::Zero(m, m);
    for (int mu = 0; mu < m; ++mu)
      for (int nu = 0; nu < m; ++nu) {
        SmallVector gvec(m);
        for (int b = 0; b < m; ++b) gvec(b) = gamma[b](mu, nu);
        const SmallVector v =
            ginv * (lowered(jet.ddg[l], m, mu, nu) - jet.dg[l] * gvec);
        for (int rho = 0; rho < m; ++rho) out[l][rho](mu, nu) = v(rho);
      }
  }
  return out;
}

double sectional_from_jets(const JetFn& jet_at, const TwoPlane& plane,
                           const CurvatureOptions& opts, double step) {
  const int m = static_cast<int>(plane.base.size());
  const SmallVector& p = plane.base;
  const bool symbolic = opts.derivative == ChristoffelDerivative::Symbolic;
  const MetricJet jet = jet_at(as_span(p), symbolic);
  const SmallMatrix ginv = jet.g.inverse();
  const Christoffel gamma = christoffel(jet, ginv, m);

  const SmallVector& X = plane.x;
  const SmallVector& Y = plane.y;
  const double xx = X.dot(jet.g * X);
  const double yy = Y.dot(jet.g * Y);
  const double xy = X.dot(jet.g * Y);
  const double gram = xx * yy - xy * xy;
  if (!(gram > 1e-12 * xx * yy))
    throw DegeneratePlane("two-plane is degenerate (normalized Gram < 1e-12)");

  // dgamma[l][rho](mu, nu) = d_l Gamma^rho_{mu nu}
  std::array<Christoffel, 3> dgamma;
  if (symbolic) {
    dgamma = christoffel_derivative(jet, ginv, gamma, m);
  } else {
    static constexpr std::array<double, 4> offsets = {-2.0, -1.0, 1.0, 2.0};
    static constexpr std::array<double, 4> weights = {1.0, -8.0, 8.0, -1.0};
    for (int l = 0; l < m; ++l) {
      for (int rho = 0; rho < m; ++rho)
        dgamma[l][rho] = SmallMatrix::Zero(m, m);
      for (int s = 0; s < 4; ++s) {
        SmallVector q = p;
        q(l) += offsets[s] * step;
        const MetricJet jq = jet_at(as_span(q), false);
        const Christoffel gq = christoffel(jq, jq.g.inverse(), m);
        for (int rho = 0; rho < m; ++rho)
          dgamma[l][rho] += (weights[s] / (12.0 * step)) * gq[rho];
      }
    }
  }

  // R^rho_{s mu nu} = d_mu G^rho_{nu s} - d_nu G^rho_{mu s}
  //                 + G^rho_{mu l} G^l_{nu s} - G^rho_{nu l} G^l_{mu s},
  // contracted to R(X,Y)Y.
  SmallVector rxyy = SmallVector::Zero(m);
  for (int rho = 0; rho < m; ++rho) {
    double acc = 0.0;
    for (int sg = 0; sg < m; ++sg)
      for (int mu = 0; mu < m; ++mu)
        for (int nu = 0; nu < m; ++nu) {
          const double w = Y(sg) * X(mu) * Y(nu);
          if (w == 0.0) continue;
          double r = dgamma[mu][rho](nu, sg) - dgamma[nu][rho](mu, sg);
          for (int l = 0; l < m; ++l)
            r += gamma[rho](mu, l) * gamma[l](nu, sg) -
                 gamma[rho](nu, l) * gamma[l](mu, sg);
          acc += r * w;
        }
    rxyy(rho) = acc;
  }
  return X.dot(jet.g * rxyy) / gram;
}

}  // namespace

double sectional_curvature(const MetricSpec& spec, const TwoPlane& plane,
                           const CurvatureOptions& opts) {
  const int m = spec.dim();
  const double r0 = spec.bdf(as_span(plane.base));
  if (!(r0 >= opts.r_min)) {
    std::ostringstream os;
    os << "curvature base point has r = " << r0 << " < r_min = " << opts.r_min;
    throw ConfigError(os.str());
  }
  // g = gbar s with s = r^-2.
  const JetFn jet_at = [&spec, m](std::span<const double> q, bool second) {
    MetricJet jet;
    const double r = spec.bdf(q);
    const double s = 1.0 / (r * r);
    const SmallMatrix gbar = spec.compactified(q);
    const SmallVector dr = spec.bdf_gradient(q);
    SmallVector ds(m);
    for (int k = 0; k < m; ++k) ds(k) = -2.0 * s * dr(k) / r;
    std::array<SmallMatrix, 3> dgbar;
    for (int k = 0; k < m; ++k) dgbar[k] = spec.compactified_derivative(q, k);
    jet.g = gbar * s;
    for (int k = 0; k < m; ++k) jet.dg[k] = dgbar[k] * s + gbar * ds(k);
    if (second) {
      const SmallMatrix ddr = spec.bdf_hessian(q);
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          const double dds =
              6.0 * s * s * dr(k) * dr(l) - 2.0 * s * ddr(k, l) / r;
          jet.ddg[l][k] = spec.compactified_second_derivative(q, k, l) * s +
                          dgbar[k] * ds(l) + dgbar[l] * ds(k) + gbar * dds;
        }
    }
    return jet;
  };
  return sectional_from_jets(jet_at, plane, opts,
                             std::min(opts.max_step, r0 / 10.0));
}

double sectional_curvature_uncompactified(const MetricSpec& spec,
                                          const TwoPlane& plane,
                                          const CurvatureOptions& opts) {
  const int m = spec.dim();
  const JetFn jet_at = [&spec, m](std::span<const double> q, bool second) {
    MetricJet jet;
    jet.g = spec.compactified(q);
    for (int k = 0; k < m; ++k) jet.dg[k] = spec.compactified_derivative(q, k);
    if (second)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          jet.ddg[l][k] = spec.compactified_second_derivative(q, k, l);
    return jet;
  };
  return sectional_from_jets(jet_at, plane, opts, opts.max_step);
}

namespace {

// Inward unit direction of the coordinate ray from a boundary node.
SmallVector ray_direction(const ModelManifold& manifold, int end,
                          const SmallVector& boundary_point) {
  SmallVector d = SmallVector::Zero(manifold.dim());
  if (manifold.kind() == ManifoldKind::Disk) {
    d = -boundary_point;
  } else {
    d(0) = end == 0 ? 1.0 : -1.0;
  }
  return d;
}

}  // namespace

SmallVector ray_point(const MetricSpec& spec, int end,
                      std::span<const double> boundary_coords, double r) {
  const auto& manifold = spec.manifold();
  const SmallVector p0 = manifold.boundary_point(end, boundary_coords);
  const SmallVector dir = ray_direction(manifold, end, p0);
  const double t_max =
      manifold.kind() == ManifoldKind::Disk ? 1.0 : manifold.r_max();
  auto f = [&](double t) {
    const SmallVector q = p0 + t * dir;
    return spec.bdf(as_span(q)) - r;
  };
  // The reference bdf increases along the inward ray near the boundary;
  // bracket the first crossing and bisect.
  double lo = 0.0, hi = 0.0;
  const int n = 4096;
  double flo = f(0.0);
  bool found = false;
  for (int i = 1; i <= n; ++i) {
    const double t = t_max * i / n;
    const double ft = f(t);
    if ((flo <= 0.0 && ft >= 0.0) || (flo >= 0.0 && ft <= 0.0)) {
      lo = t_max * (i - 1) / n;
      hi = t;
      found = true;
      break;
    }
    flo = ft;
  }
  if (!found) {
    std::ostringstream os;
    os << "no point with bdf = " << r << " on the ray";
    throw ConfigError(os.str());
  }
  double flo_v = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm <= 0.0) == (flo_v <= 0.0)) {
      lo = mid;
      flo_v = fm;
    } else {
      hi = mid;
    }
  }
  return p0 + (0.5 * (lo + hi)) * dir;
}

TwoPlane ray_plane(const MetricSpec& spec, int end,
                   std::span<const double> boundary_coords, double r,
                   PlaneFamily family) {
  const auto& manifold = spec.manifold();
  const int m = manifold.dim();
  TwoPlane plane;
  plane.base = ray_point(spec, end, boundary_coords, r);
  const SmallVector p0 = manifold.boundary_point(end, boundary_coords);
  const SmallMatrix tangents = manifold.boundary_tangents(end, boundary_coords);
  if (family == PlaneFamily::NormalTangent) {
    plane.x = ray_direction(manifold, end, p0);
    plane.y = tangents.col(0);
  } else if (m >= 3) {
    plane.x = tangents.col(0);
    plane.y = tangents.col(1);
  } else {
    plane.x = SmallVector::Unit(m, 0);
    plane.y = SmallVector::Unit(m, 1);
  }
  return plane;
}

std::vector<LimitSample> curvature_limit_scan(
    const MetricSpec& spec, int end, std::span<const double> boundary_coords,
    PlaneFamily family, std::span<const double> radii,
    const CurvatureOptions& opts) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < opts.r_min)
      throw ConfigError("limit scan radius below r_min");
    if (i > 0 && !(radii[i] < radii[i - 1]))
      throw ConfigError("limit scan radii must be strictly decreasing");
  }
  const SmallVector p0 = spec.manifold().boundary_point(end, boundary_coords);
  const double kappa = kappa_infinity(spec, as_span(p0));
  std::vector<LimitSample> out;
  for (double r : radii) {
    const TwoPlane plane = ray_plane(spec, end, boundary_coords, r, family);
    const double k = sectional_curvature(spec, plane, opts);
    out.push_back({r, k, std::abs(k - kappa)});
  }
  return out;
}

}  // namespace ccembed
