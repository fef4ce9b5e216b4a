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


#include "ccembed/bdf.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "ccembed/errors.hpp"

namespace ccembed {

namespace {

std::span<const double> as_span(const SmallVector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::vector<double> to_std(const SmallVector& v) {
  return {v.data(), v.data() + v.size()};
}

}  // namespace

double compute_K2(const MetricSpec& spec, std::span<const double> p) {
  return zero_norm_of_differential(spec, spec.bdf_gradient(p), p);
}

std::vector<double> compute_K2(const MetricSpec& spec,
                               std::span<const SmallVector> points) {
  std::vector<double> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(compute_K2(spec, as_span(p)));
  return out;
}

SmallMatrix NormalFormData::flowed_metric(const MetricSpec& spec,
                                          int node) const {
  const SmallMatrix& F = frames[node];
  SmallMatrix m = F.transpose() * spec.compactified(as_span(chart_points[node])) * F;
  return 0.5 * (m + m.transpose());
}

namespace {

struct FlowState {
  SmallVector p;
  SmallMatrix F;  // m x (m-1) carried boundary tangents
};

// V = K^-2 gbar^-1 dr and its Jacobian DV.
struct FlowField {
  SmallVector V;
  SmallMatrix DV;
  double K2 = 0.0;
};

FlowField flow_field(const MetricSpec& spec, const SmallVector& p) {
  const int m = spec.dim();
  const auto s = as_span(p);
  const SmallMatrix ginv = spec.compactified(s).inverse();
  const SmallVector dr = spec.bdf_gradient(s);
  const SmallMatrix H = spec.bdf_hessian(s);
  const SmallVector w = ginv * dr;
  FlowField out;
  out.K2 = dr.dot(w);
  out.V = w / out.K2;
  out.DV.resize(m, m);
  for (int k = 0; k < m; ++k) {
    const SmallMatrix dg = spec.compactified_derivative(s, k);
    const SmallVector dw = ginv * (H.col(k) - dg * w);
    const double dK2 = 2.0 * H.col(k).dot(w) - w.dot(dg * w);
    out.DV.col(k) = dw / out.K2 - w * (dK2 / (out.K2 * out.K2));
  }
  return out;
}

FlowState rhs(const MetricSpec& spec, const FlowState& y) {
  const FlowField f = flow_field(spec, y.p);
  if (!(f.K2 > 1e-12) || !std::isfinite(f.K2))
    throw FlowError(FlowError::Kind::DegenerateK2,
                    "K^2 reaches 0 along the flow");
  return {f.V, f.DV * y.F};
}

FlowState axpy(const FlowState& y, double a, const FlowState& k) {
  return {y.p + a * k.p, y.F + a * k.F};
}

}  // namespace

NormalFormData flow_collar(const MetricSpec& spec, int end, double eps,
                           int r_count, int boundary_count,
                           const FlowOptions& opts) {
  const auto& manifold = spec.manifold();
  if (end < 0 || end >= manifold.boundary_count())
    throw ConfigError("boundary end out of range");
  NormalFormData nf{CollarGrid::for_manifold(manifold, eps, r_count,
                                             boundary_count),
                    end, {}, {}, {}, {}, 0.0, 0.0};
  const CollarGrid& grid = nf.grid;
  const int n = grid.node_count();
  const int nb = grid.boundary_count();
  const int m = spec.dim();
  nf.chart_points.resize(n);
  nf.frames.resize(n);
  nf.K2.resize(n);
  nf.h.resize(n);

  const double dr_grid = grid.axis(0).spacing();
  const int sub = std::max(
      1, static_cast<int>(std::ceil(opts.steps * dr_grid / eps - 1e-12)));
  const double dt = dr_grid / sub;

  for (int ib = 0; ib < nb; ++ib) {
    const SmallVector b = grid.boundary_coords(ib);
    FlowState y{manifold.boundary_point(end, as_span(b)),
                manifold.boundary_tangents(end, as_span(b))};
    for (int ir = 0; ir < r_count; ++ir) {
      if (ir > 0) {
        for (int s = 0; s < sub; ++s) {
          const FlowState k1 = rhs(spec, y);
          const FlowState k2 = rhs(spec, axpy(y, 0.5 * dt, k1));
          const FlowState k3 = rhs(spec, axpy(y, 0.5 * dt, k2));
          const FlowState k4 = rhs(spec, axpy(y, dt, k3));
          y.p += (dt / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);
          y.F += (dt / 6.0) * (k1.F + 2.0 * k2.F + 2.0 * k3.F + k4.F);
          if (!manifold.in_chart(as_span(y.p))) {
            std::ostringstream os;
            os << "flow exits chart before collar depth " << eps;
            throw FlowError(FlowError::Kind::ExitsChart, os.str());
          }
        }
      }
      const int node = ir * nb + ib;
      const double t = grid.axis(0).node(ir);
      const FlowField f = flow_field(spec, y.p);
      if (!(f.K2 > 1e-12))
        throw FlowError(FlowError::Kind::DegenerateK2,
                        "K^2 reaches 0 along the flow");
      SmallMatrix frame(m, m);
      frame.col(0) = f.V;
      frame.rightCols(m - 1) = y.F;
      nf.chart_points[node] = y.p;
      nf.frames[node] = frame;
      nf.K2[node] = f.K2;

      const SmallMatrix g = spec.compactified(as_span(y.p));
      SmallMatrix h = y.F.transpose() * g * y.F;
      nf.h[node] = 0.5 * (h + h.transpose());

      const double level = std::abs(spec.bdf(as_span(y.p)) - t);
      nf.max_level_defect = std::max(nf.max_level_defect, level);
      const double vnorm = std::sqrt(f.V.dot(g * f.V));
      for (int j = 0; j < m - 1; ++j) {
        const double cross = std::abs(f.V.dot(g * y.F.col(j))) /
                             (vnorm * std::sqrt(y.F.col(j).dot(g * y.F.col(j))));
        nf.max_cross_term = std::max(nf.max_cross_term, cross);
      }
    }
  }
  if (nf.max_level_defect > opts.level_tolerance) {
    std::ostringstream os;
    os << "level sets drift from the flow time: max |r - t| = "
       << nf.max_level_defect;
    throw FlowError(FlowError::Kind::Orthogonality, os.str());
  }
  if (nf.max_cross_term > opts.orthogonality_tolerance) {
    std::ostringstream os;
    os << "flowed metric has cross term " << nf.max_cross_term
       << " above tolerance " << opts.orthogonality_tolerance;
    throw FlowError(FlowError::Kind::Orthogonality, os.str());
  }
  return nf;
}

double choose_epsilon(const NormalFormData& nf, double margin) {
  if (!(margin > 0.0 && margin < 1.0))
    throw ConfigError("epsilon margin must lie in (0, 1)");
  const CollarGrid& grid = nf.grid;
  const int nb = grid.boundary_count();
  double worst = -1.0;
  int worst_node = 0;
  for (int ib = 0; ib < nb; ++ib) {
    if (nf.K2[ib] > worst) {
      worst = nf.K2[ib];
      worst_node = ib;
    }
  }
  if (worst >= 1.0) {
    std::ostringstream os;
    os << "kappa_inf = " << -worst << " <= -1 at boundary node ("
       << nf.chart_points[worst_node].transpose()
       << "): the collar construction needs K^2 < 1";
    throw HypothesisViolation(to_std(nf.chart_points[worst_node]), worst,
                              os.str());
  }
  const double effective = std::min(margin, 0.5 * (1.0 - worst));
  const double bound = 1.0 - effective;

  // Largest K^2 over [0, e] along every trajectory.
  auto max_K2 = [&](double e) {
    double out = 0.0;
    for (int ib = 0; ib < nb; ++ib) {
      for (int ir = 0; ir < grid.r_count(); ++ir) {
        const double r = grid.axis(0).node(ir);
        const int node = ir * nb + ib;
        if (r <= e) {
          out = std::max(out, nf.K2[node]);
        } else {
          const double r0 = grid.axis(0).node(ir - 1);
          const double k0 = nf.K2[node - nb];
          out = std::max(out, k0 + (nf.K2[node] - k0) * (e - r0) / (r - r0));
          break;
        }
      }
    }
    return out;
  };

  double eps = nf.epsilon();
  for (int k = 0; k < 60; ++k, eps *= 0.5)
    if (max_K2(eps) <= bound) return eps;
  throw HypothesisViolation(to_std(nf.chart_points[worst_node]), worst,
                            "no dyadic collar depth keeps K^2 below 1");
}

CutoffKind parse_cutoff_kind(const std::string& name) {
  if (name == "smoothstep5") return CutoffKind::Smoothstep5;
  if (name == "smooth-exp") return CutoffKind::SmoothExp;
  if (name == "piecewise-linear") return CutoffKind::PiecewiseLinear;
  if (name == "zero") return CutoffKind::Zero;
  throw ConfigError("unknown cutoff kind '" + name + "'");
}

std::string to_string(CutoffKind kind) {
  switch (kind) {
    case CutoffKind::Smoothstep5:
      return "smoothstep5";
    case CutoffKind::SmoothExp:
      return "smooth-exp";
    case CutoffKind::PiecewiseLinear:
      return "piecewise-linear";
    case CutoffKind::Zero:
      return "zero";
  }
  return "unknown";
}

CutoffSpec::CutoffSpec(double eps, CutoffKind kind) : eps_(eps), kind_(kind) {
  if (!(eps > 0.0)) throw ConfigError("cutoff depth eps must be positive");
}

namespace {

// exp(-1/u) for u > 0, else 0.
double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

}  // namespace

double CutoffSpec::Q(double r) const {
  const double u = std::clamp(2.0 * r / eps_, 0.0, 1.0);
  switch (kind_) {
    case CutoffKind::Smoothstep5:
      return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    case CutoffKind::SmoothExp: {
      const double a = bump(u);
      return a / (a + bump(1.0 - u));
    }
    case CutoffKind::PiecewiseLinear:
      return u;
    case CutoffKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double CutoffSpec::dQ(double r) const {
  const double u = 2.0 * r / eps_;
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double du = 2.0 / eps_;
  switch (kind_) {
    case CutoffKind::Smoothstep5:
      return du * 30.0 * u * u * (1.0 - u) * (1.0 - u);
    case CutoffKind::SmoothExp: {
      const double a = bump(u);
      const double b = bump(1.0 - u);
      const double da = a / (u * u);
      const double db = -b / ((1.0 - u) * (1.0 - u));
      return du * (da * b - a * db) / ((a + b) * (a + b));
    }
    case CutoffKind::PiecewiseLinear:
      return du;
    case CutoffKind::Zero:
      return 0.0;
  }
  return 0.0;
}

double CutoffSpec::Q_over_r(double r) const {
  if (kind_ == CutoffKind::Zero) return 0.0;
  const double u = 2.0 * r / eps_;
  if (u >= 1.0) return 1.0 / r;
  const double c = 2.0 / eps_;
  if (u <= 0.0) return kind_ == CutoffKind::PiecewiseLinear ? c : 0.0;
  switch (kind_) {
    case CutoffKind::Smoothstep5:
      return c * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    case CutoffKind::SmoothExp: {
      // exp(-1/u) / u stays bounded as u -> 0.
      const double a = std::exp(-1.0 / u) / u;
      return c * a / (bump(u) + bump(1.0 - u));
    }
    case CutoffKind::PiecewiseLinear:
      return c;
    case CutoffKind::Zero:
      return 0.0;
  }
  return 0.0;
}

CutoffSpec make_cutoff(double eps, CutoffKind kind) {
  return CutoffSpec(eps, kind);
}

namespace {

double simpson_step(const std::function<double(double)>& f, double a,
                    double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) {
    std::ostringstream os;
    os << "adaptive Simpson did not converge on [" << a << ", " << b << "]";
    throw QuadratureError(os.str());
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tolerance, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    throw QuadratureError("integrand is not finite");
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tolerance, max_depth);
}

BdfProfile::BdfProfile(CutoffSpec cutoff, std::vector<double> table_r,
                       std::vector<double> table_phi, double tolerance)
    : cutoff_(cutoff),
      table_r_(std::move(table_r)),
      table_phi_(std::move(table_phi)),
      tolerance_(tolerance) {
  if (table_r_.size() < 2 || table_r_.size() != table_phi_.size())
    throw ConfigError("phi table needs at least two matching entries");
  phi_half_ = table_phi_.back();
}

double BdfProfile::phi(double r) const {
  if (cutoff_.kind() == CutoffKind::Zero) return 0.0;
  const double half = 0.5 * epsilon();
  if (r >= half) return phi_half_ - std::log(r / half);
  if (r <= 0.0) return 0.0;
  const double cell = table_r_[1] - table_r_[0];
  const std::size_t i = std::min(static_cast<std::size_t>(r / cell),
                                 table_r_.size() - 2);
  const auto f = [this](double t) { return cutoff_.Q_over_r(t); };
  const double tol = tolerance_ / static_cast<double>(table_r_.size());
  return table_phi_[i] - adaptive_simpson(f, table_r_[i], r, tol);
}

double BdfProfile::x(double r) const {
  if (!has_plateau()) return r;
  if (r >= 0.5 * epsilon()) return plateau();
  return std::exp(phi(r)) * r;
}

double BdfProfile::dx_dr(double r) const {
  if (!has_plateau()) return 1.0;
  if (r >= 0.5 * epsilon()) return 0.0;
  return std::exp(phi(r)) * (1.0 - cutoff_.Q(r));
}

double BdfProfile::x_over_r(double r) const { return std::exp(phi(r)); }

double BdfProfile::plateau() const {
  if (!has_plateau())
    throw ConfigError("the zero cutoff has no plateau value");
  return std::exp(phi_half_) * 0.5 * epsilon();
}

double BdfProfile::measured_one_plus_rphi(double r) const {
  if (r <= 0.0) return 1.0;
  const double h = std::min(epsilon() * 1e-5, 0.25 * r);
  const double d = (phi(r - 2.0 * h) - 8.0 * phi(r - h) + 8.0 * phi(r + h) -
                    phi(r + 2.0 * h)) /
                   (12.0 * h);
  return 1.0 + r * d;
}

BdfProfile compute_phi(const CutoffSpec& q, double tolerance,
                       int table_intervals) {
  if (table_intervals < 1) throw ConfigError("phi table needs a cell");
  const double half = 0.5 * q.epsilon();
  std::vector<double> table_r(table_intervals + 1);
  std::vector<double> table_phi(table_intervals + 1, 0.0);
  const auto f = [&q](double t) { return q.Q_over_r(t); };
  const double tol = tolerance / (table_intervals + 1);
  for (int i = 0; i <= table_intervals; ++i)
    table_r[i] = i == table_intervals ? half : half * i / table_intervals;
  for (int i = 1; i <= table_intervals; ++i)
    table_phi[i] =
        table_phi[i - 1] - adaptive_simpson(f, table_r[i - 1], table_r[i], tol);
  return BdfProfile(q, std::move(table_r), std::move(table_phi), tolerance);
}

double BdfField::x_at(const MetricSpec& spec, std::span<const double> p) const {
  return profile.x(spec.bdf(p));
}

BdfField assemble_bdf(const NormalFormData& nf, BdfProfile profile) {
  BdfField field{std::move(profile), {}, {}, {}};
  const int n = nf.grid.node_count();
  field.x.resize(n);
  field.dx_dr.resize(n);
  field.x_over_r.resize(n);
  for (int node = 0; node < n; ++node) {
    const double r = nf.grid.r(node);
    field.x[node] = field.profile.x(r);
    field.dx_dr[node] = field.profile.dx_dr(r);
    field.x_over_r[node] = field.profile.x_over_r(r);
  }
  return field;
}

double AdjustedTensorG::min_eigenvalue_overall() const {
  return min_eigenvalue.empty()
             ? 0.0
             : *std::min_element(min_eigenvalue.begin(), min_eigenvalue.end());
}

AdjustedTensorG assemble_G(const MetricSpec& spec, const NormalFormData& nf,
                           const BdfField& bdf, double tolerance) {
  const int n = nf.grid.node_count();
  const int m = spec.dim();
  if (static_cast<int>(bdf.x.size()) != n)
    throw GridMismatch("bdf field and normal form use different grids");
  std::vector<SmallMatrix> direct(n), normal(n), x2g(n);
  AdjustedTensorG out;
  out.min_eigenvalue.resize(n);
  const CutoffSpec& q = bdf.profile.cutoff();
  for (int node = 0; node < n; ++node) {
    const double r = nf.grid.r(node);
    const double e2 = bdf.x_over_r[node] * bdf.x_over_r[node];
    x2g[node] = e2 * nf.flowed_metric(spec, node);
    direct[node] = x2g[node];
    direct[node](0, 0) -= bdf.dx_dr[node] * bdf.dx_dr[node];

    const double one_minus_q = bdf.profile.has_plateau() ? 1.0 - q.Q(r) : 1.0;
    SmallMatrix nfm = SmallMatrix::Zero(m, m);
    nfm(0, 0) = 1.0 / nf.K2[node] - one_minus_q * one_minus_q;
    nfm.bottomRightCorner(m - 1, m - 1) = nf.h[node];
    normal[node] = e2 * nfm;

    const double scale = direct[node].norm();
    const double rel = (direct[node] - normal[node]).norm() / scale;
    out.max_relative_disagreement = std::max(out.max_relative_disagreement, rel);
    out.min_eigenvalue[node] = min_eigenvalue(direct[node]);
  }
  out.G = SymTensorField(Frame::Coordinate, std::move(direct));
  out.G_normal_form = SymTensorField(Frame::Coordinate, std::move(normal));
  out.x2g = SymTensorField(Frame::Coordinate, std::move(x2g));
  if (out.max_relative_disagreement > tolerance) {
    std::ostringstream os;
    os << "direct and normal-form G disagree: max relative error "
       << out.max_relative_disagreement << " > " << tolerance;
    throw ConsistencyError(os.str());
  }
  return out;
}

std::string bdf_profile_csv(const BdfProfile& profile, int samples) {
  std::ostringstream os;
  os << std::setprecision(17) << "r,phi,x,one_plus_rphi\n";
  for (int i = 0; i < samples; ++i) {
    const double r = profile.epsilon() * i / (samples - 1);
    os << r << ',' << profile.phi(r) << ',' << profile.x(r) << ','
       << profile.measured_one_plus_rphi(r) << '\n';
  }
  return os.str();
}

std::string normal_form_csv(const NormalFormData& nf,
                            const std::vector<std::string>& boundary_names) {
  const int mb = nf.grid.dim() - 1;
  std::ostringstream os;
  os << std::setprecision(17) << 'r';
  for (int k = 0; k < mb; ++k) os << ',' << boundary_names.at(k);
  os << ",K2";
  for (int i = 0; i < mb; ++i)
    for (int j = i; j < mb; ++j) os << ",h" << i + 1 << j + 1;
  os << '\n';
  for (int node = 0; node < nf.grid.node_count(); ++node) {
    const SmallVector c = nf.grid.coords(node);
    for (int k = 0; k < c.size(); ++k) os << (k ? "," : "") << c(k);
    os << ',' << nf.K2[node];
    for (int i = 0; i < mb; ++i)
      for (int j = i; j < mb; ++j) os << ',' << nf.h[node](i, j);
    os << '\n';
  }
  return os.str();
}

}  // namespace ccembed
