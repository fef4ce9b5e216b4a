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


#include "ccembed/embed.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include <Eigen/SparseCholesky>

#include "ccembed/bdf.hpp"
#include "ccembed/errors.hpp"

namespace ccembed {

namespace {

// Angular frequency of a periodic axis.
double angular(const GridAxis& a) {
  return 2.0 * std::numbers::pi / (a.upper - a.lower);
}

void require_revolution_grid(const CollarGrid& grid) {
  if (grid.dim() != 2 || !grid.axis(1).periodic)
    throw ConfigError(
        "this embedding needs a 2-d collar grid with a periodic boundary axis");
}

// Per-row values along r, differentiated with the grid's r stencil.
std::vector<double> row_derivative(const CollarGrid& grid,
                                   const std::vector<double>& rows) {
  const int nb = grid.boundary_count();
  Vector full(grid.node_count());
  for (int node = 0; node < grid.node_count(); ++node) full(node) = rows[node / nb];
  const Vector d = grid.derivative(0) * full;
  std::vector<double> out(rows.size());
  for (std::size_t ir = 0; ir < rows.size(); ++ir) out[ir] = d(ir * nb);
  return out;
}

}  // namespace

EuclideanEmbedding revolution_embedding(const CollarGrid& grid,
                                        const Expression& A,
                                        const Expression& B) {
  require_revolution_grid(grid);
  const double w = angular(grid.axis(1));
  const Expression dB = B.derivative(0);
  auto eval = [](const Expression& e, double r) {
    const double args[1] = {r};
    return e.evaluate(args);
  };
  auto slope2 = [&](double r) {
    const double a = eval(A, r);
    const double b = eval(dB, r);
    return a * a - b * b;
  };
  auto fail = [](double r) {
    std::ostringstream os;
    os << "surface of revolution not representable: A^2 < B'^2 at r = " << r;
    throw RepresentabilityError(os.str());
  };
  auto zprime = [&](double r) {
    const double s = slope2(r);
    if (s < -1e-14) fail(r);
    return std::sqrt(std::max(s, 0.0));
  };

  const int n = grid.node_count();
  const int nb = grid.boundary_count();
  EuclideanEmbedding out{grid, Matrix::Zero(n, 3), std::vector<Matrix>(n),
                         EmbeddingSource::Analytic, "revolution", 0.0};
  double z = 0.0;
  double prev_r = 0.0;
  for (int ir = 0; ir < grid.r_count(); ++ir) {
    const double r = grid.axis(0).node(ir);
    if (slope2(r) < -1e-14) fail(r);
    z += adaptive_simpson(zprime, prev_r, r, 1e-13);
    prev_r = r;
    const double b_val = eval(B, r);
    const double db_val = eval(dB, r);
    const double zp = zprime(r);
    for (int ib = 0; ib < nb; ++ib) {
      const int node = ir * nb + ib;
      const double th = w * grid.axis(1).node(ib);
      const double c = std::cos(th);
      const double s = std::sin(th);
      out.points.row(node) << b_val * c, b_val * s, z;
      Matrix J(3, 2);
      J << db_val * c, -w * b_val * s,
           db_val * s, w * b_val * c,
           zp, 0.0;
      out.jacobians[node] = J;
    }
  }
  return out;
}

namespace {

void expect(const std::string& name, std::span<const double> params,
            std::size_t count) {
  if (params.size() != count)
    throw ConfigError("analytic embedding '" + name + "' takes " +
                      std::to_string(count) + " parameters");
}

}  // namespace

EuclideanEmbedding analytic_embedding(const std::string& name,
                                      std::span<const double> params,
                                      const CollarGrid& grid) {
  if (name == "flat-cylinder") {
    expect(name, params, 2);
    EuclideanEmbedding v =
        revolution_embedding(grid, Expression::constant(params[1]),
                             Expression::constant(params[0]));
    v.name = "flat-cylinder";
    return v;
  }
  if (name == "flat-torus") {
    expect(name, params, 2);
    require_revolution_grid(grid);
    const double a = params[0];
    const double b = params[1];
    const double w = angular(grid.axis(1));
    const int n = grid.node_count();
    EuclideanEmbedding v{grid, Matrix::Zero(n, 4), std::vector<Matrix>(n),
                         EmbeddingSource::Analytic, "flat-torus", 0.0};
    for (int node = 0; node < n; ++node) {
      const SmallVector c = grid.coords(node);
      const double u = c(0) / a;
      const double th = w * c(1);
      v.points.row(node) << a * std::cos(u), a * std::sin(u),
          b * std::cos(th), b * std::sin(th);
      Matrix J(4, 2);
      J << -std::sin(u), 0.0,
           std::cos(u), 0.0,
           0.0, -w * b * std::sin(th),
           0.0, w * b * std::cos(th);
      v.jacobians[node] = J;
    }
    return v;
  }
  throw ConfigError("unknown analytic embedding '" + name + "'");
}

SymTensorField analytic_metric(const std::string& name,
                               std::span<const double> params,
                               const CollarGrid& grid) {
  require_revolution_grid(grid);
  const double w = angular(grid.axis(1));
  SmallMatrix G = SmallMatrix::Zero(2, 2);
  if (name == "flat-cylinder") {
    expect(name, params, 2);
    G(0, 0) = params[1] * params[1];
    G(1, 1) = params[0] * params[0] * w * w;
  } else if (name == "flat-torus") {
    expect(name, params, 2);
    G(0, 0) = 1.0;
    G(1, 1) = params[1] * params[1] * w * w;
  } else {
    throw ConfigError("unknown analytic embedding '" + name + "'");
  }
  return SymTensorField(Frame::Coordinate,
                        std::vector<SmallMatrix>(grid.node_count(), G));
}

bool is_rotationally_invariant(const CollarGrid& grid, const SymTensorField& G,
                               double tol) {
  if (grid.dim() != 2 || !grid.axis(1).periodic) return false;
  const int nb = grid.boundary_count();
  for (int ir = 0; ir < grid.r_count(); ++ir) {
    const SmallMatrix& ref = G[ir * nb];
    const double scale = ref.norm();
    for (int ib = 0; ib < nb; ++ib) {
      const SmallMatrix& g = G[ir * nb + ib];
      if ((g - ref).norm() > tol * scale) return false;
      if (std::abs(g(0, 1)) > tol * scale) return false;
    }
  }
  return true;
}

Matrix twisted_seed(const CollarGrid& grid, const SymTensorField& G, int N,
                    const std::vector<int>& frequencies) {
  require_revolution_grid(grid);
  if (N < 3) throw RepresentabilityError("twisted seed needs N >= 3");
  const int nr = grid.r_count();
  const int nb = grid.boundary_count();
  const double w = angular(grid.axis(1));
  const int modes = std::min(static_cast<int>(frequencies.size()), (N - 3) / 2);

  // Row averages: A^2 = G_rr, L = sqrt(G_bb) / w is the plain circle radius.
  std::vector<double> A(nr, 0.0), L(nr, 0.0);
  for (int ir = 0; ir < nr; ++ir) {
    for (int ib = 0; ib < nb; ++ib) {
      A[ir] += G[ir * nb + ib](0, 0);
      L[ir] += G[ir * nb + ib](1, 1);
    }
    A[ir] = std::sqrt(A[ir] / nb);
    L[ir] = std::sqrt(L[ir] / nb) / w;
  }
  const std::vector<double> dL = row_derivative(grid, L);

  double s = 0.0;
  for (int j = 0; j < modes; ++j)
    s += 1.0 / (double(frequencies[j]) * frequencies[j]);
  if (modes > 0) s /= modes;

  // Base circle share c1^2: a smooth minimum of 0.9 and half the room left
  // by the radial length A once the shrinking circles are paid for. c1 is
  // then replaced by its largest lower envelope with slope at most
  // 0.3 min(A / L), so varying the shares costs little radial length.
  constexpr double kMaxShare = 0.9;
  constexpr double kSlack = 0.5;
  std::vector<double> c1sq(nr, 1.0);
  if (modes > 0) {
    std::vector<double> c(nr);
    double slope = std::numeric_limits<double>::infinity();
    for (int ir = 0; ir < nr; ++ir) {
      double t = 1e6;
      if (dL[ir] != 0.0) {
        const double room = A[ir] * A[ir] / (dL[ir] * dL[ir]);
        t = std::max(kSlack * (room - s) / (1.0 - s), 1e-4);
      }
      c[ir] = std::sqrt(kMaxShare * t / (t + kMaxShare));
      slope = std::min(slope, 0.3 * A[ir] / L[ir]);
    }
    const double hr = grid.axis(0).spacing();
    for (int ir = 1; ir < nr; ++ir) c[ir] = std::min(c[ir], c[ir - 1] + slope * hr);
    for (int ir = nr - 2; ir >= 0; --ir)
      c[ir] = std::min(c[ir], c[ir + 1] + slope * hr);
    for (int ir = 0; ir < nr; ++ir) c1sq[ir] = c[ir] * c[ir];
  }

  // Radii per mode and row, then the height from the leftover length.
  std::vector<std::vector<double>> radius(modes + 1, std::vector<double>(nr));
  for (int ir = 0; ir < nr; ++ir) {
    radius[0][ir] = L[ir] * std::sqrt(c1sq[ir]);
    for (int j = 0; j < modes; ++j)
      radius[j + 1][ir] =
          L[ir] * std::sqrt((1.0 - c1sq[ir]) / modes) / frequencies[j];
  }
  std::vector<double> speed2(nr, 0.0);
  for (const auto& rad : radius) {
    const auto d = row_derivative(grid, rad);
    for (int ir = 0; ir < nr; ++ir) speed2[ir] += d[ir] * d[ir];
  }
  std::vector<double> Z(nr, 0.0);
  const double hr = grid.axis(0).spacing();
  auto zp = [&](int ir) {
    return std::sqrt(std::max(A[ir] * A[ir] - speed2[ir], 0.0));
  };
  for (int ir = 1; ir < nr; ++ir) Z[ir] = Z[ir - 1] + 0.5 * hr * (zp(ir - 1) + zp(ir));

  Matrix V = Matrix::Zero(grid.node_count(), N);
  for (int ir = 0; ir < nr; ++ir)
    for (int ib = 0; ib < nb; ++ib) {
      const int node = ir * nb + ib;
      const double th = w * grid.axis(1).node(ib);
      V(node, 0) = radius[0][ir] * std::cos(th);
      V(node, 1) = radius[0][ir] * std::sin(th);
      for (int j = 0; j < modes; ++j) {
        V(node, 2 + 2 * j) = radius[j + 1][ir] * std::cos(frequencies[j] * th);
        V(node, 3 + 2 * j) = radius[j + 1][ir] * std::sin(frequencies[j] * th);
      }
      V(node, 2 + 2 * modes) = Z[ir];
    }
  return V;
}

namespace {

using ColSparse = Eigen::SparseMatrix<double>;

struct Problem {
  const CollarGrid& grid;
  std::vector<SparseMatrix> D;
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> pair_weight;  // 1 on the diagonal, 2 off it
  Vector node_weight;
  int n = 0;
  int m = 0;
  int N = 0;

  Problem(const CollarGrid& g, int N_, const SymTensorField& G,
          const OptimizerConfig& cfg)
      : grid(g), n(g.node_count()), m(g.dim()), N(N_) {
    for (int d = 0; d < m; ++d) D.push_back(grid.derivative(d));
    for (int a = 0; a < m; ++a)
      for (int b = a; b < m; ++b) {
        pairs.emplace_back(a, b);
        pair_weight.push_back(a == b ? 1.0 : 2.0);
      }
    node_weight.resize(n);
    for (int i = 0; i < n; ++i)
      node_weight(i) = cfg.weights == NodeWeights::Uniform
                           ? 1.0
                           : 1.0 / G[i].squaredNorm();
    node_weight *= cfg.weight_scale / node_weight.mean();
  }

  std::vector<Matrix> jacobians(const Matrix& V) const {
    std::vector<Matrix> J;
    for (int d = 0; d < m; ++d) J.push_back(D[d] * V);
    return J;
  }

  // Residual vector sqrt(w c) (J_a . J_b - G_ab), pair-major.
  Vector residual(const std::vector<Matrix>& J,
                  const std::vector<SmallMatrix>& target) const {
    Vector r(static_cast<Eigen::Index>(pairs.size()) * n);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [a, b] = pairs[k];
      for (int i = 0; i < n; ++i)
        r(k * n + i) = std::sqrt(node_weight(i) * pair_weight[k]) *
                       (J[a].row(i).dot(J[b].row(i)) - target[i](a, b));
    }
    return r;
  }

  double max_relative(const std::vector<Matrix>& J,
                      const std::vector<SmallMatrix>& target) const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      double e2 = 0.0, g2 = 0.0;
      for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto [a, b] = pairs[k];
        const double e = J[a].row(i).dot(J[b].row(i)) - target[i](a, b);
        e2 += pair_weight[k] * e * e;
        g2 += pair_weight[k] * target[i](a, b) * target[i](a, b);
      }
      worst = std::max(worst, std::sqrt(e2 / g2));
    }
    return worst;
  }

  // d residual / d V, columns ordered p * n + j.
  ColSparse jacobian_of_residual(const std::vector<Matrix>& J) const {
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(pairs.size() * static_cast<std::size_t>(n) * N * 10);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [a, b] = pairs[k];
      for (int i = 0; i < n; ++i) {
        const int row = static_cast<int>(k) * n + i;
        const double s = std::sqrt(node_weight(i) * pair_weight[k]);
        for (int side = 0; side < 2; ++side) {
          const int dd = side == 0 ? b : a;
          const Matrix& Jo = side == 0 ? J[a] : J[b];
          for (SparseMatrix::InnerIterator it(D[dd], i); it; ++it)
            for (int p = 0; p < N; ++p)
              t.emplace_back(row, p * n + static_cast<int>(it.col()),
                             s * Jo(i, p) * it.value());
        }
      }
    }
    ColSparse A(static_cast<Eigen::Index>(pairs.size()) * n,
                static_cast<Eigen::Index>(n) * N);
    A.setFromTriplets(t.begin(), t.end());
    return A;
  }
};

std::vector<SmallMatrix> metric_of(const Problem& P, const Matrix& V) {
  const auto J = P.jacobians(V);
  std::vector<SmallMatrix> out(P.n, SmallMatrix::Zero(P.m, P.m));
  for (int i = 0; i < P.n; ++i)
    for (int a = 0; a < P.m; ++a)
      for (int b = 0; b < P.m; ++b) out[i](a, b) = J[a].row(i).dot(J[b].row(i));
  return out;
}

// Initial map: r linear in slot 0, every periodic boundary axis a circle
// pair with the row-averaged radius, bounded axes linear. Returns the
// number of slots used.
int linear_seed(const CollarGrid& grid, const SymTensorField& G, Matrix& V) {
  const int n = grid.node_count();
  const int nb = grid.boundary_count();
  double sr = 0.0;
  for (int i = 0; i < n; ++i) sr += std::sqrt(G[i](0, 0));
  sr /= n;
  int slot = 0;
  for (int i = 0; i < n; ++i) V(i, slot) = sr * grid.r(i);
  ++slot;
  for (int d = 1; d < grid.dim(); ++d) {
    const GridAxis& ax = grid.axis(d);
    const int need = ax.periodic ? 2 : 1;
    if (slot + need > V.cols())
      throw ConfigError("target dimension N too small for the initial map");
    std::vector<double> rowscale(grid.r_count(), 0.0);
    for (int i = 0; i < n; ++i) rowscale[i / nb] += std::sqrt(G[i](d, d));
    for (auto& v : rowscale) v /= nb;
    for (int i = 0; i < n; ++i) {
      const double b = grid.coords(i)(d);
      const double s = rowscale[i / nb];
      if (ax.periodic) {
        const double w = angular(ax);
        V(i, slot) = s / w * std::cos(w * (b - ax.lower));
        V(i, slot + 1) = s / w * std::sin(w * (b - ax.lower));
      } else {
        V(i, slot) = s * b;
      }
    }
    slot += need;
  }
  return slot;
}

void perturb(const CollarGrid& grid, const SymTensorField& G, int first_slot,
             double amplitude, std::uint64_t seed, Matrix& V) {
  const int n = grid.node_count();
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale += G[i].trace();
  scale = std::sqrt(scale / n);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const GridAxis& ax = grid.dim() > 1 ? grid.axis(1) : grid.axis(0);
  const double w = 2.0 * std::numbers::pi / (ax.upper - ax.lower);
  const double eps = grid.epsilon();
  for (int s = first_slot; s < V.cols(); ++s)
    for (int k = 1; k <= 3; ++k) {
      const double c0 = normal(rng) * amplitude * scale / k;
      const double c1 = normal(rng) * amplitude * scale / k;
      const double c2 = normal(rng);
      for (int i = 0; i < n; ++i) {
        const SmallVector c = grid.coords(i);
        const double th = grid.dim() > 1 ? w * (c(1) - ax.lower) : 0.0;
        V(i, s) += (c0 * std::cos(k * th) + c1 * std::sin(k * th)) *
                   (1.0 + c2 * c(0) / eps);
      }
    }
}

}  // namespace

OptimizeResult optimize_embedding(const CollarGrid& grid,
                                  const SymTensorField& G,
                                  const OptimizerConfig& cfg) {
  const int n = grid.node_count();
  const int m = grid.dim();
  if (static_cast<int>(G.size()) != n)
    throw GridMismatch("metric field does not match the grid");
  if (cfg.N < m) throw ConfigError("target dimension N must be at least m");
  if (!(cfg.stop_residual > 0.0)) throw ConfigError("stop residual must be positive");
  for (int i = 0; i < n; ++i)
    if (!(min_eigenvalue(G[i]) > 0.0)) {
      std::ostringstream os;
      os << "G is not positive-definite at collar node " << i << " ("
         << grid.coords(i).transpose() << ")";
      throw SingularMetric(os.str());
    }

  OptimizeResult result{
      EuclideanEmbedding{grid, Matrix(), {}, EmbeddingSource::Optimized, "", 0.0},
      {}, false, ""};
  Matrix V = Matrix::Zero(n, cfg.N);
  const bool twisted =
      cfg.init == OptimizerInit::Twisted ||
      (cfg.init == OptimizerInit::Auto && is_rotationally_invariant(grid, G));
  int used = 0;
  if (twisted) {
    V = twisted_seed(grid, G, cfg.N, cfg.twist_frequencies);
    const int modes = std::min(static_cast<int>(cfg.twist_frequencies.size()),
                               (cfg.N - 3) / 2);
    used = 3 + 2 * modes;
    result.init = "twisted";
  } else {
    used = linear_seed(grid, G, V);
    result.init = "linear";
  }
  perturb(grid, G, used, cfg.perturbation, cfg.seed, V);

  const Problem P(grid, cfg.N, G, cfg);
  const std::vector<SmallMatrix> G0 = metric_of(P, V);
  const int stages = twisted ? 1 : std::max(1, cfg.continuation_steps);

  int iter = 0;
  for (int stage = 1; stage <= stages; ++stage) {
    const double tt = double(stage) / stages;
    std::vector<SmallMatrix> target(n);
    for (int i = 0; i < n; ++i) target[i] = (1.0 - tt) * G0[i] + tt * G[i];
    const double tol =
        stage == stages ? cfg.polish_residual : cfg.intermediate_residual;

    while (iter < cfg.max_iters) {
      const auto J = P.jacobians(V);
      const Vector r = P.residual(J, target);
      const double F = 0.5 * r.squaredNorm();
      const double rel = P.max_relative(J, target);
      if (rel <= tol) break;
      ++iter;

      const ColSparse A = P.jacobian_of_residual(J);
      Vector delta;
      double slope = 0.0;
      if (cfg.method == OptimizerMethod::GaussNewton) {
        ColSparse AAt = A * ColSparse(A.transpose());
        double mean_diag = 0.0;
        for (Eigen::Index k = 0; k < AAt.rows(); ++k) mean_diag += AAt.coeff(k, k);
        mean_diag /= AAt.rows();
        const double mu = cfg.damping * rel * mean_diag;
        ColSparse I(AAt.rows(), AAt.cols());
        I.setIdentity();
        AAt += mu * I;
        Eigen::SimplicialLDLT<ColSparse> ldlt(AAt);
        if (ldlt.info() != Eigen::Success)
          throw NotConverged("normal equations could not be factored");
        const Vector y = ldlt.solve(r);
        delta = -(A.transpose() * y);
        slope = -r.dot((AAt - mu * I) * y);
      } else {
        delta = -(A.transpose() * r);
        slope = -delta.squaredNorm();
      }
      const Eigen::Map<const Matrix> D(delta.data(), n, cfg.N);

      double t = 1.0;
      Matrix trial;
      bool accepted = false;
      while (t >= cfg.min_step) {
        trial = V + t * D;
        const double Ft =
            0.5 * P.residual(P.jacobians(trial), target).squaredNorm();
        if (Ft <= F + cfg.armijo * t * slope) {
          accepted = true;
          break;
        }
        t *= 0.5;
      }
      if (!accepted) {
        result.trace.push_back({iter, rel, 0.0});
        break;
      }
      V = trial;
      result.trace.push_back({iter, P.max_relative(P.jacobians(V), target), t});
    }
    if (iter >= cfg.max_iters) break;
  }

  const auto J = P.jacobians(V);
  const double final_rel = P.max_relative(J, G.values());
  result.converged = final_rel <= cfg.stop_residual;
  result.embedding.points = V;
  result.embedding.jacobians.resize(n);
  for (int i = 0; i < n; ++i) {
    Matrix Ji(cfg.N, m);
    for (int d = 0; d < m; ++d) Ji.col(d) = J[d].row(i).transpose();
    result.embedding.jacobians[i] = Ji;
  }
  result.embedding.source = EmbeddingSource::Optimized;
  std::ostringstream name;
  name << (cfg.method == OptimizerMethod::GaussNewton ? "gauss-newton"
                                                      : "gradient")
       << " N=" << cfg.N << " init=" << result.init << " seed=" << cfg.seed;
  result.embedding.name = name.str();
  result.embedding.final_residual = final_rel;
  return result;
}

namespace {

std::vector<std::vector<int>> primitive_offsets(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> o(m, -2);
  while (true) {
    int g = 0;
    for (int v : o) g = std::gcd(g, std::abs(v));
    if (g == 1) out.push_back(o);
    int k = m - 1;
    while (k >= 0 && o[k] == 2) o[k--] = -2;
    if (k < 0) break;
    ++o[k];
  }
  return out;
}

}  // namespace

EmbeddingDiagnostics embedding_diagnostics(const EuclideanEmbedding& v,
                                           const SymTensorField& G,
                                           int sources) {
  const CollarGrid& grid = v.grid;
  const int n = grid.node_count();
  const int m = grid.dim();
  if (static_cast<int>(G.size()) != n || static_cast<int>(v.points.rows()) != n)
    throw GridMismatch("embedding and metric field use different grids");

  EmbeddingDiagnostics out;
  out.defect.resize(n);
  out.min_singular_value = std::numeric_limits<double>::infinity();
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Matrix& J = v.jacobians[i];
    const Matrix JtJ = J.transpose() * J;
    const Matrix Gi = G[i];
    out.defect[i] = (JtJ - Gi).norm() / Gi.norm();
    out.max_relative_defect = std::max(out.max_relative_defect, out.defect[i]);
    sum2 += out.defect[i] * out.defect[i];
    out.min_singular_value =
        std::min(out.min_singular_value, min_singular_value(J));
  }
  out.rms_relative_defect = std::sqrt(sum2 / n);

  const auto offsets = primitive_offsets(m);
  std::vector<double> spacing(m);
  for (int d = 0; d < m; ++d) spacing[d] = grid.axis(d).spacing();
  auto neighbour = [&](int node, const std::vector<int>& off, int& out_node) {
    auto mi = grid.multi_index(node);
    for (int d = 0; d < m; ++d) {
      const GridAxis& ax = grid.axis(d);
      int j = mi[d] + off[d];
      if (ax.periodic) {
        j = ((j % ax.count) + ax.count) % ax.count;
      } else if (j < 0 || j >= ax.count) {
        return false;
      }
      mi[d] = j;
    }
    out_node = grid.node_index(mi);
    return true;
  };

  const int count = std::min(sources, n);
  out.injectivity_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n);
  for (int s = 0; s < count; ++s) {
    const int src = static_cast<int>(static_cast<long long>(s) * n / count);
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[src] = 0.0;
    queue.emplace(0.0, src);
    while (!queue.empty()) {
      const auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u]) continue;
      for (const auto& off : offsets) {
        int w = 0;
        if (!neighbour(u, off, w)) continue;
        SmallVector step(m);
        for (int k = 0; k < m; ++k) step(k) = off[k] * spacing[k];
        const SmallMatrix Gm = 0.5 * (G[u] + G[w]);
        const double len = std::sqrt(std::max(step.dot(Gm * step), 0.0));
        if (d + len < dist[w]) {
          dist[w] = d + len;
          queue.emplace(dist[w], w);
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      if (j == src || !(dist[j] > 0.0) || !std::isfinite(dist[j])) continue;
      const double ext = (v.points.row(j) - v.points.row(src)).norm();
      out.injectivity_ratio = std::min(out.injectivity_ratio, ext / dist[j]);
    }
  }
  if (!std::isfinite(out.injectivity_ratio)) out.injectivity_ratio = 0.0;
  return out;
}

std::string embedding_csv(const EuclideanEmbedding& v) {
  std::ostringstream os;
  os << std::setprecision(17) << 'r';
  for (int k = 1; k < v.grid.dim(); ++k) os << ",y" << k;
  for (int p = 0; p < v.ambient_dim(); ++p) os << ",v" << p + 1;
  os << '\n';
  for (int i = 0; i < v.grid.node_count(); ++i) {
    const SmallVector c = v.grid.coords(i);
    for (int k = 0; k < c.size(); ++k) os << (k ? "," : "") << c(k);
    for (int p = 0; p < v.ambient_dim(); ++p) os << ',' << v.points(i, p);
    os << '\n';
  }
  return os.str();
}

std::string trace_csv(const std::vector<TraceEntry>& trace) {
  std::ostringstream os;
  os << std::setprecision(17) << "iter,residual,step\n";
  for (const auto& e : trace)
    os << e.iter << ',' << e.residual << ',' << e.step << '\n';
  return os.str();
}

}  // namespace ccembed
