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

#include "ccembed/metric.hpp"

#include <cmath>
#include <sstream>

#include "ccembed/errors.hpp"

namespace ccembed {

SymTensorField::SymTensorField(Frame frame, std::vector<SmallMatrix> values)
    : frame_(frame), values_(std::move(values)) {}

SymTensorField SymTensorField::operator-(const SymTensorField& other) const {
  if (frame_ != other.frame_)
    throw DimensionMismatch("cannot subtract tensor fields in different frames");
  if (values_.size() != other.values_.size())
    throw DimensionMismatch("tensor field sizes differ");
  std::vector<SmallMatrix> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i)
    out[i] = values_[i] - other.values_[i];
  return {frame_, std::move(out)};
}

SymTensorField SymTensorField::operator+(const SymTensorField& other) const {
  if (frame_ != other.frame_)
    throw DimensionMismatch("cannot add tensor fields in different frames");
  if (values_.size() != other.values_.size())
    throw DimensionMismatch("tensor field sizes differ");
  std::vector<SmallMatrix> out(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i)
    out[i] = values_[i] + other.values_[i];
  return {frame_, std::move(out)};
}

MetricSpec::MetricSpec(ModelManifold manifold,
                       std::vector<std::vector<Expression>> g,
                       Expression reference_bdf, std::string name)
    : manifold_(std::move(manifold)),
      name_(std::move(name)),
      names_(manifold_.coordinate_names()),
      bdf_(std::move(reference_bdf)) {
  const int m = manifold_.dim();
  if (static_cast<int>(g.size()) != m)
    throw DimensionMismatch("metric needs " + std::to_string(m) + " rows");
  upper_.resize(m * (m + 1) / 2);
  for (int i = 0; i < m; ++i) {
    const auto& row = g[i];
    const bool full = static_cast<int>(row.size()) == m;
    if (!full && static_cast<int>(row.size()) != m - i)
      throw DimensionMismatch("metric row " + std::to_string(i + 1) +
                              " has the wrong number of entries");
    for (int j = i; j < m; ++j) upper_[entry(i, j)] = full ? row[j] : row[j - i];
  }
  for (const auto& e : upper_)
    if (static_cast<int>(e.variable_extent()) > m)
      throw DimensionMismatch("metric component uses an unknown variable");

  dupper_.resize(m);
  dbdf_.resize(m);
  ddbdf_.assign(m, std::vector<Expression>(m));
  for (int k = 0; k < m; ++k) {
    for (const auto& e : upper_) dupper_[k].push_back(e.derivative(k));
    dbdf_[k] = bdf_.derivative(k);
  }
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l) ddbdf_[k][l] = dbdf_[k].derivative(l);
  ddupper_.resize(m * m);
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      for (const auto& e : dupper_[k]) ddupper_[k * m + l].push_back(e.derivative(l));
}

MetricSpec MetricSpec::parse(ModelManifold manifold,
                             const std::vector<std::vector<std::string>>& g,
                             const std::string& reference_bdf,
                             std::string name) {
  const auto names = manifold.coordinate_names();
  std::vector<std::vector<Expression>> exprs;
  for (const auto& row : g) {
    auto& out = exprs.emplace_back();
    for (const auto& s : row) out.push_back(parse_expression(s, names));
  }
  return MetricSpec(std::move(manifold), std::move(exprs),
                    parse_expression(reference_bdf, names), std::move(name));
}

int MetricSpec::entry(int i, int j) const {
  if (i > j) std::swap(i, j);
  const int m = manifold_.dim();
  return i * m - i * (i - 1) / 2 + (j - i);
}

const Expression& MetricSpec::component(int i, int j) const {
  return upper_[entry(i, j)];
}

SmallMatrix MetricSpec::compactified(std::span<const double> p) const {
  const int m = dim();
  SmallMatrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) g(i, j) = g(j, i) = upper_[entry(i, j)].evaluate(p);
  return g;
}

SmallMatrix MetricSpec::compactified_derivative(std::span<const double> p,
                                                int k) const {
  const int m = dim();
  SmallMatrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j)
      g(i, j) = g(j, i) = dupper_[k][entry(i, j)].evaluate(p);
  return g;
}

SmallMatrix MetricSpec::compactified_second_derivative(
    std::span<const double> p, int k, int l) const {
  const int m = dim();
  const auto& d = ddupper_[k * m + l];
  SmallMatrix g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = i; j < m; ++j) g(i, j) = g(j, i) = d[entry(i, j)].evaluate(p);
  return g;
}

double MetricSpec::bdf(std::span<const double> p) const {
  return bdf_.evaluate(p);
}

SmallVector MetricSpec::bdf_gradient(std::span<const double> p) const {
  SmallVector d(dim());
  for (int k = 0; k < dim(); ++k) d(k) = dbdf_[k].evaluate(p);
  return d;
}

SmallMatrix MetricSpec::bdf_hessian(std::span<const double> p) const {
  SmallMatrix h(dim(), dim());
  for (int k = 0; k < dim(); ++k)
    for (int l = 0; l < dim(); ++l) h(k, l) = ddbdf_[k][l].evaluate(p);
  return h;
}

MetricSpec MetricSpec::rescaled(double lambda) const {
  if (lambda == 0.0) throw ConfigError("rescaling factor lambda must be nonzero");
  const Expression l2 = Expression::constant(lambda * lambda);
  std::vector<std::vector<Expression>> g(dim());
  for (int i = 0; i < dim(); ++i)
    for (int j = i; j < dim(); ++j) g[i].push_back(l2 * component(i, j));
  std::ostringstream os;
  os << name_ << "*lambda^2[" << lambda << "]";
  return MetricSpec(manifold_, std::move(g), bdf_, os.str());
}

void MetricSpec::validate(std::span<const SmallVector> interior_nodes,
                          std::span<const SmallVector> boundary_nodes) const {
  auto check_pd = [&](const SmallVector& p) {
    const std::span<const double> s(p.data(), p.size());
    const SmallMatrix g = compactified(s);
    if (!g.allFinite())
      throw NonFiniteValue("compactified metric is not finite");
    if (min_eigenvalue(g) <= 0.0) {
      std::ostringstream os;
      os << "compactified metric is not positive-definite at ("
         << p.transpose() << ")";
      throw SingularMetric(os.str());
    }
  };
  for (const auto& p : interior_nodes) check_pd(p);
  for (const auto& p : boundary_nodes) {
    check_pd(p);
    const std::span<const double> s(p.data(), p.size());
    const double r = bdf(s);
    const SmallVector dr = bdf_gradient(s);
    std::ostringstream os;
    os << "(" << p.transpose() << ")";
    if (std::abs(r) > 1e-10)
      throw NotABoundaryDefiningFunction(
          "reference bdf does not vanish at boundary node " + os.str());
    if (dr.norm() < 1e-12)
      throw NotABoundaryDefiningFunction(
          "reference bdf has zero differential at boundary node " + os.str());
  }
}

SymTensor eval_metric(const MetricSpec& spec, std::span<const double> node) {
  SmallMatrix g = spec.compactified(node);
  if (!g.allFinite()) throw NonFiniteValue("metric evaluation is not finite");
  return {std::move(g), Frame::ZeroFrame};
}

SymTensor eval_metric_coordinate(const MetricSpec& spec,
                                 std::span<const double> node) {
  const double r = spec.bdf(node);
  SmallMatrix g = spec.compactified(node) / (r * r);
  if (!g.allFinite())
    throw NonFiniteValue("coordinate metric is not finite (boundary node?)");
  return {std::move(g), Frame::Coordinate};
}

namespace {

SmallVector gradient_of(const Expression& f, int m,
                        std::span<const double> node) {
  SmallVector df(m);
  for (int k = 0; k < m; ++k) df(k) = f.derivative(k).evaluate(node);
  return df;
}

SmallMatrix inverse_metric(const MetricSpec& spec,
                           std::span<const double> node) {
  const SmallMatrix g = spec.compactified(node);
  Eigen::LDLT<SmallMatrix> ldlt(g);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
      std::abs(g.determinant()) < 1e-300)
    throw SingularMetric("compactified metric is singular at node");
  return ldlt.solve(SmallMatrix::Identity(g.rows(), g.cols()));
}

}  // namespace

double zero_norm_of_differential(const MetricSpec& spec, const SmallVector& df,
                                 std::span<const double> node) {
  const SmallMatrix ginv = inverse_metric(spec, node);
  return df.dot(ginv * df);
}

double zero_norm_of_differential(const MetricSpec& spec, const Expression& f,
                                 std::span<const double> node) {
  return zero_norm_of_differential(spec, gradient_of(f, spec.dim(), node),
                                   node);
}

ZeroOneForm zero_log_differential(const MetricSpec& spec, const Expression& f,
                                  std::span<const double> node) {
  const SmallVector df = gradient_of(f, spec.dim(), node);
  const double fv = f.evaluate(node);
  const double r = spec.bdf(node);
  double ratio = 0.0;
  if (r == 0.0 || fv == 0.0) {
    const SmallMatrix ginv = inverse_metric(spec, node);
    const SmallVector dr = spec.bdf_gradient(node);
    const double cross = df.dot(ginv * dr);
    if (cross == 0.0)
      throw NotABoundaryDefiningFunction(
          "function is not a boundary defining function at node");
    ratio = dr.dot(ginv * dr) / cross;
  } else {
    ratio = r / fv;
  }
  return {ratio * df};
}

}  // namespace ccembed
