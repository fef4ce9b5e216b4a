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

#include "ccembed/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ccembed/errors.hpp"

namespace ccembed {

ModelManifold ModelManifold::disk(int dim) {
  if (dim < 2 || dim > 3)
    throw ConfigError("disk dimension must be 2 or 3, got " +
                      std::to_string(dim));
  ModelManifold m;
  m.kind_ = ManifoldKind::Disk;
  m.dim_ = dim;
  return m;
}

ModelManifold ModelManifold::collar_torus(int dim, double r_max,
                                          std::vector<double> periods,
                                          BoundaryEnds ends) {
  if (dim < 2 || dim > 3)
    throw ConfigError("collar torus dimension must be 2 or 3, got " +
                      std::to_string(dim));
  if (!(r_max > 0.0)) throw ConfigError("collar torus needs r_max > 0");
  if (periods.size() == 1 && dim == 3) periods.push_back(periods.front());
  if (static_cast<int>(periods.size()) != dim - 1)
    throw ConfigError("collar torus needs " + std::to_string(dim - 1) +
                      " periods");
  for (double p : periods)
    if (!(p > 0.0)) throw ConfigError("torus periods must be positive");
  ModelManifold m;
  m.kind_ = ManifoldKind::CollarTorus;
  m.dim_ = dim;
  m.r_max_ = r_max;
  m.periods_ = std::move(periods);
  m.ends_ = ends;
  return m;
}

int ModelManifold::boundary_count() const {
  if (kind_ == ManifoldKind::Disk) return 1;
  return ends_ == BoundaryEnds::Both ? 2 : 1;
}

std::vector<std::string> ModelManifold::coordinate_names() const {
  std::vector<std::string> names;
  if (kind_ == ManifoldKind::Disk) {
    for (int i = 1; i <= dim_; ++i) names.push_back("y" + std::to_string(i));
  } else {
    names.push_back("r");
    for (int i = 1; i < dim_; ++i) names.push_back("y" + std::to_string(i));
  }
  return names;
}

std::vector<BoundaryAxis> ModelManifold::boundary_axes() const {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  if (kind_ == ManifoldKind::Disk) {
    if (dim_ == 2) return {{0.0, two_pi, true}};
    return {{0.0, std::numbers::pi, false}, {0.0, two_pi, true}};
  }
  std::vector<BoundaryAxis> axes;
  for (double p : periods_) axes.push_back({0.0, p, true});
  return axes;
}

SmallVector ModelManifold::boundary_point(int end,
                                          std::span<const double> b) const {
  SmallVector p(dim_);
  if (kind_ == ManifoldKind::Disk) {
    if (dim_ == 2) {
      p << std::cos(b[0]), std::sin(b[0]);
    } else {
      p << std::sin(b[0]) * std::cos(b[1]), std::sin(b[0]) * std::sin(b[1]),
          std::cos(b[0]);
    }
    return p;
  }
  p(0) = end == 0 ? 0.0 : r_max_;
  for (int i = 1; i < dim_; ++i) p(i) = b[i - 1];
  return p;
}

SmallMatrix ModelManifold::boundary_tangents(int end,
                                             std::span<const double> b) const {
  (void)end;
  SmallMatrix t = SmallMatrix::Zero(dim_, dim_ - 1);
  if (kind_ == ManifoldKind::Disk) {
    if (dim_ == 2) {
      t(0, 0) = -std::sin(b[0]);
      t(1, 0) = std::cos(b[0]);
    } else {
      t.col(0) << std::cos(b[0]) * std::cos(b[1]),
          std::cos(b[0]) * std::sin(b[1]), -std::sin(b[0]);
      t.col(1) << -std::sin(b[0]) * std::sin(b[1]),
          std::sin(b[0]) * std::cos(b[1]), 0.0;
    }
    return t;
  }
  for (int i = 1; i < dim_; ++i) t(i, i - 1) = 1.0;
  return t;
}

bool ModelManifold::in_chart(std::span<const double> p) const {
  constexpr double slack = 1e-9;
  if (kind_ == ManifoldKind::Disk) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += p[i] * p[i];
    return s <= 1.0 + slack;
  }
  return p[0] >= -slack && p[0] <= r_max_ + slack;
}

std::string ModelManifold::describe() const {
  std::ostringstream os;
  if (kind_ == ManifoldKind::Disk) {
    os << "Disk(" << dim_ << ")";
  } else {
    os << "CollarTorus(" << dim_ << ", r_max=" << r_max_ << ", ends="
       << (ends_ == BoundaryEnds::Both ? "both" : "inner") << ")";
  }
  return os.str();
}

}  // namespace ccembed
