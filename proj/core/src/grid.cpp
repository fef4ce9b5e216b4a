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


#include "ccembed/grid.hpp"

#include <array>
#include <cmath>

#include "ccembed/errors.hpp"

namespace ccembed {

double GridAxis::spacing() const {
  return periodic ? (upper - lower) / count : (upper - lower) / (count - 1);
}

double GridAxis::node(int i) const {
  if (!periodic && i == count - 1) return upper;
  return lower + i * spacing();
}

CollarGrid::CollarGrid(double eps, int r_count, std::vector<GridAxis> boundary)
    : r_axis_{0.0, eps, r_count, false}, boundary_(std::move(boundary)) {
  if (!(eps > 0.0)) throw ConfigError("collar depth must be positive");
  if (r_count < 8) throw ConfigError("grid needs at least 8 nodes in r");
  for (const auto& a : boundary_) {
    if (a.count < 8)
      throw ConfigError("grid needs at least 8 nodes per boundary direction");
    if (!(a.upper > a.lower)) throw ConfigError("empty boundary axis");
    boundary_count_ *= a.count;
  }
}

CollarGrid CollarGrid::for_manifold(const ModelManifold& manifold, double eps,
                                    int r_count, int boundary_count) {
  std::vector<GridAxis> axes;
  for (const auto& a : manifold.boundary_axes())
    axes.push_back({a.lower, a.upper, boundary_count, a.periodic});
  return CollarGrid(eps, r_count, std::move(axes));
}

std::vector<int> CollarGrid::multi_index(int node) const {
  std::vector<int> out(dim());
  int rest = node;
  for (int d = dim() - 1; d >= 0; --d) {
    const int n = axis(d).count;
    out[d] = rest % n;
    rest /= n;
  }
  return out;
}

int CollarGrid::node_index(std::span<const int> multi) const {
  int idx = 0;
  for (int d = 0; d < dim(); ++d) idx = idx * axis(d).count + multi[d];
  return idx;
}

SmallVector CollarGrid::boundary_coords(int node) const {
  const auto mi = multi_index(node);
  SmallVector b(dim() - 1);
  for (int d = 1; d < dim(); ++d) b(d - 1) = axis(d).node(mi[d]);
  return b;
}

SmallVector CollarGrid::coords(int node) const {
  const auto mi = multi_index(node);
  SmallVector c(dim());
  for (int d = 0; d < dim(); ++d) c(d) = axis(d).node(mi[d]);
  return c;
}

SparseMatrix CollarGrid::derivative(int d) const {
  const GridAxis& a = axis(d);
  const int n = a.count;
  const double h12 = 12.0 * a.spacing();
  static constexpr std::array<double, 5> central = {1, -8, 0, 8, -1};
  static constexpr std::array<double, 5> edge0 = {-25, 48, -36, 16, -3};
  static constexpr std::array<double, 5> edge1 = {-3, -10, 18, -6, 1};

  // Stencil (first column offset, weights) for position i along the axis.
  auto stencil = [&](int i, int& first, std::array<double, 5>& w) {
    if (a.periodic || (i >= 2 && i <= n - 3)) {
      first = i - 2;
      w = central;
    } else if (i == 0) {
      first = 0;
      w = edge0;
    } else if (i == 1) {
      first = 0;
      w = edge1;
    } else {
      first = n - 5;
      const auto& src = i == n - 1 ? edge0 : edge1;
      for (int k = 0; k < 5; ++k) w[k] = -src[4 - k];
    }
  };

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(node_count()) * 5);
  for (int node = 0; node < node_count(); ++node) {
    auto mi = multi_index(node);
    const int i = mi[d];
    int first = 0;
    std::array<double, 5> w{};
    stencil(i, first, w);
    for (int k = 0; k < 5; ++k) {
      if (w[k] == 0.0) continue;
      int j = first + k;
      if (a.periodic) j = ((j % n) + n) % n;
      mi[d] = j;
      triplets.emplace_back(node, node_index(mi), w[k] / h12);
    }
  }
  SparseMatrix D(node_count(), node_count());
  D.setFromTriplets(triplets.begin(), triplets.end());
  return D;
}

bool CollarGrid::same_nodes(const CollarGrid& other) const {
  if (dim() != other.dim()) return false;
  for (int d = 0; d < dim(); ++d) {
    const GridAxis& a = axis(d);
    const GridAxis& b = other.axis(d);
    if (a.count != b.count || a.periodic != b.periodic || a.lower != b.lower ||
        a.upper != b.upper)
      return false;
  }
  return true;
}

}  // namespace ccembed
