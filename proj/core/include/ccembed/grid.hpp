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

#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "ccembed/linalg.hpp"
#include "ccembed/manifold.hpp"

namespace ccembed {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// One grid direction: uniform nodes on [lower, upper] (endpoint included)
/// or, when periodic, on [lower, lower + period).
struct GridAxis {
  double lower = 0.0;
  double upper = 1.0;
  int count = 8;
  bool periodic = false;

  double spacing() const;
  double node(int i) const;
};

/// Tensor grid over the collar [0, eps] x (boundary chart). Node index is
/// row-major with r slowest: index = ir * boundary_count() + ib.
class CollarGrid {
 public:
  /// Throws ConfigError for eps <= 0 or fewer than 8 nodes per direction.
  CollarGrid(double eps, int r_count, std::vector<GridAxis> boundary);

  /// Collar grid whose boundary axes follow the manifold's boundary chart.
  static CollarGrid for_manifold(const ModelManifold& manifold, double eps,
                                 int r_count, int boundary_count);

  double epsilon() const { return r_axis_.upper; }
  int dim() const { return 1 + static_cast<int>(boundary_.size()); }
  const GridAxis& axis(int d) const { return d == 0 ? r_axis_ : boundary_[d - 1]; }

  int r_count() const { return r_axis_.count; }
  int boundary_count() const { return boundary_count_; }
  int node_count() const { return r_axis_.count * boundary_count_; }

  double r(int node) const { return r_axis_.node(node / boundary_count_); }
  /// Boundary chart coordinates of a node.
  SmallVector boundary_coords(int node) const;
  /// (r, b) collar coordinates of a node.
  SmallVector coords(int node) const;

  /// Multi-index along each direction.
  std::vector<int> multi_index(int node) const;
  int node_index(std::span<const int> multi) const;

  /// Fourth-order first-derivative operator along direction d, acting on
  /// node-ordered values. Periodic axes use the central stencil with wrap,
  /// bounded axes switch to one-sided stencils in the first and last two
  /// rows.
  SparseMatrix derivative(int d) const;

  bool same_nodes(const CollarGrid& other) const;

 private:
  GridAxis r_axis_;
  std::vector<GridAxis> boundary_;
  int boundary_count_ = 1;
};

}  // namespace ccembed
