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
#include <string>
#include <vector>

#include "ccembed/linalg.hpp"

namespace ccembed {

enum class ManifoldKind { Disk, CollarTorus };

/// Which ends of a collar torus [0, r_max] x T^{m-1} are at infinity.
enum class BoundaryEnds { Inner, Both };

/// One coordinate direction of the boundary chart.
struct BoundaryAxis {
  double lower = 0.0;
  double upper = 0.0;
  bool periodic = true;
};

/// The two model manifolds with boundary used throughout.
///
/// Disk(m): the closed unit ball, chart coordinates y1..ym. The boundary
/// chart is the angle on S^1 (m = 2) or polar/azimuth angles on S^2
/// (m = 3).
///
/// CollarTorus(m): [0, r_max] x T^{m-1}, chart coordinates (r, y1, ...).
/// The boundary chart at either end is the torus coordinates y.
class ModelManifold {
 public:
  static ModelManifold disk(int dim);
  static ModelManifold collar_torus(int dim, double r_max,
                                    std::vector<double> periods,
                                    BoundaryEnds ends = BoundaryEnds::Inner);

  ManifoldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double r_max() const { return r_max_; }
  const std::vector<double>& periods() const { return periods_; }
  BoundaryEnds ends() const { return ends_; }

  /// Number of boundary components at infinity (1 or 2).
  int boundary_count() const;

  std::vector<std::string> coordinate_names() const;
  std::vector<BoundaryAxis> boundary_axes() const;

  /// Chart point of the boundary node with boundary coordinates `b` on the
  /// given end (0 is r = 0 / the sphere, 1 is r = r_max).
  SmallVector boundary_point(int end, std::span<const double> b) const;
  /// Columns are the chart images of d/db^k at that boundary node.
  SmallMatrix boundary_tangents(int end, std::span<const double> b) const;

  /// True if `p` lies in the closed chart domain (with a small slack).
  bool in_chart(std::span<const double> p) const;

  std::string describe() const;

 private:
  ModelManifold() = default;
  ManifoldKind kind_ = ManifoldKind::Disk;
  int dim_ = 2;
  double r_max_ = 1.0;
  std::vector<double> periods_;
  BoundaryEnds ends_ = BoundaryEnds::Inner;
};

}  // namespace ccembed
