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

#include "ccembed/expression.hpp"
#include "ccembed/linalg.hpp"
#include "ccembed/manifold.hpp"

namespace ccembed {

/// Frame of a sampled symmetric 2-tensor. ZeroFrame components are taken
/// with respect to {r d_r, r d_y}; numerically they equal the coordinate
/// components of the compactified metric r^2 g.
enum class Frame { Coordinate, ZeroFrame };

struct SymTensor {
  SmallMatrix value;
  Frame frame = Frame::ZeroFrame;
};

/// Per-node symmetric tensors sharing one frame tag.
class SymTensorField {
 public:
  SymTensorField() = default;
  SymTensorField(Frame frame, std::vector<SmallMatrix> values);

  Frame frame() const { return frame_; }
  std::size_t size() const { return values_.size(); }
  const SmallMatrix& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<SmallMatrix>& values() const { return values_; }

  /// Throws DimensionMismatch when the frames or sizes differ.
  SymTensorField operator-(const SymTensorField& other) const;
  SymTensorField operator+(const SymTensorField& other) const;

 private:
  Frame frame_ = Frame::ZeroFrame;
  std::vector<SmallMatrix> values_;
};

/// A 0-1-form: components in the coframe {dr/r, dy/r}, i.e. r times the
/// coordinate components.
struct ZeroOneForm {
  SmallVector components;
};

/// Closed-form compactified metric gbar = r^2 g on a model chart, together
/// with the auxiliary boundary defining function r.
///
/// The symmetric component array is stored as the upper triangle. First
/// and second derivatives of the components and of the reference bdf are
/// differentiated symbolically once, at construction.
class MetricSpec {
 public:
  MetricSpec(ModelManifold manifold, std::vector<std::vector<Expression>> g,
             Expression reference_bdf, std::string name = "custom");

  /// Parses every entry against the manifold's coordinate names. `g` may be
  /// given as a full matrix or as its upper triangle (ragged rows).
  static MetricSpec parse(ModelManifold manifold,
                          const std::vector<std::vector<std::string>>& g,
                          const std::string& reference_bdf,
                          std::string name = "custom");

  const ModelManifold& manifold() const { return manifold_; }
  int dim() const { return manifold_.dim(); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& coordinate_names() const { return names_; }

  const Expression& component(int i, int j) const;
  const Expression& reference_bdf() const { return bdf_; }

  /// gbar at a chart point (r = 0 allowed).
  SmallMatrix compactified(std::span<const double> p) const;
  /// d gbar / d x^k.
  SmallMatrix compactified_derivative(std::span<const double> p, int k) const;
  /// d^2 gbar / d x^k d x^l.
  SmallMatrix compactified_second_derivative(std::span<const double> p, int k,
                                             int l) const;

  double bdf(std::span<const double> p) const;
  SmallVector bdf_gradient(std::span<const double> p) const;
  SmallMatrix bdf_hessian(std::span<const double> p) const;

  /// The spec for lambda^2 g (components multiplied by lambda^2, same r).
  MetricSpec rescaled(double lambda) const;

  /// Checks symmetry and positive-definiteness of gbar and that the
  /// reference bdf vanishes with nonzero differential at the given boundary
  /// nodes. Throws SingularMetric / NotABoundaryDefiningFunction.
  void validate(std::span<const SmallVector> interior_nodes,
                std::span<const SmallVector> boundary_nodes) const;

 private:
  ModelManifold manifold_;
  std::string name_;
  std::vector<std::string> names_;
  std::vector<Expression> upper_;                // m(m+1)/2 entries
  std::vector<std::vector<Expression>> dupper_;  // [k][entry]
  std::vector<std::vector<Expression>> ddupper_;  // [k * m + l][entry]
  Expression bdf_;
  std::vector<Expression> dbdf_;
  std::vector<std::vector<Expression>> ddbdf_;

  int entry(int i, int j) const;
};

/// gbar at `node` tagged ZeroFrame. Throws NonFiniteValue.
SymTensor eval_metric(const MetricSpec& spec, std::span<const double> node);

/// Coordinate components of g = gbar / r^2 at an interior node (r > 0).
SymTensor eval_metric_coordinate(const MetricSpec& spec,
                                 std::span<const double> node);

/// gbar^{mu nu} d_mu f d_nu f. Throws SingularMetric.
double zero_norm_of_differential(const MetricSpec& spec, const Expression& f,
                                 std::span<const double> node);
double zero_norm_of_differential(const MetricSpec& spec,
                                 const SmallVector& df,
                                 std::span<const double> node);

/// df/f as a 0-1-form, i.e. (r/f) df. At boundary nodes (f = r = 0) the
/// ratio r/f is replaced by its limit |dr|^2 / <df, dr>.
ZeroOneForm zero_log_differential(const MetricSpec& spec, const Expression& f,
                                  std::span<const double> node);

}  // namespace ccembed
