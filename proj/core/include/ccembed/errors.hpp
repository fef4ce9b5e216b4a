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

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccembed {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error("syntax error at offset " + std::to_string(position) + ": " +
              what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t position, const std::string& name)
      : Error("unknown identifier '" + name + "' at offset " +
              std::to_string(position)),
        position_(position),
        name_(name) {}
  std::size_t position() const { return position_; }
  const std::string& name() const { return name_; }

 private:
  std::size_t position_;
  std::string name_;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteValue : public Error {
 public:
  using Error::Error;
};

class SingularMetric : public Error {
 public:
  using Error::Error;
};

class NotABoundaryDefiningFunction : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DegeneratePlane : public Error {
 public:
  using Error::Error;
};

class RepresentabilityError : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class FlowError : public Error {
 public:
  enum class Kind { ExitsChart, DegenerateK2, Orthogonality };
  FlowError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

/// Raised when the sectional curvature at infinity does not satisfy the
/// strict bound required by the collar construction. Carries the offending
/// boundary node.
class HypothesisViolation : public Error {
 public:
  HypothesisViolation(std::vector<double> node, double k2,
                      const std::string& what)
      : Error(what), node_(std::move(node)), k2_(k2) {}
  const std::vector<double>& node() const { return node_; }
  /// |dr|^2 of the compactified metric at the node (equals -kappa_inf there).
  double k2() const { return k2_; }

 private:
  std::vector<double> node_;
  double k2_;
};

}  // namespace ccembed
