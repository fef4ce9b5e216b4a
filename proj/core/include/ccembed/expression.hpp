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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ccembed/errors.hpp"

namespace ccembed {

/// Closed-form scalar expression over a fixed list of coordinate variables.
///
/// Grammar (whitespace is ignored between tokens):
///
///     expr    = term { ("+" | "-") term } ;
///     term    = factor { ("*" | "/") factor } ;
///     factor  = "-" factor | power ;
///     power   = primary [ "^" factor ] ;            (right associative)
///     primary = number | "pi" | variable
///             | func "(" expr ")" | "(" expr ")" ;
///     func    = "sin" | "cos" | "exp" | "log" | "sqrt" ;
///     number  = digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ] ;
///
/// Variables are resolved against the name list handed to parse(); each
/// variable node stores the index into that list, so evaluation takes a
/// plain array of values in the same order.
///
/// Nodes are immutable and shared, so copies are cheap.
class Expression {
 public:
  enum class Op {
    Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt
  };

  Expression();  // the constant 0

  static Expression constant(double value);
  static Expression variable(std::size_t index, std::string name);

  Op op() const;
  bool is_constant() const { return op() == Op::Const; }
  /// Only meaningful for Op::Const.
  double constant_value() const;
  /// Only meaningful for Op::Var.
  std::size_t variable_index() const;
  const std::string& variable_name() const;
  std::size_t arity() const;
  Expression child(std::size_t i) const;

  double evaluate(std::span<const double> values) const;

  /// Exact symbolic derivative with respect to variable `index`. The result
  /// is lightly simplified (constant folding, 0/1 identities).
  Expression derivative(std::size_t index) const;

  /// Prints with minimal parentheses; the output parses back to an
  /// expression with identical evaluation.
  std::string to_string() const;

  /// Largest variable index referenced plus one (0 for closed constants).
  std::size_t variable_extent() const;

  friend Expression operator+(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a, const Expression& b);
  friend Expression operator*(const Expression& a, const Expression& b);
  friend Expression operator/(const Expression& a, const Expression& b);
  friend Expression operator-(const Expression& a);
  friend Expression pow(const Expression& base, const Expression& exponent);
  friend Expression sin(const Expression& a);
  friend Expression cos(const Expression& a);
  friend Expression exp(const Expression& a);
  friend Expression log(const Expression& a);
  friend Expression sqrt(const Expression& a);

 private:
  struct Node;
  explicit Expression(std::shared_ptr<const Node> node);
  static Expression make(Op op, std::vector<Expression> children);

  std::shared_ptr<const Node> node_;
};

/// Parses `source` against the given variable names. Throws ParseError on
/// malformed input (with the byte offset of the failure) and
/// UnknownIdentifier for names that are neither variables nor built-ins.
Expression parse_expression(std::string_view source,
                            std::span<const std::string> variables);

}  // namespace ccembed
