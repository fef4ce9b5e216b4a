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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ccembed/errors.hpp"
#include "ccembed/expression.hpp"

namespace ccembed {
namespace {

const std::vector<std::string> kNames = {"r", "y1", "y2"};

double eval(const std::string& src, std::vector<double> at) {
  return parse_expression(src, kNames).evaluate(at);
}

TEST(Expression, EvaluatesArithmeticWithPrecedence) {
  EXPECT_DOUBLE_EQ(eval("1 + 2*3", {}), 7.0);
  EXPECT_DOUBLE_EQ(eval("(1 + 2)*3", {}), 9.0);
  EXPECT_DOUBLE_EQ(eval("2^3^2", {}), 512.0);
  EXPECT_DOUBLE_EQ(eval("-2^2", {}), -4.0);
  EXPECT_DOUBLE_EQ(eval("1e-2 * 3.5E1", {}), 0.35);
  EXPECT_DOUBLE_EQ(eval("8 / 4 / 2", {}), 1.0);
}

TEST(Expression, VariablesAndFunctions) {
  const std::vector<double> p = {0.3, -1.2, 2.0};
  EXPECT_DOUBLE_EQ(eval("r*y1 + y2", p), 0.3 * -1.2 + 2.0);
  EXPECT_NEAR(eval("sin(y1)^2 + cos(y1)^2", p), 1.0, 1e-15);
  EXPECT_NEAR(eval("exp(log(y2))", p), 2.0, 1e-15);
  EXPECT_NEAR(eval("sqrt(y2) * sqrt(y2)", p), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(eval("pi", p), std::numbers::pi);
}

TEST(Expression, DerivativeMatchesCentralDifferences) {
  const std::vector<std::string> sources = {
      "r^3 * sin(y1)", "exp(0.3*sin(y1)) * (1 - y1^2 - y2^2)",
      "1/(0.75 + 0.25*cos(y1))", "sqrt(1 + r^2 * y2^2)", "log(2 + y1*y2) / (1 + r)",
      "(1 + r)^2", "y1^y2"};
  const std::vector<double> p = {0.4, 0.7, 1.3};
  for (const auto& src : sources) {
    const Expression e = parse_expression(src, kNames);
    for (std::size_t k = 0; k < 3; ++k) {
      const double h = 1e-5;
      std::vector<double> a = p, b = p, c = p, d = p;
      a[k] += 2 * h;
      b[k] += h;
      c[k] -= h;
      d[k] -= 2 * h;
      const double fd =
          (-e.evaluate(a) + 8 * e.evaluate(b) - 8 * e.evaluate(c) + e.evaluate(d)) /
          (12 * h);
      EXPECT_NEAR(e.derivative(k).evaluate(p), fd, 1e-8 * (1 + std::abs(fd)))
          << src << " d/d" << kNames[k];
    }
  }
}

TEST(Expression, SecondDerivativeOfPolynomialIsExact) {
  const Expression e = parse_expression("r^4 + 3*r^2*y1", kNames);
  const std::vector<double> p = {1.5, 2.0, 0.0};
  EXPECT_DOUBLE_EQ(e.derivative(0).derivative(0).evaluate(p), 12 * 2.25 + 6 * 2.0);
  EXPECT_DOUBLE_EQ(e.derivative(0).derivative(1).evaluate(p), 6 * 1.5);
}

TEST(Expression, PrintedFormParsesBack) {
  const std::vector<std::string> sources = {"-(r - y1)^2", "r/(y1*y2)", "2^-r",
                                            "(r + y1)/(y1 - y2)", "-r^2"};
  const std::vector<double> p = {0.3, 0.9, 1.7};
  for (const auto& src : sources) {
    const Expression e = parse_expression(src, kNames);
    const Expression back = parse_expression(e.to_string(), kNames);
    EXPECT_DOUBLE_EQ(back.evaluate(p), e.evaluate(p)) << src << " -> " << e.to_string();
  }
}

TEST(Expression, ReportsParseErrors) {
  EXPECT_THROW(parse_expression("1 +", kNames), ParseError);
  EXPECT_THROW(parse_expression("(r", kNames), ParseError);
  EXPECT_THROW(parse_expression("r r", kNames), ParseError);
  EXPECT_THROW(parse_expression("z + 1", kNames), UnknownIdentifier);
  EXPECT_THROW(parse_expression("tan(r)", kNames), UnknownIdentifier);
}

TEST(Expression, VariableExtent) {
  EXPECT_EQ(parse_expression("2*pi", kNames).variable_extent(), 0u);
  EXPECT_EQ(parse_expression("r + y2", kNames).variable_extent(), 3u);
}

}  // namespace
}  // namespace ccembed
