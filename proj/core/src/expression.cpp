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

#include "ccembed/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace ccembed {

struct Expression::Node {
  Op op = Op::Const;
  double value = 0.0;
  std::size_t index = 0;
  std::string name;
  std::vector<Expression> children;
};

Expression::Expression() : Expression(constant(0.0)) {}

Expression::Expression(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

Expression Expression::constant(double value) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = value;
  return Expression(std::move(n));
}

Expression Expression::variable(std::size_t index, std::string name) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  n->name = std::move(name);
  return Expression(std::move(n));
}

Expression Expression::make(Op op, std::vector<Expression> children) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->children = std::move(children);
  return Expression(std::move(n));
}

Expression::Op Expression::op() const { return node_->op; }
double Expression::constant_value() const { return node_->value; }
std::size_t Expression::variable_index() const { return node_->index; }
const std::string& Expression::variable_name() const { return node_->name; }
std::size_t Expression::arity() const { return node_->children.size(); }
Expression Expression::child(std::size_t i) const {
  return node_->children.at(i);
}

namespace {

bool is_value(const Expression& e, double v) {
  return e.is_constant() && e.constant_value() == v;
}

}  // namespace

// Smart constructors: fold constants and drop 0/1 identities so that
// derivatives stay readable.

Expression operator+(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant())
    return Expression::constant(a.constant_value() + b.constant_value());
  if (is_value(a, 0.0)) return b;
  if (is_value(b, 0.0)) return a;
  if (b.op() == Expression::Op::Neg) return a - b.child(0);
  return Expression::make(Expression::Op::Add, {a, b});
}

Expression operator-(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant())
    return Expression::constant(a.constant_value() - b.constant_value());
  if (is_value(b, 0.0)) return a;
  if (is_value(a, 0.0)) return -b;
  if (b.op() == Expression::Op::Neg) return a + b.child(0);
  return Expression::make(Expression::Op::Sub, {a, b});
}

Expression operator-(const Expression& a) {
  if (a.is_constant()) return Expression::constant(-a.constant_value());
  if (a.op() == Expression::Op::Neg) return a.child(0);
  return Expression::make(Expression::Op::Neg, {a});
}

Expression operator*(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant())
    return Expression::constant(a.constant_value() * b.constant_value());
  if (is_value(a, 0.0) || is_value(b, 0.0)) return Expression::constant(0.0);
  if (is_value(a, 1.0)) return b;
  if (is_value(b, 1.0)) return a;
  if (is_value(a, -1.0)) return -b;
  if (is_value(b, -1.0)) return -a;
  if (a.op() == Expression::Op::Neg) return -(a.child(0) * b);
  if (b.op() == Expression::Op::Neg) return -(a * b.child(0));
  // Keep numeric coefficients on the left.
  if (b.is_constant()) return Expression::make(Expression::Op::Mul, {b, a});
  if (a.is_constant() && b.op() == Expression::Op::Mul &&
      b.child(0).is_constant())
    return Expression::constant(a.constant_value() *
                                b.child(0).constant_value()) *
           b.child(1);
  return Expression::make(Expression::Op::Mul, {a, b});
}

Expression operator/(const Expression& a, const Expression& b) {
  if (a.is_constant() && b.is_constant())
    return Expression::constant(a.constant_value() / b.constant_value());
  if (is_value(a, 0.0)) return Expression::constant(0.0);
  if (is_value(b, 1.0)) return a;
  if (a.op() == Expression::Op::Neg) return -(a.child(0) / b);
  return Expression::make(Expression::Op::Div, {a, b});
}

Expression pow(const Expression& base, const Expression& exponent) {
  if (base.is_constant() && exponent.is_constant())
    return Expression::constant(
        std::pow(base.constant_value(), exponent.constant_value()));
  if (is_value(exponent, 0.0)) return Expression::constant(1.0);
  if (is_value(exponent, 1.0)) return base;
  return Expression::make(Expression::Op::Pow, {base, exponent});
}

#define CCEMBED_UNARY(fn, OPNAME)                                       \
  Expression fn(const Expression& a) {                                  \
    if (a.is_constant())                                                \
      return Expression::constant(std::fn(a.constant_value()));         \
    return Expression::make(Expression::Op::OPNAME, {a});               \
  }

CCEMBED_UNARY(sin, Sin)
CCEMBED_UNARY(cos, Cos)
CCEMBED_UNARY(exp, Exp)
CCEMBED_UNARY(log, Log)
CCEMBED_UNARY(sqrt, Sqrt)

#undef CCEMBED_UNARY

double Expression::evaluate(std::span<const double> values) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      return values[n.index];
    case Op::Add:
      return n.children[0].evaluate(values) + n.children[1].evaluate(values);
    case Op::Sub:
      return n.children[0].evaluate(values) - n.children[1].evaluate(values);
    case Op::Mul:
      return n.children[0].evaluate(values) * n.children[1].evaluate(values);
    case Op::Div:
      return n.children[0].evaluate(values) / n.children[1].evaluate(values);
    case Op::Pow: {
      const Expression& e = n.children[1];
      const double b = n.children[0].evaluate(values);
      if (e.is_constant() && e.constant_value() == 2.0) return b * b;
      return std::pow(b, e.evaluate(values));
    }
    case Op::Neg:
      return -n.children[0].evaluate(values);
    case Op::Sin:
      return std::sin(n.children[0].evaluate(values));
    case Op::Cos:
      return std::cos(n.children[0].evaluate(values));
    case Op::Exp:
      return std::exp(n.children[0].evaluate(values));
    case Op::Log:
      return std::log(n.children[0].evaluate(values));
    case Op::Sqrt:
      return std::sqrt(n.children[0].evaluate(values));
  }
  return 0.0;
}

Expression Expression::derivative(std::size_t index) const {
  const Node& n = *node_;
  auto d = [index](const Expression& e) { return e.derivative(index); };
  switch (n.op) {
    case Op::Const:
      return constant(0.0);
    case Op::Var:
      return constant(n.index == index ? 1.0 : 0.0);
    case Op::Add:
      return d(n.children[0]) + d(n.children[1]);
    case Op::Sub:
      return d(n.children[0]) - d(n.children[1]);
    case Op::Mul: {
      const Expression& u = n.children[0];
      const Expression& v = n.children[1];
      return d(u) * v + u * d(v);
    }
    case Op::Div: {
      const Expression& u = n.children[0];
      const Expression& v = n.children[1];
      const Expression dv = d(v);
      if (is_value(dv, 0.0)) return d(u) / v;
      return (d(u) * v - u * dv) / pow(v, constant(2.0));
    }
    case Op::Pow: {
      const Expression& u = n.children[0];
      const Expression& k = n.children[1];
      const Expression dk = d(k);
      if (is_value(dk, 0.0)) {
        return k * pow(u, k - constant(1.0)) * d(u);
      }
      return *this * (dk * log(u) + k * d(u) / u);
    }
    case Op::Neg:
      return -d(n.children[0]);
    case Op::Sin:
      return cos(n.children[0]) * d(n.children[0]);
    case Op::Cos:
      return -(sin(n.children[0]) * d(n.children[0]));
    case Op::Exp:
      return *this * d(n.children[0]);
    case Op::Log:
      return d(n.children[0]) / n.children[0];
    case Op::Sqrt:
      return d(n.children[0]) / (constant(2.0) * *this);
  }
  return constant(0.0);
}

std::size_t Expression::variable_extent() const {
  if (node_->op == Op::Var) return node_->index + 1;
  std::size_t extent = 0;
  for (const auto& c : node_->children)
    extent = std::max(extent, c.variable_extent());
  return extent;
}

namespace {

// Binding strength used by the printer; higher binds tighter.
int precedence(const Expression& e) {
  using Op = Expression::Op;
  switch (e.op()) {
    case Op::Add:
    case Op::Sub:
      return 1;
    case Op::Mul:
    case Op::Div:
    case Op::Neg:
      return 2;
    case Op::Pow:
      return 4;
    case Op::Const:
      return e.constant_value() < 0.0 ? 2 : 5;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  (void)ec;
  return std::string(buf.data(), end);
}

void print(const Expression& e, std::string& out);

void print_child(const Expression& c, bool parens, std::string& out) {
  if (parens) out += '(';
  print(c, out);
  if (parens) out += ')';
}

void print(const Expression& e, std::string& out) {
  using Op = Expression::Op;
  const int p = precedence(e);
  switch (e.op()) {
    case Op::Const:
      out += format_number(e.constant_value());
      return;
    case Op::Var:
      out += e.variable_name();
      return;
    case Op::Add:
    case Op::Sub:
      print_child(e.child(0), precedence(e.child(0)) < p, out);
      out += e.op() == Op::Add ? " + " : " - ";
      // a - (b + c) and a - (-b) need parentheses on the right.
      print_child(e.child(1),
                  precedence(e.child(1)) <= p ||
                      (e.child(1).op() == Op::Neg) ||
                      (e.child(1).is_constant() &&
                       e.child(1).constant_value() < 0.0),
                  out);
      return;
    case Op::Mul:
    case Op::Div: {
      print_child(e.child(0), precedence(e.child(0)) < p, out);
      out += e.op() == Op::Mul ? "*" : "/";
      const Expression& r = e.child(1);
      print_child(r, precedence(r) <= p, out);
      return;
    }
    case Op::Neg:
      out += '-';
      print_child(e.child(0), precedence(e.child(0)) < p ||
                                  e.child(0).op() == Op::Neg ||
                                  (e.child(0).is_constant() &&
                                   e.child(0).constant_value() < 0.0),
                  out);
      return;
    case Op::Pow:
      print_child(e.child(0), precedence(e.child(0)) <= p, out);
      out += '^';
      print_child(e.child(1), precedence(e.child(1)) < p, out);
      return;
    case Op::Sin:
    case Op::Cos:
    case Op::Exp:
    case Op::Log:
    case Op::Sqrt: {
      static constexpr std::array names = {"sin", "cos", "exp", "log", "sqrt"};
      out += names[static_cast<int>(e.op()) - static_cast<int>(Op::Sin)];
      out += '(';
      print(e.child(0), out);
      out += ')';
      return;
    }
  }
}

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> vars)
      : src_(src), vars_(vars) {}

  Expression parse() {
    Expression e = expr();
    skip_ws();
    if (pos_ != src_.size())
      throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size())
        throw ParseError(pos_, std::string("expected '") + c +
                                   "' but reached end of input");
      throw ParseError(pos_, std::string("expected '") + c + "'");
    }
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = lhs + term();
      else if (accept('-'))
        lhs = lhs - term();
      else
        return lhs;
    }
  }

  Expression term() {
    Expression lhs = factor();
    for (;;) {
      if (accept('*'))
        lhs = lhs * factor();
      else if (accept('/'))
        lhs = lhs / factor();
      else
        return lhs;
    }
  }

  Expression factor() {
    if (accept('-')) return -factor();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return pow(base, factor());
    return base;
  }

  Expression primary() {
    skip_ws();
    if (pos_ >= src_.size())
      throw ParseError(pos_, "expected an expression but reached end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return identifier();
    throw ParseError(pos_, std::string("unexpected '") + c + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() &&
             std::isdigit(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-'))
        ++pos_;
      if (pos_ < src_.size() &&
          std::isdigit(static_cast<unsigned char>(src_[pos_])))
        digits();
      else
        pos_ = save;
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_)
      throw ParseError(start, "malformed number");
    return Expression::constant(v);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '_'))
      ++pos_;
    const std::string name(src_.substr(start, pos_ - start));

    using Fn = Expression (*)(const Expression&);
    static const std::array<std::pair<const char*, Fn>, 5> funcs = {{
        {"sin", [](const Expression& a) { return sin(a); }},
        {"cos", [](const Expression& a) { return cos(a); }},
        {"exp", [](const Expression& a) { return exp(a); }},
        {"log", [](const Expression& a) { return log(a); }},
        {"sqrt", [](const Expression& a) { return sqrt(a); }},
    }};
    for (const auto& [fname, fn] : funcs) {
      if (name == fname) {
        expect('(');
        Expression arg = expr();
        expect(')');
        return fn(arg);
      }
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i] == name) return Expression::variable(i, name);
    if (name == "pi") return Expression::constant(std::numbers::pi);
    throw UnknownIdentifier(start, name);
  }

  std::string_view src_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string Expression::to_string() const {
  std::string out;
  print(*this, out);
  return out;
}

Expression parse_expression(std::string_view source,
                            std::span<const std::string> variables) {
  return Parser(source, variables).parse();
}

}  // namespace ccembed
