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


#include "ccembed/examples.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "ccembed/errors.hpp"

namespace ccembed {

namespace {

std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

void expect_params(const std::string& name, std::vector<double>& params,
                   std::vector<double> defaults) {
  if (params.empty()) params = defaults;
  if (params.size() != defaults.size())
    throw ConfigError("example '" + name + "' takes " +
                      std::to_string(defaults.size()) + " parameter(s)");
}

ModelManifold collar(double r_max) {
  return ModelManifold::collar_torus(2, r_max, {2.0 * std::numbers::pi});
}

}  // namespace

std::string parse_call(const std::string& text, std::vector<double>& params) {
  params.clear();
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos) return t;
  if (t.back() != ')') throw ConfigError("malformed example name '" + t + "'");
  const std::string inner = t.substr(open + 1, t.size() - open - 2);
  std::size_t start = 0;
  while (start <= inner.size()) {
    const auto comma = inner.find(',', start);
    const std::string item = trim(inner.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start));
    double v = 0.0;
    const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || res.ec != std::errc() ||
        res.ptr != item.data() + item.size())
      throw ConfigError("bad parameter '" + item + "' in '" + t + "'");
    params.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return trim(t.substr(0, open));
}

MetricSpec builtin_example(const std::string& text) {
  std::vector<double> p;
  const std::string name = parse_call(text, p);
  if (name == "hyperbolic-disk") {
    expect_params(name, p, {});
    return MetricSpec::parse(ModelManifold::disk(2), {{"4", "0"}, {"4"}},
                             "1 - y1^2 - y2^2", "hyperbolic-disk");
  }
  if (name == "scaled-disk") {
    expect_params(name, p, {4.0});
    if (p[0] == 0.0) throw ConfigError("scaled-disk needs a != 0");
    const std::string a2 = num(p[0] * p[0]);
    return MetricSpec::parse(ModelManifold::disk(2), {{a2, "0"}, {a2}},
                             "1 - y1^2 - y2^2",
                             "scaled-disk(" + num(p[0]) + ")");
  }
  if (name == "normal-form-constK") {
    expect_params(name, p, {0.5});
    if (!(p[0] > 0.0)) throw ConfigError("normal-form-constK needs c > 0");
    return MetricSpec::parse(collar(1.0),
                             {{"1/" + num(p[0] * p[0]), "0"}, {"(1 + r)^2"}},
                             "r", "normal-form-constK(" + num(p[0]) + ")");
  }
  if (name == "borderline") {
    expect_params(name, p, {});
    return MetricSpec::parse(collar(1.0),
                             {{"1/(0.75 + 0.25*cos(y1))", "0"}, {"1"}}, "r",
                             "borderline");
  }
  if (name == "flat-cylinder") {
    expect_params(name, p, {1.0, 1.0});
    return MetricSpec::parse(
        collar(1.0), {{num(1.0 + p[1] * p[1]), "0"}, {num(p[0] * p[0])}}, "r",
        "flat-cylinder(" + num(p[0]) + "," + num(p[1]) + ")");
  }
  if (name == "linear-K2") {
    expect_params(name, p, {0.9, 0.3});
    return MetricSpec::parse(
        collar(2.0), {{"1/(" + num(p[0]) + " + " + num(p[1]) + "*r)", "0"}, {"1"}},
        "r", "linear-K2(" + num(p[0]) + "," + num(p[1]) + ")");
  }
  throw ConfigError("unknown built-in example '" + name + "'");
}

std::vector<std::string> builtin_example_names() {
  return {"hyperbolic-disk", "scaled-disk(4)", "normal-form-constK(0.5)",
          "borderline"};
}

}  // namespace ccembed
