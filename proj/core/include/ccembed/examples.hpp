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

#include <string>
#include <vector>

#include "ccembed/metric.hpp"

namespace ccembed {

/// Named example metrics, addressed as "name" or "name(p1,p2,...)":
///
///   hyperbolic-disk          Disk(2), gbar = 4 delta, r = 1 - |y|^2
///   scaled-disk(a)           Disk(2), gbar = a^2 delta (default a = 4)
///   normal-form-constK(c)    collar torus, gbar = dr^2/c^2 + (1+r)^2 dy^2
///                            (default c = 0.5)
///   borderline               collar torus,
///                            gbar = dr^2/(3/4 + cos(y1)/4) + dy1^2
///   flat-cylinder(a,b)       collar torus, gbar = (1+b^2) dr^2 + a^2 dy^2
///   linear-K2(k0,k1)         collar torus on [0, 2],
///                            gbar = dr^2/(k0 + k1 r) + dy^2
///
/// Throws ConfigError for unknown names or bad parameter lists.
MetricSpec builtin_example(const std::string& name);

/// The four pipeline examples with their default parameters.
std::vector<std::string> builtin_example_names();

/// Splits "name(p1,p2)" into name and numeric parameters.
std::string parse_call(const std::string& text, std::vector<double>& params);

}  // namespace ccembed
