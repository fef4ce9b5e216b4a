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


#include "ccembed/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "ccembed/errors.hpp"
#include "ccembed/examples.hpp"
#include "ccembed/expression.hpp"

namespace ccembed {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, double VerifyTolerances::*>& tolerance_members() {
  static const std::map<std::string, double VerifyTolerances::*> members = {
      {"isometry", &VerifyTolerances::isometry},
      {"immersion", &VerifyTolerances::immersion},
      {"injectivity", &VerifyTolerances::injectivity},
      {"kappa", &VerifyTolerances::kappa},
      {"inequality", &VerifyTolerances::inequality},
      {"consistency", &VerifyTolerances::consistency},
      {"hypothesis", &VerifyTolerances::hypothesis},
      {"cutoff_identity", &VerifyTolerances::cutoff_identity},
  };
  return members;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

/// Numbers may be constant expressions ("2*pi").
double number(const std::string& where, const std::string& text) {
  try {
    const Expression e = parse_expression(text, {});
    const double v = e.evaluate({});
    if (!std::isfinite(v)) throw ConfigError(where + ": value is not finite");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& err) {
    throw ConfigError(where + ": " + err.what());
  }
}

int integer(const std::string& where, const std::string& text) {
  const double v = number(where, text);
  if (v != std::round(v) || std::abs(v) > 1e9)
    throw ConfigError(where + ": expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

std::vector<double> number_list(const std::string& where, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(number(where, trim(item)));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

std::vector<int> integer_list(const std::string& where, const std::string& text) {
  std::vector<int> out;
  for (double v : number_list(where, text)) {
    if (v != std::round(v)) throw ConfigError(where + ": expected integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

template <typename T>
T choice(const std::string& where, const std::string& text,
         const std::map<std::string, T>& options) {
  const auto it = options.find(text);
  if (it != options.end()) return it->second;
  std::string allowed;
  for (const auto& [k, v] : options) allowed += (allowed.empty() ? "" : ", ") + k;
  throw ConfigError(where + ": '" + text + "' is not one of " + allowed);
}

class Section {
 public:
  Section(const pt::ptree& tree, std::string name,
          std::set<std::string> allowed)
      : name_(std::move(name)) {
    if (const auto child = tree.get_child_optional(name_)) {
      present_ = true;
      for (const auto& [key, node] : *child) {
        if (!allowed.count(key))
          throw ConfigError("[" + name_ + "] unknown key '" + key + "'");
        values_[key] = trim(node.data());
      }
    }
  }

  bool present() const { return present_; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::string where(const std::string& key) const {
    return "[" + name_ + "] " + key;
  }
  const std::string& str(const std::string& key) const { return values_.at(key); }

  void read(const std::string& key, std::string& out) const {
    if (has(key)) out = str(key);
  }
  void read(const std::string& key, double& out) const {
    if (has(key)) out = number(where(key), str(key));
  }
  void read(const std::string& key, int& out) const {
    if (has(key)) out = integer(where(key), str(key));
  }

 private:
  std::string name_;
  bool present_ = false;
  std::map<std::string, std::string> values_;
};

}  // namespace

void VerifyTolerances::set(const std::string& key, double value) {
  const auto& members = tolerance_members();
  const auto it = members.find(key);
  if (it == members.end())
    throw ConfigError("unknown tolerance '" + key + "'");
  if (!(value > 0.0) || !std::isfinite(value))
    throw ConfigError("tolerance '" + key + "' must be positive");
  this->*(it->second) = value;
}

std::vector<std::string> VerifyTolerances::keys() {
  std::vector<std::string> out;
  for (const auto& [k, v] : tolerance_members()) out.push_back(k);
  return out;
}

void PipelineConfig::validate() const {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw ConfigError("lambda must be finite and nonzero");
  if (r_count < 8 || boundary_count < 8)
    throw ConfigError("grid resolutions must be at least 8");
  if (flow_steps < 1) throw ConfigError("flow_steps must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(margin > 0.0) || margin >= 1.0)
    throw ConfigError("margin must lie in (0, 1)");
  for (const auto& key : VerifyTolerances::keys()) {
    const double v = tolerances.*(tolerance_members().at(key));
    if (!(v > 0.0)) throw ConfigError("tolerance '" + key + "' must be positive");
  }
  if (method == EmbedMethod::Analytic && analytic.empty())
    throw ConfigError("[embed] method = analytic needs 'analytic'");
  if (optimizer.N < 1) throw ConfigError("[embed] N must be positive");
  if (optimizer.max_iters < 1) throw ConfigError("[embed] max_iters must be positive");
  if (!(optimizer.stop_residual > 0.0))
    throw ConfigError("[embed] stop_residual must be positive");
  if (builtin.empty() && components.empty())
    throw ConfigError("[metric] needs 'builtin' or components g11, g12, ...");
}

MetricSpec PipelineConfig::metric() const {
  if (!builtin.empty()) return builtin_example(builtin);
  const ModelManifold manifold =
      kind == ManifoldKind::Disk
          ? ModelManifold::disk(dim)
          : ModelManifold::collar_torus(dim, r_max, periods, ends);
  return MetricSpec::parse(manifold, components, reference_bdf, name);
}

PipelineConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& err) {
    throw ConfigError("config: " + err.message() + " (line " +
                      std::to_string(err.line()) + ")");
  }
  const std::set<std::string> sections = {"manifold", "metric", "bdf", "grid",
                                          "embed", "verify", "output"};
  for (const auto& [key, node] : tree) {
    if (!sections.count(key))
      throw ConfigError(node.empty() ? "config: key '" + key + "' outside a section"
                                     : "config: unknown section [" + key + "]");
  }

  PipelineConfig cfg;
  const Section manifold(tree, "manifold",
                         {"kind", "dim", "r_max", "periods", "ends"});
  const Section metric(tree, "metric",
                       {"builtin", "name", "lambda", "g11", "g12", "g13", "g22",
                        "g23", "g33"});
  const Section bdf(tree, "bdf", {"reference", "cutoff", "epsilon", "margin"});
  const Section grid(tree, "grid", {"nr", "nb", "flow_steps"});
  const Section embed(tree, "embed",
                      {"method", "analytic", "N", "init", "max_iters",
                       "stop_residual", "seed", "weights", "continuation",
                       "damping", "twist"});
  const Section verify(tree, "verify", [] {
    const auto k = VerifyTolerances::keys();
    return std::set<std::string>(k.begin(), k.end());
  }());
  const Section output(tree, "output", {"dir", "dump_fields"});

  metric.read("builtin", cfg.builtin);
  metric.read("lambda", cfg.lambda);
  if (!cfg.builtin.empty()) {
    if (manifold.present() || bdf.has("reference"))
      throw ConfigError(
          "[manifold] and [bdf] reference cannot be combined with a built-in metric");
    for (const char* k : {"g11", "g12", "g13", "g22", "g23", "g33"})
      if (metric.has(k))
        throw ConfigError("[metric] components cannot be combined with 'builtin'");
    cfg.name = cfg.builtin;
  } else {
    if (manifold.has("kind"))
      cfg.kind = choice<ManifoldKind>(manifold.where("kind"), manifold.str("kind"),
                                      {{"disk", ManifoldKind::Disk},
                                       {"collar-torus", ManifoldKind::CollarTorus}});
    manifold.read("dim", cfg.dim);
    manifold.read("r_max", cfg.r_max);
    if (manifold.has("periods"))
      cfg.periods = number_list(manifold.where("periods"), manifold.str("periods"));
    if (manifold.has("ends"))
      cfg.ends = choice<BoundaryEnds>(manifold.where("ends"), manifold.str("ends"),
                                      {{"inner", BoundaryEnds::Inner},
                                       {"both", BoundaryEnds::Both}});
    if (cfg.periods.empty())
      cfg.periods.assign(cfg.dim - 1, 2.0 * std::numbers::pi);
    if (cfg.dim < 2 || cfg.dim > 3)
      throw ConfigError("[manifold] dim must be 2 or 3");
    cfg.reference_bdf = cfg.kind == ManifoldKind::Disk ? "1 - y1^2 - y2^2" : "r";
    if (cfg.kind == ManifoldKind::Disk && cfg.dim == 3)
      cfg.reference_bdf += " - y3^2";
    bdf.read("reference", cfg.reference_bdf);
    metric.read("name", cfg.name);
    cfg.components.resize(cfg.dim);
    for (int i = 1; i <= cfg.dim; ++i) {
      for (int j = i; j <= cfg.dim; ++j) {
        const std::string key = "g" + std::to_string(i) + std::to_string(j);
        if (metric.has(key)) {
          cfg.components[i - 1].push_back(metric.str(key));
        } else if (i == j) {
          throw ConfigError("[metric] missing diagonal component " + key);
        } else {
          cfg.components[i - 1].push_back("0");
        }
      }
    }
  }

  if (bdf.has("cutoff")) {
    try {
      cfg.cutoff = parse_cutoff_kind(bdf.str("cutoff"));
    } catch (const Error& err) {
      throw ConfigError(bdf.where("cutoff") + ": " + err.what());
    }
  }
  bdf.read("epsilon", cfg.epsilon);
  bdf.read("margin", cfg.margin);

  grid.read("nr", cfg.r_count);
  grid.read("nb", cfg.boundary_count);
  grid.read("flow_steps", cfg.flow_steps);

  OptimizerConfig& opt = cfg.optimizer;
  if (embed.has("method"))
    cfg.method = choice<EmbedMethod>(embed.where("method"), embed.str("method"),
                                     {{"gauss-newton", EmbedMethod::GaussNewton},
                                      {"gradient", EmbedMethod::Gradient},
                                      {"analytic", EmbedMethod::Analytic}});
  opt.method = cfg.method == EmbedMethod::Gradient ? OptimizerMethod::Gradient
                                                   : OptimizerMethod::GaussNewton;
  embed.read("analytic", cfg.analytic);
  embed.read("N", opt.N);
  embed.read("max_iters", opt.max_iters);
  embed.read("stop_residual", opt.stop_residual);
  embed.read("continuation", opt.continuation_steps);
  embed.read("damping", opt.damping);
  if (embed.has("seed")) {
    const int seed = integer(embed.where("seed"), embed.str("seed"));
    if (seed < 0) throw ConfigError(embed.where("seed") + " must be non-negative");
    opt.seed = static_cast<std::uint64_t>(seed);
  }
  if (embed.has("init"))
    opt.init = choice<OptimizerInit>(embed.where("init"), embed.str("init"),
                                     {{"auto", OptimizerInit::Auto},
                                      {"linear", OptimizerInit::Linear},
                                      {"twisted", OptimizerInit::Twisted}});
  if (embed.has("weights"))
    opt.weights = choice<NodeWeights>(embed.where("weights"), embed.str("weights"),
                                      {{"inverse-norm", NodeWeights::InverseNorm},
                                       {"uniform", NodeWeights::Uniform}});
  if (embed.has("twist"))
    opt.twist_frequencies = integer_list(embed.where("twist"), embed.str("twist"));

  for (const auto& key : VerifyTolerances::keys())
    if (verify.has(key))
      cfg.tolerances.set(key, number(verify.where(key), verify.str(key)));

  output.read("dir", cfg.out_dir);
  if (output.has("dump_fields"))
    cfg.dump_fields = choice<bool>(output.where("dump_fields"),
                                   output.str("dump_fields"),
                                   {{"true", true}, {"false", false}});

  cfg.validate();
  return cfg;
}

PipelineConfig builtin_config(const std::string& example) {
  PipelineConfig cfg;
  cfg.builtin = example;
  cfg.name = example;
  builtin_example(example);
  return cfg;
}

PipelineConfig load_config(const std::string& path) {
  const std::string prefix = "builtin:";
  if (path.rfind(prefix, 0) == 0) return builtin_config(path.substr(prefix.size()));
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_tolerance_override(PipelineConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--tol expects key=value, got '" + assignment + "'");
  const std::string key = trim(assignment.substr(0, eq));
  cfg.tolerances.set(key, number("--tol " + key, trim(assignment.substr(eq + 1))));
}

}  // namespace ccembed
