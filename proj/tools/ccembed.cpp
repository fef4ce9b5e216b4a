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


// Command-line driver: pipeline run/suite and the kappa, bdf, embed
// partial pipelines.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "ccembed/config.hpp"
#include "ccembed/errors.hpp"
#include "ccembed/pipeline.hpp"

namespace {

struct CommonOptions {
  std::string out;
  bool dump_fields = false;
  std::vector<std::string> tolerances;
  std::optional<long long> seed;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--out", o.out, "Output directory (default: config or ./out)");
  cmd->add_flag("--dump-fields", o.dump_fields, "Write CSV field dumps");
  cmd->add_option("--tol", o.tolerances, "Tolerance override key=value")
      ->allow_extra_args(false);
  cmd->add_option("--seed", o.seed, "Optimizer seed");
}

int run_config(const std::string& path, const CommonOptions& o,
               ccembed::PipelineStage until) {
  using namespace ccembed;
  PipelineConfig cfg;
  try {
    cfg = load_config(path);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.dump_fields) cfg.dump_fields = true;
    for (const auto& t : o.tolerances) apply_tolerance_override(cfg, t);
    if (o.seed) {
      if (*o.seed < 0) throw ConfigError("--seed must be non-negative");
      cfg.optimizer.seed = static_cast<std::uint64_t>(*o.seed);
    }
    cfg.validate();
  } catch (const Error& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfig;
  }
  const PipelineResult result = run_pipeline(cfg, until);
  std::cout << result.report.to_text();
  try {
    const std::string where = write_outputs(cfg, result);
    std::cerr << "report written to " << where << '\n';
  } catch (const Error& err) {
    std::cerr << "output error: " << err.what() << '\n';
    return kExitConfig;
  }
  return result.report.exit_code == kExitPass && !result.report.pass()
             ? kExitFail
             : result.report.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conformally compact metrics: curvature at infinity, bdf "
               "construction and isometric embeddings into hyperbolic space"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string config;
  std::string suite;
  ccembed::PipelineStage until = ccembed::PipelineStage::Full;

  CLI::App* pipeline = app.add_subcommand("pipeline", "Full pipeline and suites");
  pipeline->require_subcommand(1);
  CLI::App* run = pipeline->add_subcommand("run", "Run the full pipeline");
  run->add_option("config", config, "Config file or builtin:<example>")->required();
  add_common(run, opts);
  CLI::App* suite_cmd = pipeline->add_subcommand("suite", "Run a verification suite");
  suite_cmd->add_option("name", suite, "invariants, limits, negative-controls or all")
      ->required();
  add_common(suite_cmd, opts);

  const std::pair<const char*, ccembed::PipelineStage> partial[] = {
      {"kappa", ccembed::PipelineStage::Kappa},
      {"bdf", ccembed::PipelineStage::Bdf},
      {"embed", ccembed::PipelineStage::Embed}};
  const char* help[] = {"Curvature at infinity and the hypothesis check",
                        "Collar flow, bdf and the adjusted metric G",
                        "Everything up to the Euclidean embedding of G"};
  std::vector<CLI::App*> partial_cmds;
  for (int i = 0; i < 3; ++i) {
    CLI::App* cmd = app.add_subcommand(partial[i].first, help[i]);
    cmd->add_option("config", config, "Config file or builtin:<example>")->required();
    add_common(cmd, opts);
    partial_cmds.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ccembed::kExitConfig;
  }

  if (*suite_cmd) {
    try {
      const ccembed::SuiteSummary summary =
          ccembed::run_suite(ccembed::parse_suite_name(suite));
      std::cout << summary.to_text();
      return summary.pass() ? ccembed::kExitPass : ccembed::kExitFail;
    } catch (const ccembed::Error& err) {
      std::cerr << "config error: " << err.what() << '\n';
      return ccembed::kExitConfig;
    }
  }
  for (int i = 0; i < 3; ++i)
    if (*partial_cmds[i]) until = partial[i].second;
  return run_config(config, opts, until);
}
