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
#include <utility>
#include <vector>

#include "ccembed/config.hpp"
#include "ccembed/report.hpp"

namespace ccembed {

/// Last stage executed by run_pipeline.
enum class PipelineStage { Kappa, Bdf, Embed, Full };

struct PipelineResult {
  VerificationReport report;
  /// CSV dumps as (file name, contents).
  std::vector<std::pair<std::string, std::string>> fields;
};

/// Runs rescale, kappa check, collar flow, epsilon choice, bdf, G, the Nash
/// step, composition with x and the final checks, stopping after `until`.
///
/// Errors never escape: the report records the failing stage and sets the
/// exit code (2 hypothesis violation, 3 optimizer non-convergence, 4 config
/// error, 1 any other failure).
PipelineResult run_pipeline(const PipelineConfig& cfg,
                            PipelineStage until = PipelineStage::Full);

/// Writes report.txt into cfg.out_dir, plus the CSV fields when
/// cfg.dump_fields is set. Returns the report path.
std::string write_outputs(const PipelineConfig& cfg, const PipelineResult& result,
                          bool timestamp = true);

enum class SuiteName { Invariants, Limits, NegativeControls, All };

/// Throws ConfigError for an unknown name.
SuiteName parse_suite_name(const std::string& name);

struct SuiteRow {
  std::string suite;
  std::string check;
  double value = 0.0;
  Relation relation = Relation::Info;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

struct SuiteSummary {
  std::vector<SuiteRow> rows;
  bool pass() const;
  /// Aligned table, one row per check.
  std::string to_text() const;
};

SuiteSummary run_suite(SuiteName name);

}  // namespace ccembed
