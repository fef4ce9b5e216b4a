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

#include <optional>
#include <string>
#include <vector>

namespace ccembed {

enum class Relation { Less, LessEqual, Greater, GreaterEqual, Equal, Info };

/// One measured number with the threshold it was checked against.
struct ReportEntry {
  std::string key;
  double value = 0.0;
  Relation relation = Relation::Info;
  double tolerance = 0.0;
  bool pass = true;
};

struct StageRecord {
  std::string stage;
  std::vector<ReportEntry> entries;
  /// Free-form key/value lines (names, nodes, error messages).
  std::vector<std::pair<std::string, std::string>> notes;
  bool pass = true;

  /// Adds an entry and folds its outcome into `pass`.
  bool check(const std::string& key, double value, Relation relation,
             double tolerance);
  void info(const std::string& key, double value);
  void note(const std::string& key, const std::string& value);
  void fail(const std::string& reason);
};

/// Exit codes of the pipeline.
enum ExitCode : int {
  kExitPass = 0,
  kExitFail = 1,
  kExitHypothesis = 2,
  kExitNotConverged = 3,
  kExitConfig = 4,
};

struct VerificationReport {
  std::string config;
  std::vector<StageRecord> stages;
  int exit_code = kExitPass;

  bool pass() const;
  StageRecord& add(const std::string& stage);
  const StageRecord* find(const std::string& stage) const;
  /// Sets the exit code unless an earlier, more specific code was set.
  void set_exit(int code);

  /// Structured text, one [stage] block per record. The timestamp, when
  /// given, is the only line that varies between identical runs.
  std::string to_text(const std::optional<std::string>& timestamp = {}) const;
};

/// Fixed-precision rendering used everywhere in reports.
std::string format_number(double v);
std::string to_string(Relation r);

/// UTC time as ISO 8601.
std::string utc_timestamp();

}  // namespace ccembed
