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


#include "ccembed/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace ccembed {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::Greater: return ">";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "==";
    case Relation::Info: break;
  }
  return "";
}

bool StageRecord::check(const std::string& key, double value, Relation relation,
                        double tolerance) {
  bool ok = false;
  switch (relation) {
    case Relation::Less: ok = value < tolerance; break;
    case Relation::LessEqual: ok = value <= tolerance; break;
    case Relation::Greater: ok = value > tolerance; break;
    case Relation::GreaterEqual: ok = value >= tolerance; break;
    case Relation::Equal: ok = value == tolerance; break;
    case Relation::Info: ok = true; break;
  }
  entries.push_back({key, value, relation, tolerance, ok});
  pass = pass && ok;
  return ok;
}

void StageRecord::info(const std::string& key, double value) {
  entries.push_back({key, value, Relation::Info, 0.0, true});
}

void StageRecord::note(const std::string& key, const std::string& value) {
  notes.emplace_back(key, value);
}

void StageRecord::fail(const std::string& reason) {
  note("error", reason);
  pass = false;
}

bool VerificationReport::pass() const {
  if (exit_code != kExitPass || stages.empty()) return false;
  for (const auto& s : stages)
    if (!s.pass) return false;
  return true;
}

StageRecord& VerificationReport::add(const std::string& stage) {
  stages.push_back({stage, {}, {}, true});
  return stages.back();
}

const StageRecord* VerificationReport::find(const std::string& stage) const {
  for (const auto& s : stages)
    if (s.stage == stage) return &s;
  return nullptr;
}

void VerificationReport::set_exit(int code) {
  if (exit_code == kExitPass || exit_code == kExitFail) exit_code = code;
}

std::string VerificationReport::to_text(
    const std::optional<std::string>& timestamp) const {
  std::ostringstream os;
  if (timestamp) os << "# generated " << *timestamp << '\n';
  os << "config = " << config << '\n';
  for (const auto& s : stages) {
    os << "\n[" << s.stage << "]\n";
    os << "status = " << (s.pass ? "pass" : "fail") << '\n';
    for (const auto& e : s.entries) {
      os << e.key << " = " << format_number(e.value);
      if (e.relation == Relation::Info)
        os << "  (info)";
      else
        os << "  (" << to_string(e.relation) << ' ' << format_number(e.tolerance)
           << ": " << (e.pass ? "pass" : "fail") << ')';
      os << '\n';
    }
    for (const auto& [k, v] : s.notes) os << k << " = " << v << '\n';
  }
  os << "\n[verdict]\n";
  os << "status = " << (pass() ? "pass" : "fail") << '\n';
  os << "exit_code = " << exit_code << '\n';
  return os.str();
}

std::string utc_timestamp() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace ccembed
