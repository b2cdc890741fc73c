#pragma once

// The built-in acceptance suite: one numbered criterion per check, each with
// a short tag for --filter, pinned tolerances and its own CSV outputs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tubemass::verify {

struct Criterion {
  int id = 0;
  std::string tag;
  std::string title;
};

/// All criteria in suite order.
const std::vector<Criterion>& criteria();

struct CriterionResult {
  Criterion criterion;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
  std::vector<std::filesystem::path> outputs;
};

struct SuiteOptions {
  std::filesystem::path out = "verify_out";
  std::filesystem::path scenarios;  // bundled scenario directory
  /// Tag, id or substring of a tag; empty runs everything.
  std::string filter;
  std::optional<std::uint64_t> seed;
};

struct SuiteReport {
  std::vector<CriterionResult> results;
  double seconds = 0.0;
  bool all_passed() const;
};

/// Criteria whose tag or id matches the filter.
std::vector<Criterion> select(const std::string& filter);

SuiteReport verify_suite(const SuiteOptions& options);

/// One "PASS|FAIL  #id  tag  title  (detail)" line per criterion.
std::string matrix(const SuiteReport& report);

/// Directory holding the bundled scenarios at build time.
std::filesystem::path default_scenario_dir();

}  // namespace tubemass::verify
