#pragma once

// Invariant suites over every module. Each check records the worst value seen
// across its trials, so a suite result is a short, stable list.

#include "hahn/check.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hahn {

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;
  bool passed() const { return all_pass(checks); }
};

/// auts, coverings, metrics, injectivize, counterexample.
const std::vector<std::string>& suite_names();

/// Runs one suite or "all" (every suite in order). Error(Input) for other names.
std::vector<SuiteResult> run_verify(std::string_view suite, std::uint64_t seed);

SuiteResult verify_auts(std::uint64_t seed);
SuiteResult verify_coverings(std::uint64_t seed);
SuiteResult verify_metrics(std::uint64_t seed);
SuiteResult verify_injectivize(std::uint64_t seed, int discs_per_case = 50);
SuiteResult verify_counterexample(std::uint64_t seed);

}  // namespace hahn
