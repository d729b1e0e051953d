#pragma once

// Command reports. Every report is one JSON document
//
//   {"schema_version": 1, "command": ..., "inputs": {...}, "outputs": {...},
//    "residuals": {name: {"value", "bound", "relation", "pass"}}, "verdict": "pass" | "fail"}
//
// with keys in a fixed order and no timing data, so equal inputs give equal bytes.

#include "hahn/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hahn {

inline constexpr int kSchemaVersion = 1;

struct Report {
  std::string command;
  std::string json;   // pretty-printed, trailing newline
  std::string table;  // aligned text for terminals
  bool passed = false;
};

/// A constant complex literal in the expression grammar, e.g. "0.0+0.5i".
Complex parse_complex_literal(std::string_view text);

Report classify_report(std::string_view d1, std::string_view d2);
Report injectivize_report(std::string_view disc_pair_json, double theta, std::uint64_t seed);
Report counterexample_report(std::string_view d1, std::string_view d2, std::optional<Complex> a);
Report verify_report(std::string_view suite, std::uint64_t seed);

}  // namespace hahn
