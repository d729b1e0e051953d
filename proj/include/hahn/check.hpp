#pragma once

#include <string>
#include <vector>

namespace hahn {

/// A named numeric check: value must stay below (or above) a bound.
struct Check {
  enum class Rel { Below, Above };
  std::string name;
  double value = 0;
  double bound = 0;
  Rel rel = Rel::Below;

  bool pass() const { return rel == Rel::Below ? value < bound : value > bound; }

  static Check below(std::string n, double v, double b) { return {std::move(n), v, b, Rel::Below}; }
  static Check above(std::string n, double v, double b) { return {std::move(n), v, b, Rel::Above}; }
};

inline bool all_pass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass()) return false;
  }
  return true;
}

}  // namespace hahn
