#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace qdual {

/// One named numerical check: a residual compared against a tolerance.
struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = true;
  std::string detail;
};

struct Report {
  std::vector<Check> checks;

  Check& add(std::string name, double residual, double tolerance, std::string detail = {}) {
    checks.push_back({std::move(name), residual, tolerance, residual <= tolerance, std::move(detail)});
    return checks.back();
  }
  Check& add_flag(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed ? 0.0 : 1.0, 0.0, passed, std::move(detail)});
    return checks.back();
  }
  void append(const Report& other, const std::string& prefix = {}) {
    for (auto c : other.checks) {
      c.name = prefix + c.name;
      checks.push_back(std::move(c));
    }
  }
  bool ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
  double max_residual() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, c.residual);
    return m;
  }
  const Check* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

}  // namespace qdual
