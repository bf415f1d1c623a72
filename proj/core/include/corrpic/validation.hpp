#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrpic/linalg.hpp"

namespace corrpic {

struct ValidationOptions {
  std::uint64_t seed = 7;
  std::size_t instances = 100;
  /// Cycled over; empty means every pair with d_S, d_B in {2, 3, 4}.
  std::vector<BipartiteDims> dims;
  /// Largest ||H_I|| / ||H_S|| drawn.
  double max_coupling = 5.0;
  /// Adds a traceful term to chi before solving for the parent operator.
  bool mutate = false;
};

struct CheckResult {
  std::string name;
  double max_residual = 0.0;
  double threshold = 0.0;
  bool pass() const { return max_residual <= threshold; }
};

struct ValidationReport {
  std::size_t instances = 0;
  std::vector<CheckResult> checks;
  bool pass() const;
  const CheckResult& check(const std::string& name) const;
  std::string to_string() const;
};

/// Runs the exactness, round-trip and consistency checks on seeded random instances.
ValidationReport validate(const ValidationOptions& opts);

}  // namespace corrpic
