#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "corrpic/corrpic.hpp"

namespace corrpic::app {

struct Scenario {
  std::string model;
  std::vector<std::string> methods;
  TimeGrid grid;
  std::string out_dir = ".";
  std::string prefix;
  std::size_t substeps = 1;

  JCParams jc;
  DephasingParams dephasing;
  DampedHOParams damped_ho;
  /// "moments" (exact second-order moment equations) or "fock" (dense truncated bath).
  std::string memory_bath = "moments";
  std::size_t fock_cut = 2;

  ValidationOptions validation;
};

/// Parses and cross-checks a scenario; throws ConfigError.
Scenario load_scenario(const Config& cfg);

Trajectory run_method(const Scenario& s, const std::string& method);

/// time,<observables> with %.17g cells and '\n' line endings.
std::string format_csv(const Trajectory& traj);
void write_file(const std::string& path, const std::string& content);

/// Worker count from CORRPIC_THREADS, defaulting to the hardware concurrency.
std::size_t thread_cap();

/// Runs every method (concurrently up to `threads`) and writes one CSV each; returns the paths.
std::vector<std::string> run_scenario(const Scenario& s, std::size_t threads);

/// Report for the random_validate model.
ValidationReport run_validation(const Scenario& s);

}  // namespace corrpic::app
