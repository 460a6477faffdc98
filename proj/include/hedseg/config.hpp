#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hedseg/harness.hpp"

namespace hedseg {

/// Runtime configuration shared by all CLI commands. Loadable from a flat
/// key=value file; every key has a same-named command-line flag. Exactly one
/// of {c, gamma} may be set explicitly; all runs are seedless-deterministic.
struct Config {
  GraphParams graph;

  double c = 900.0;
  std::optional<double> gamma;  // direct resolution override
  InitMode init = InitMode::singleton;
  bool both_inits = false;  // sweep/dataset only: pair singleton and one-coalition runs
  size_t l_max = 0;         // 0 = unlimited union growth
  double tau = 0.1;
  uint32_t max_sweeps = 10000;
  RegimeThresholds regimes;
  std::vector<double> c_grid;  // sweep grid; defaults to default_c_grid()
  std::vector<double> gamma_grid;
  std::string dataset_root;
  std::string out_dir = "out";
  int jobs = 0;  // 0 = hardware concurrency

  bool c_explicit = false;
  bool gamma_explicit = false;

  /// Applies one key=value pair; throws on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);

  /// Loads a key=value file ('#' starts a comment, blank lines ignored).
  void load_file(const std::string& path);

  /// Rejects contradictory settings (both c and gamma given explicitly).
  void validate() const;

  EvalParams eval_params() const;
  SweepPlan sweep_plan() const;
  int effective_jobs() const;
};

std::vector<double> parse_double_list(const std::string& text);

}  // namespace hedseg
