#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lambda_mixer/levelsys.hpp"

namespace lambda_mixer {

/// Outcome of one acceptance check. A check passes when its numeric condition
/// holds and it finished within `runtime_limit` seconds.
struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;   // headline quantity
  double threshold = 0.0;  // what it was compared against
  std::string detail;      // one line, human readable
  double seconds = 0.0;
  double runtime_limit = 0.0;
  std::vector<std::pair<std::string, double>> metrics;  // every number the check looked at
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  [[nodiscard]] bool all_passed() const noexcept;
};

struct ValidationOptions {
  SystemParams params;
  unsigned threads = 1;
  int points_per_decade = 25;  // sweep density for the scaling check
  std::uint64_t seed = 20260101;
};

/// Field state with moduli uniform in [min_modulus, max_modulus] and uniform phases.
[[nodiscard]] FieldState random_field_state(std::mt19937_64& rng, double min_modulus = 0.05,
                                            double max_modulus = 1.5);

// Individual checks, in report order.
[[nodiscard]] CheckResult check_gradient_oracle(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_perturbation_order(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_conservation_drift(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_no_phase_invariant(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_with_phase_length(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_no_phase_length(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_efficiency_limits(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_sweep_scaling(const ValidationOptions& opt);
[[nodiscard]] CheckResult check_five_level_cancellation(const ValidationOptions& opt);

/// Runs every check. Numerical errors inside a check fail that check only.
[[nodiscard]] ValidationReport run_validation(const ValidationOptions& opt = {});

}  // namespace lambda_mixer
