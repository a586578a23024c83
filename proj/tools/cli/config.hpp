#pragma once

#include <string>
#include <string_view>

#include "lambda_mixer/analysis.hpp"
#include "lambda_mixer/levelsys.hpp"
#include "lambda_mixer/propagator.hpp"

namespace lambda_mixer::cli {

/// Everything a command needs, filled from a flat `key = value` document.
struct RunConfig {
  LevelModel model = LevelModel::kFourLevel;
  Method method = Method::kClosedForm;
  bool include_phase_terms = true;
  double epsilon = 1e-2;
  double phi0 = 0.78539816339744831;  // π/4
  double omega_over_delta = 0.01;
  double gamma1 = 0.01;
  double gamma2 = 0.01;
  double zeta_max = 200.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double sample_stride = 0.01;
  double eps_min = 1e-6;
  double eps_max = 1e-1;
  int points_per_decade = 25;
  std::string output_path;  // empty: standard output

  [[nodiscard]] SystemParams params() const;
  [[nodiscard]] PropagationGrid grid() const;
  [[nodiscard]] SeedSpec seed() const;
  [[nodiscard]] BackendSpec backend() const;
};

/// Parses and validates a config document. `#` starts a comment; blank lines
/// are ignored; keys may appear once. Throws ParseError, UnknownKey,
/// ValidationError.
[[nodiscard]] RunConfig parse_config(std::string_view source);

}  // namespace lambda_mixer::cli
