#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "lambda_mixer/analysis.hpp"
#include "lambda_mixer/propagator.hpp"

namespace lambda_mixer {

/// Shortest-safe decimal form: 17 significant digits, so doubles round-trip
/// bit-exactly. Non-finite values print as nan / inf / -inf.
[[nodiscard]] std::string format_double(double v);

/// Parses a value written by format_double. Throws SchemaError.
[[nodiscard]] double parse_double(std::string_view text);

inline constexpr std::string_view kTrajectoryColumns =
    "zeta,om1_re,om1_im,om2_re,om2_im,e1_re,e1_im,e2_re,e2_im,"
    "I_om1,I_om2,I_e1,I_e2,phi,c1,c2,c3,c4,lambda0";

inline constexpr std::string_view kSweepColumns =
    "epsilon,model,phase_terms,L_measured,e_measured,L_analytic,e_analytic,validity_flag";

/// phi is written as nan where the relative phase is undefined (a zero field).
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

/// Reads a trajectory CSV back. Derived columns (intensities, phi) are checked
/// for count and numeric form but not stored. Throws SchemaError.
[[nodiscard]] Trajectory read_trajectory_csv(std::istream& in);

/// One line of the sweep CSV. Missing metrics are NaN.
struct SweepRecord {
  double epsilon = 0.0;
  std::string model;
  bool phase_terms = false;
  double l_measured = 0.0;
  double e_measured = 0.0;
  double l_analytic = 0.0;
  double e_analytic = 0.0;
  /// ok | extrapolated | clamped | no_prediction, or the snake_case error kind
  /// (e.g. no_cycle_found) when the measurement failed.
  std::string validity_flag;

  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

[[nodiscard]] std::vector<SweepRecord> to_records(const SweepTable& table);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
inline void write_sweep_csv(std::ostream& out, const SweepTable& table) {
  write_sweep_csv(out, to_records(table));
}

/// Throws SchemaError on a wrong header, column count or malformed value.
[[nodiscard]] std::vector<SweepRecord> read_sweep_csv(std::istream& in);

}  // namespace lambda_mixer
