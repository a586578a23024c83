#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lambda_mixer/invariants.hpp"
#include "lambda_mixer/propagator.hpp"

namespace lambda_mixer {

/// Initial seeding: ε = |E(0)|²/|Ω(0)|² and the initial relative phase φ₀.
struct SeedSpec {
  double epsilon = 1e-2;
  double phi0 = 0.0;

  void validate() const;
};

/// Equal pumps Ω₁ = Ω₂ = 1 and equal seeds E₁ = E₂ = √ε·e^(−iφ₀/2), which
/// puts the whole initial phase φ₀ into the relative phase.
[[nodiscard]] FieldState seeded_initial_state(const SeedSpec& seed);

enum class MetricSource { kMeasured, kAnalyticWithPhase, kAnalyticNoPhase };

/// Reliability tag attached to a conversion metric.
enum class Validity {
  kOk,
  kExtrapolated,  // analytic formula evaluated at ε > 0.01
  kClamped,       // analytic efficiency fell outside [0, 1] and was clamped
};

std::string to_string(MetricSource s);
std::string to_string(Validity v);

struct ConversionMetrics {
  double length = 0.0;      // L, units Δ/κ
  double efficiency = 0.0;  // e
  MetricSource source = MetricSource::kMeasured;
  Validity validity = Validity::kOk;
};

/// L is the ζ of the first prominent local maximum of |E₁|², refined by a
/// parabola through the neighbouring samples. e = (max|E₁|² − min|E₁|²) /
/// max|Ω₁|² over the samples up to that maximum.
/// Throws NoCycleFound when |E₁|² never turns over.
[[nodiscard]] ConversionMetrics detect_conversion(const Trajectory& traj);

/// Small-seed prediction with Stark phase terms:
///   e = [(1 − cos φ₀) − ε(1 − 3cos φ₀ − 2cos²φ₀)] / (1 + cos φ₀)
///   L = 2π / (√ε (1 + cos φ₀))
/// Valid for ε ≤ 0.1 (flagged above 0.01); ε = 0 gives the cycle-limit
/// efficiency with L = ∞. Throws PhaseSingularity when 1 + cos φ₀ ≤ 1e-9 and
/// OutOfValidityRegion for ε outside [0, 0.1].
[[nodiscard]] ConversionMetrics predict_with_phase(const SeedSpec& seed);

/// Small-seed prediction without phase terms:
///   e = 1 − ε √(cos φ₀),  L = 2 ln(4 / (ε² cos φ₀)).
/// Throws OutOfValidityRegion for cos φ₀ ≤ 0 or ε outside (0, 0.1].
[[nodiscard]] ConversionMetrics predict_no_phase(const SeedSpec& seed);

/// The analytic prediction matching a backend's dynamics.
[[nodiscard]] ConversionMetrics predict_for(const BackendSpec& spec, const SeedSpec& seed);

/// `points_per_decade` logarithmic points per decade from eps_min to eps_max,
/// both ends included.
[[nodiscard]] std::vector<double> log_grid(double eps_min, double eps_max, int points_per_decade);

struct SweepRow {
  double epsilon = 0.0;
  BackendSpec spec;
  std::optional<ConversionMetrics> measured;  // empty when detection failed
  std::optional<ConversionMetrics> analytic;  // empty outside the formula's domain
  std::string error;                          // error kind for a failed row
};

struct SweepTable {
  std::vector<SweepRow> rows;  // ε ascending, spec order as given within each ε
};

struct SweepOptions {
  /// Worker threads; rows are merged in input order regardless.
  unsigned threads = 1;
  /// Horizon doublings tried when no cycle fits in grid.zeta_max.
  int max_horizon_doublings = 8;
  /// Upper bound on samples per trajectory; the stride is widened to respect it.
  std::size_t max_samples = 200000;
};

/// Runs one trajectory per (ε, spec) from seeded_initial_state and detects the
/// conversion. Row failures are recorded, not thrown.
[[nodiscard]] SweepTable sweep_epsilon(std::span<const double> eps_grid, double phi0,
                                       std::span<const BackendSpec> specs,
                                       const SystemParams& params, const PropagationGrid& grid,
                                       const SweepOptions& options = {});

/// Integrates from `seed` and detects the first conversion, extending the
/// horizon by doubling when the maximum lies beyond grid.zeta_max.
[[nodiscard]] ConversionMetrics measure_conversion(const SeedSpec& seed, const BackendSpec& spec,
                                                   const SystemParams& params,
                                                   const PropagationGrid& grid,
                                                   const SweepOptions& options = {});

/// Least-squares line y = slope·x + intercept with coefficient of determination.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

[[nodiscard]] LinearFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace lambda_mixer
