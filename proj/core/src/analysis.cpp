#include "lambda_mixer/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#include "lambda_mixer/errors.hpp"

namespace lambda_mixer {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAnalyticEpsilonMax = 0.1;
constexpr double kAnalyticEpsilonValid = 0.01;

// Relative prominence a maximum of |E₁|² must show before it counts.
constexpr double kPeakProminence = 1e-6;

struct ParabolaPeak {
  double x;
  double y;
};

// Vertex of the parabola through three samples, computed in coordinates
// centred on the middle sample; falls back to the middle sample if the
// parabola is not concave.
ParabolaPeak parabola_peak(double x0, double y0, double x1, double y1, double x2, double y2) {
  const double h0 = x0 - x1;
  const double h2 = x2 - x1;
  const double s0 = (y0 - y1) / h0;
  const double s2 = (y2 - y1) / h2;
  const double a = (s2 - s0) / (h2 - h0);
  if (!(a < 0.0)) return {x1, y1};
  const double b = s2 - a * h2;
  const double u = std::clamp(-b / (2.0 * a), h0, h2);
  return {x1 + u, y1 + b * u + a * u * u};
}

void check_epsilon_range(double epsilon, bool allow_zero) {
  const bool ok = allow_zero ? epsilon >= 0.0 : epsilon > 0.0;
  if (!std::isfinite(epsilon) || !ok || epsilon > kAnalyticEpsilonMax) {
    throw OutOfValidityRegion("analytic prediction needs epsilon in " +
                              std::string(allow_zero ? "[0" : "(0") + ", 0.1]");
  }
}

}  // namespace

void SeedSpec::validate() const {
  if (!(std::isfinite(epsilon) && epsilon > 0.0)) {
    throw ValidationError("epsilon", "must be > 0");
  }
  if (!(phi0 > -kPi && phi0 <= kPi)) throw ValidationError("phi0", "must lie in (-pi, pi]");
}

FieldState seeded_initial_state(const SeedSpec& seed) {
  seed.validate();
  const Complex e = std::polar(std::sqrt(seed.epsilon), -0.5 * seed.phi0);
  return {1.0, 1.0, e, e};
}

std::string to_string(MetricSource s) {
  switch (s) {
    case MetricSource::kMeasured: return "measured";
    case MetricSource::kAnalyticWithPhase: return "analytic_with_phase";
    case MetricSource::kAnalyticNoPhase: return "analytic_no_phase";
  }
  return "?";
}

std::string to_string(Validity v) {
  switch (v) {
    case Validity::kOk: return "ok";
    case Validity::kExtrapolated: return "extrapolated";
    case Validity::kClamped: return "clamped";
  }
  return "?";
}

ConversionMetrics detect_conversion(const Trajectory& traj) {
  const auto& s = traj.samples;
  if (s.size() < 3) throw NoCycleFound("trajectory has fewer than three samples");

  std::vector<double> intensity(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) intensity[i] = std::norm(s[i].state.e1);
  const auto [lo, hi] = std::minmax_element(intensity.begin(), intensity.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw NoCycleFound("|E1|^2 is constant over the trajectory");
  const double delta = kPeakProminence * std::max(range, *hi);

  // Hysteresis scan: a peak needs a rise of `delta` before it and a fall of
  // `delta` after it, which rejects interpolation-level wiggles.
  std::size_t trough = 0;
  std::optional<std::size_t> candidate;
  std::optional<std::size_t> peak;
  for (std::size_t j = 1; j < s.size() && !peak; ++j) {
    if (!candidate) {
      if (intensity[j] < intensity[trough]) trough = j;
      if (intensity[j] > intensity[trough] + delta) candidate = j;
    } else if (intensity[j] > intensity[*candidate]) {
      candidate = j;
    } else if (intensity[j] < intensity[*candidate] - delta) {
      peak = candidate;
    }
  }
  if (!peak) {
    throw NoCycleFound("no maximum of |E1|^2 before zeta = " + std::to_string(s.back().zeta));
  }

  const std::size_t k = *peak;
  const ParabolaPeak top = parabola_peak(s[k - 1].zeta, intensity[k - 1], s[k].zeta, intensity[k],
                                         s[k + 1].zeta, intensity[k + 1]);
  double min_e = intensity[0];
  double max_pump = 0.0;
  for (std::size_t i = 0; i <= k + 1; ++i) {
    min_e = std::min(min_e, intensity[i]);
    max_pump = std::max(max_pump, std::norm(s[i].state.omega1));
  }
  const double max_e = std::max(top.y, intensity[k]);
  return {top.x - s.front().zeta, (max_e - min_e) / max_pump, MetricSource::kMeasured,
          Validity::kOk};
}

ConversionMetrics predict_with_phase(const SeedSpec& seed) {
  check_epsilon_range(seed.epsilon, /*allow_zero=*/true);
  const double c = std::cos(seed.phi0);
  if (!(1.0 + c > 1e-9)) {
    throw PhaseSingularity("conversion length diverges as phi0 -> pi");
  }
  const double eps = seed.epsilon;
  // Combined form of (1−c)/(1+c)·[1 − ε(1 − 3c − 2c²)/(1 − c)], finite at c = 1.
  double e = ((1.0 - c) - eps * (1.0 - 3.0 * c - 2.0 * c * c)) / (1.0 + c);
  const double length =
      eps > 0.0 ? 2.0 * kPi / (std::sqrt(eps) * (1.0 + c)) : std::numeric_limits<double>::infinity();

  Validity validity = eps > kAnalyticEpsilonValid ? Validity::kExtrapolated : Validity::kOk;
  if (e < 0.0 || e > 1.0) {
    e = std::clamp(e, 0.0, 1.0);
    validity = Validity::kClamped;
  }
  return {length, e, MetricSource::kAnalyticWithPhase, validity};
}

ConversionMetrics predict_no_phase(const SeedSpec& seed) {
  check_epsilon_range(seed.epsilon, /*allow_zero=*/false);
  const double c = std::cos(seed.phi0);
  if (!(c > 0.0)) {
    throw OutOfValidityRegion("no-phase prediction requires cos(phi0) > 0");
  }
  const double eps = seed.epsilon;
  return {2.0 * std::log(4.0 / (eps * eps * c)), 1.0 - eps * std::sqrt(c),
          MetricSource::kAnalyticNoPhase,
          eps > kAnalyticEpsilonValid ? Validity::kExtrapolated : Validity::kOk};
}

ConversionMetrics predict_for(const BackendSpec& spec, const SeedSpec& seed) {
  return spec.has_phase_terms() ? predict_with_phase(seed) : predict_no_phase(seed);
}

std::vector<double> log_grid(double eps_min, double eps_max, int points_per_decade) {
  if (!(eps_min > 0.0) || !(eps_max >= eps_min)) {
    throw ValidationError("eps_min", "need 0 < eps_min <= eps_max");
  }
  if (points_per_decade < 1) throw ValidationError("points_per_decade", "must be >= 1");
  const double lo = std::log10(eps_min);
  const double hi = std::log10(eps_max);
  const auto n = static_cast<int>(std::lround((hi - lo) * points_per_decade));
  if (n == 0) return {eps_min};
  std::vector<double> grid(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    grid[static_cast<std::size_t>(k)] = std::pow(10.0, lo + (hi - lo) * k / n);
  }
  grid.front() = eps_min;
  grid.back() = eps_max;
  return grid;
}

ConversionMetrics measure_conversion(const SeedSpec& seed, const BackendSpec& spec,
                                     const SystemParams& params, const PropagationGrid& grid,
                                     const SweepOptions& options) {
  const FieldState initial = seeded_initial_state(seed);
  double horizon = grid.zeta_max - grid.zeta_start;
  for (int attempt = 0;; ++attempt) {
    PropagationGrid g = grid;
    g.zeta_max = grid.zeta_start + horizon;
    g.sample_stride =
        std::max(grid.sample_stride, horizon / static_cast<double>(options.max_samples));
    try {
      return detect_conversion(integrate(initial, params, spec, g));
    } catch (const NoCycleFound&) {
      if (attempt >= options.max_horizon_doublings) throw;
    }
    horizon *= 2.0;
  }
}

SweepTable sweep_epsilon(std::span<const double> eps_grid, double phi0,
                         std::span<const BackendSpec> specs, const SystemParams& params,
                         const PropagationGrid& grid, const SweepOptions& options) {
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw ValidationError("eps_grid", "values must be > 0");
    if (i > 0 && !(eps_grid[i] > eps_grid[i - 1])) {
      throw ValidationError("eps_grid", "values must be strictly increasing");
    }
  }
  grid.validate();
  params.validate();

  SweepTable table;
  table.rows.resize(eps_grid.size() * specs.size());
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    for (std::size_t j = 0; j < specs.size(); ++j) {
      SweepRow& row = table.rows[i * specs.size() + j];
      row.epsilon = eps_grid[i];
      row.spec = specs[j];
    }
  }

  const auto run_row = [&](SweepRow& row) {
    const SeedSpec seed{row.epsilon, phi0};
    try {
      row.analytic = predict_for(row.spec, seed);
    } catch (const NumericalError&) {
      row.analytic.reset();
    }
    try {
      row.measured = measure_conversion(seed, row.spec, params, grid, options);
    } catch (const Error& e) {
      row.measured.reset();
      row.error = std::string(e.kind());
    }
  };

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t r = next++; r < table.rows.size(); r = next++) run_row(table.rows[r]);
  };
  const unsigned threads =
      std::clamp<unsigned>(options.threads, 1u, static_cast<unsigned>(std::max<std::size_t>(
                                                    1, table.rows.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return table;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return {};
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace lambda_mixer
