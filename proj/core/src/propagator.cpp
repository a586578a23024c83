#include "lambda_mixer/propagator.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <optional>

#include "lambda_mixer/errors.hpp"

namespace lambda_mixer {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr Complex kI{0.0, 1.0};

// Halvings allowed after AmbiguousBranch before giving up.
constexpr int kMaxBranchHalvings = 40;

double checked_denominator(const FieldState& s) {
  const double d = s.pump_pair_intensity();
  if (!(d >= kDegenerateIntensity)) {
    throw DegenerateDenominator("|Omega1|^2 + |E1|^2 vanished during propagation");
  }
  return d;
}

FieldDerivatives from_gradient(const FieldVector& gradient, double kappa) {
  return Complex(0.0, -kappa) * gradient;
}

bool uses_mixing_only(const BackendSpec& spec) {
  return spec.model == LevelModel::kFiveLevel || !spec.include_phase_terms;
}

}  // namespace

bool BackendSpec::has_phase_terms() const noexcept {
  if (model == LevelModel::kFiveLevel) return false;
  if (method == Method::kExactEigenGradient) return true;
  return include_phase_terms;
}

std::string to_string(LevelModel m) {
  return m == LevelModel::kFourLevel ? "four_level" : "five_level";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kClosedForm: return "closed_form";
    case Method::kPertEigenGradient: return "pert_eigen_gradient";
    case Method::kExactEigenGradient: return "exact_eigen_gradient";
  }
  return "?";
}

std::string BackendSpec::label() const { return to_string(model) + "/" + to_string(method); }

void PropagationGrid::validate() const {
  const auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ValidationError(key, what);
  };
  require(std::isfinite(zeta_start), "zeta_start", "must be finite");
  require(std::isfinite(zeta_max) && zeta_max > zeta_start, "zeta_max",
          "must be finite and > zeta_start");
  require(rel_tol >= 1e-14 && rel_tol <= 1e-3, "rel_tol", "must lie in [1e-14, 1e-3]");
  require(std::isfinite(abs_tol) && abs_tol > 0.0, "abs_tol", "must be > 0");
  require(std::isfinite(max_step) && max_step > 0.0, "max_step", "must be > 0");
  require(std::isfinite(sample_stride) && sample_stride > 0.0, "sample_stride", "must be > 0");
}

FieldDerivatives rhs_closed_form(const FieldState& s, const SystemParams& params,
                                 bool include_phase_terms) {
  const double d = checked_denominator(s);
  const double k = params.kappa / params.delta;
  const double d2 = d * d;
  const Complex& o1 = s.omega1;
  const Complex& o2 = s.omega2;
  const Complex& e1 = s.e1;
  const Complex& e2 = s.e2;
  const double i_o1 = std::norm(o1);
  const double i_o2 = std::norm(o2);
  const double i_e1 = std::norm(e1);
  const double i_e2 = std::norm(e2);

  FieldDerivatives out;
  out.e1 = -kI * k *
           (std::conj(o1) * o1 * o1 * o2 * std::conj(e2) - e1 * e1 * e2 * std::conj(o1) *
                                                                std::conj(o2)) /
           d2;
  out.e2 = -kI * k * o1 * o2 * std::conj(e1) / d;
  out.omega1 = kI * k *
               (o1 * o1 * o2 * std::conj(e1) * std::conj(e2) - i_e1 * e1 * e2 * std::conj(o2)) /
               d2;
  out.omega2 = -kI * k * e1 * e2 * std::conj(o1) / d;

  if (include_phase_terms) {
    out.e1 += -kI * k * i_o1 * (i_o2 - i_e2) / d2 * e1;
    out.e2 += kI * k * i_e1 / d * e2;
    out.omega1 += kI * k * i_e1 * (i_o2 - i_e2) / d2 * o1;
    out.omega2 += kI * k * i_o1 / d * o2;
  }
  return out;
}

FieldDerivatives rhs_eigen_gradient(const FieldState& state, const SystemParams& params,
                                    const BackendSpec& spec) {
  switch (spec.method) {
    case Method::kClosedForm:
      return rhs_closed_form(state, params, !uses_mixing_only(spec));
    case Method::kPertEigenGradient: {
      const FieldVector g = uses_mixing_only(spec) ? lambda0_pert_5_gradient(state, params.delta)
                                                   : lambda0_pert_4_gradient(state, params.delta);
      return from_gradient(g, params.kappa);
    }
    case Method::kExactEigenGradient: {
      const GroundBranchTracker tracker(spec.model, params);
      return from_gradient(tracker.evaluate(state).gradient, params.kappa);
    }
  }
  return {};
}

double generating_eigenvalue(const FieldState& state, const SystemParams& params,
                             const BackendSpec& spec) {
  if (spec.method == Method::kExactEigenGradient) {
    const GroundBranchTracker tracker(spec.model, params);
    return tracker.evaluate(state).value.real();
  }
  return uses_mixing_only(spec) ? lambda0_pert_5(state, params.delta)
                                : lambda0_pert_4(state, params.delta);
}

Trajectory integrate(const FieldState& initial, const SystemParams& params,
                     const BackendSpec& spec, const PropagationGrid& grid) {
  grid.validate();
  params.validate();
  if (!initial.is_finite()) throw ValidationError("initial", "field amplitudes must be finite");
  checked_denominator(initial);

  const bool exact = spec.method == Method::kExactEigenGradient;
  std::optional<GroundBranchTracker> tracker;
  if (exact) {
    tracker.emplace(spec.model, params);
    tracker->accept(tracker->evaluate(initial));
  }

  const auto system = [&](const PackedFields& x, PackedFields& dxdt, double /*zeta*/) {
    const FieldState s = unpack(x);
    FieldDerivatives d;
    if (exact) {
      d = from_gradient(tracker->evaluate(s).gradient, params.kappa);
    } else if (spec.method == Method::kClosedForm) {
      d = rhs_closed_form(s, params, !uses_mixing_only(spec));
    } else {
      d = rhs_eigen_gradient(s, params, spec);
    }
    dxdt = pack(d);
  };

  const auto lambda_at = [&](const FieldState& s) {
    return exact ? tracker->evaluate(s).value.real() : generating_eigenvalue(s, params, spec);
  };
  const auto make_sample = [&](double zeta, const FieldState& s) {
    return TrajectorySample{zeta, s, invariants_of(s), lambda_at(s)};
  };

  Trajectory traj;
  const double span = grid.zeta_max - grid.zeta_start;
  const auto n_strides = static_cast<std::size_t>(std::floor(span / grid.sample_stride + 1e-9));
  traj.samples.reserve(n_strides + 2);
  traj.samples.push_back(make_sample(grid.zeta_start, initial));

  using Stepper = odeint::runge_kutta_dopri5<PackedFields>;
  auto dense = odeint::make_dense_output(grid.abs_tol, grid.rel_tol, grid.max_step, Stepper());
  double dt = std::min(grid.max_step, 1e-2);
  dense.initialize(pack(initial), grid.zeta_start, dt);

  double accepted_t = grid.zeta_start;
  PackedFields accepted_x = pack(initial);
  int halvings = 0;

  const auto advance = [&] {
    const double min_step = 1e-14 * std::max(1.0, std::abs(dense.current_time()));
    try {
      dense.do_step(system);
    } catch (const AmbiguousBranch&) {
      if (++halvings > kMaxBranchHalvings) {
        throw StepSizeUnderflow("branch ambiguity persists after step halving at zeta = " +
                                std::to_string(accepted_t));
      }
      dt = 0.5 * std::max(dense.current_time_step(), min_step);
      dense.initialize(accepted_x, accepted_t, dt);
      return;
    } catch (const odeint::odeint_error& e) {
      throw StepSizeUnderflow(std::string("step size control failed: ") + e.what());
    }
    accepted_t = dense.current_time();
    accepted_x = dense.current_state();
    if (!unpack(accepted_x).is_finite()) {
      throw StepSizeUnderflow("non-finite state at zeta = " + std::to_string(accepted_t));
    }
    if (dense.current_time_step() < min_step) {
      throw StepSizeUnderflow("step size underflow at zeta = " + std::to_string(accepted_t));
    }
    if (exact) {
      tracker->accept(tracker->evaluate(unpack(accepted_x)));
      halvings = 0;
    }
  };

  PackedFields x{};
  const auto emit = [&](double zeta) {
    while (dense.current_time() < zeta) advance();
    dense.calc_state(zeta, x);
    traj.samples.push_back(make_sample(zeta, unpack(x)));
  };

  for (std::size_t k = 1; k <= n_strides; ++k) {
    emit(grid.zeta_start + static_cast<double>(k) * grid.sample_stride);
  }
  if (grid.zeta_max - traj.samples.back().zeta > 1e-9 * grid.sample_stride) emit(grid.zeta_max);
  return traj;
}

}  // namespace lambda_mixer
