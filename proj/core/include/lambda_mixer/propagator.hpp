#pragma once

#include <string>
#include <vector>

#include "lambda_mixer/field_state.hpp"
#include "lambda_mixer/invariants.hpp"
#include "lambda_mixer/levelsys.hpp"

namespace lambda_mixer {

/// How the right-hand side dF/dζ is evaluated.
enum class Method {
  kClosedForm,          // transcribed coupled-mode equations
  kPertEigenGradient,   // −iκ ∂λ₀/∂F* of the reduced (second-order) eigenvalue
  kExactEigenGradient,  // −iκ ∂λ/∂F* of the tracked exact eigenvalue
};

struct BackendSpec {
  LevelModel model = LevelModel::kFourLevel;
  Method method = Method::kClosedForm;
  /// Keep the ac-Stark phase lines. Ignored by the five-level model (its
  /// reduced eigenvalue has none) and by the exact backend.
  bool include_phase_terms = true;

  /// True when the generating dynamics contain Stark phase terms.
  [[nodiscard]] bool has_phase_terms() const noexcept;
  /// Short identifier such as "four_level/closed_form".
  [[nodiscard]] std::string label() const;
};

std::string to_string(LevelModel m);
std::string to_string(Method m);

/// Integration window and accuracy along the moving coordinate ζ (units Δ/κ).
struct PropagationGrid {
  double zeta_start = 0.0;
  double zeta_max = 200.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.5;
  double sample_stride = 0.01;

  void validate() const;
};

struct TrajectorySample {
  double zeta = 0.0;
  FieldState state;
  InvariantValues invariants;
  /// Value of the eigenvalue that generates the dynamics (units Δ⁻¹Ω₀²).
  double lambda0 = 0.0;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
};

/// Coupled-mode equations of motion (κ, Δ from params).
///
///   dE₁/dζ = −iκ [|Ω₁|²Ω₁Ω₂E₂* − E₁²E₂Ω₁*Ω₂*] / (Δ D²)   − iκ |Ω₁|²(|Ω₂|² − |E₂|²) E₁ / (Δ D²)
///   dE₂/dζ = −iκ Ω₁Ω₂E₁* / (Δ D)                         + iκ |E₁|² E₂ / (Δ D)
///   dΩ₁/dζ =  iκ [Ω₁²Ω₂E₁*E₂* − |E₁|²E₁E₂Ω₂*] / (Δ D²)   + iκ |E₁|²(|Ω₂|² − |E₂|²) Ω₁ / (Δ D²)
///   dΩ₂/dζ = −iκ E₁E₂Ω₁* / (Δ D)                         + iκ |Ω₁|² Ω₂ / (Δ D)
///
/// with D = |Ω₁|² + |E₁|². The second column holds the ac-Stark phase terms,
/// dropped when `include_phase_terms` is false. Throws DegenerateDenominator.
[[nodiscard]] FieldDerivatives rhs_closed_form(const FieldState& state, const SystemParams& params,
                                               bool include_phase_terms);

/// dF/dζ = −iκ ∂λ/∂F* with λ chosen by `spec`. For the exact backend the branch
/// is selected against the bare ground state |1⟩; `integrate` tracks it instead.
[[nodiscard]] FieldDerivatives rhs_eigen_gradient(const FieldState& state,
                                                  const SystemParams& params,
                                                  const BackendSpec& spec);

/// Generating eigenvalue of `spec` at `state` (the real part for the exact
/// backend). It is conserved along exact trajectories.
[[nodiscard]] double generating_eigenvalue(const FieldState& state, const SystemParams& params,
                                           const BackendSpec& spec);

/// Adaptive Dormand–Prince 5(4) integration with dense output from
/// grid.zeta_start to grid.zeta_max. Samples are interpolated at multiples of
/// grid.sample_stride (plus zeta_max itself); the first sample is `initial`
/// verbatim. Throws StepSizeUnderflow, DegenerateDenominator, AmbiguousBranch.
[[nodiscard]] Trajectory integrate(const FieldState& initial, const SystemParams& params,
                                   const BackendSpec& spec, const PropagationGrid& grid);

}  // namespace lambda_mixer
