#pragma once

#include "lambda_mixer/field_state.hpp"

namespace lambda_mixer {

/// Constants of motion of the reduced field equations.
struct InvariantValues {
  double c1 = 0.0;  // |Ω₁|² + |E₁|²
  double c2 = 0.0;  // |Ω₂|² + |E₂|²
  double c3 = 0.0;  // |Ω₁|² − |Ω₂|²
  double c4 = 0.0;  // Re(Ω₁Ω₂E₁*E₂*), conserved only without Stark phase terms

  /// Sum of all four intensities (c1 + c2).
  [[nodiscard]] double total_intensity() const noexcept { return c1 + c2; }

  friend bool operator==(const InvariantValues&, const InvariantValues&) = default;
};

[[nodiscard]] InvariantValues invariants_of(const FieldState& state) noexcept;

/// Moduli below this make the relative phase undefined.
inline constexpr double kPhaseModulusFloor = 1e-15;

/// φ = arg Ω₁ + arg Ω₂ − arg E₁ − arg E₂ wrapped to (−π, π].
/// Throws UndefinedPhase if any modulus is below kPhaseModulusFloor.
[[nodiscard]] double relative_phase(const FieldState& state);

/// Wraps an angle to (−π, π].
[[nodiscard]] double wrap_phase(double angle) noexcept;

}  // namespace lambda_mixer
