#pragma once

#include <array>
#include <complex>
#include <string_view>

namespace lambda_mixer {

using Complex = std::complex<double>;

/// Identifies one of the four optical fields of the double-Λ scheme.
/// Ω₁, Ω₂ are the pumps; E₁, E₂ the generated (seeded) fields.
enum class Field { kOmega1, kOmega2, kE1, kE2 };

inline constexpr std::array<Field, 4> kAllFields{Field::kOmega1, Field::kOmega2, Field::kE1,
                                                 Field::kE2};

std::string_view to_string(Field f) noexcept;

/// Four complex amplitudes in the fixed order (Ω₁, Ω₂, E₁, E₂).
///
/// Used both for the field state itself (Rabi frequencies in units of the
/// reference pump amplitude) and for quantities with the same shape: derivatives
/// along ζ and Wirtinger gradients ∂λ/∂F*.
struct FieldVector {
  Complex omega1{};
  Complex omega2{};
  Complex e1{};
  Complex e2{};

  [[nodiscard]] Complex& operator[](Field f) noexcept;
  [[nodiscard]] const Complex& operator[](Field f) const noexcept;

  [[nodiscard]] bool is_finite() const noexcept;

  /// |Ω₁|² + |E₁|², the denominator shared by the reduced eigenvalue and the
  /// equations of motion.
  [[nodiscard]] double pump_pair_intensity() const noexcept {
    return std::norm(omega1) + std::norm(e1);
  }

  /// Largest component modulus.
  [[nodiscard]] double max_abs() const noexcept;

  FieldVector& operator+=(const FieldVector& o) noexcept;
  FieldVector& operator-=(const FieldVector& o) noexcept;
  FieldVector& operator*=(Complex s) noexcept;

  friend bool operator==(const FieldVector&, const FieldVector&) = default;
};

FieldVector operator+(FieldVector a, const FieldVector& b) noexcept;
FieldVector operator-(FieldVector a, const FieldVector& b) noexcept;
FieldVector operator*(Complex s, FieldVector v) noexcept;

using FieldState = FieldVector;
using FieldDerivatives = FieldVector;

/// Packs a field vector as (re, im) pairs in field order; the ODE state layout.
using PackedFields = std::array<double, 8>;

[[nodiscard]] PackedFields pack(const FieldVector& v) noexcept;
[[nodiscard]] FieldVector unpack(const PackedFields& p) noexcept;

/// Intensities below this are treated as an exact zero of |Ω₁|² + |E₁|².
inline constexpr double kDegenerateIntensity = 1e-300;

}  // namespace lambda_mixer
