#include "lambda_mixer/invariants.hpp"

#include <cmath>
#include <numbers>

#include "lambda_mixer/errors.hpp"

namespace lambda_mixer {

InvariantValues invariants_of(const FieldState& s) noexcept {
  const double o1 = std::norm(s.omega1);
  const double o2 = std::norm(s.omega2);
  const double e1 = std::norm(s.e1);
  const double e2 = std::norm(s.e2);
  const Complex x = s.omega1 * s.omega2 * std::conj(s.e1) * std::conj(s.e2);
  return {o1 + e1, o2 + e2, o1 - o2, x.real()};
}

double wrap_phase(double angle) noexcept {
  constexpr double pi = std::numbers::pi;
  double r = std::remainder(angle, 2.0 * pi);  // [−π, π]
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

double relative_phase(const FieldState& s) {
  for (Field f : kAllFields) {
    if (std::abs(s[f]) < kPhaseModulusFloor) {
      throw UndefinedPhase("relative phase undefined: |" + std::string(to_string(f)) +
                           "| is zero");
    }
  }
  return wrap_phase(std::arg(s.omega1) + std::arg(s.omega2) - std::arg(s.e1) - std::arg(s.e2));
}

}  // namespace lambda_mixer
