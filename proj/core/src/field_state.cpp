#include "lambda_mixer/field_state.hpp"

#include <algorithm>
#include <cmath>

namespace lambda_mixer {

std::string_view to_string(Field f) noexcept {
  switch (f) {
    case Field::kOmega1: return "omega1";
    case Field::kOmega2: return "omega2";
    case Field::kE1: return "e1";
    case Field::kE2: return "e2";
  }
  return "?";
}

Complex& FieldVector::operator[](Field f) noexcept {
  switch (f) {
    case Field::kOmega1: return omega1;
    case Field::kOmega2: return omega2;
    case Field::kE1: return e1;
    case Field::kE2: break;
  }
  return e2;
}

const Complex& FieldVector::operator[](Field f) const noexcept {
  return const_cast<FieldVector&>(*this)[f];
}

bool FieldVector::is_finite() const noexcept {
  const auto ok = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  return ok(omega1) && ok(omega2) && ok(e1) && ok(e2);
}

double FieldVector::max_abs() const noexcept {
  return std::max({std::abs(omega1), std::abs(omega2), std::abs(e1), std::abs(e2)});
}

FieldVector& FieldVector::operator+=(const FieldVector& o) noexcept {
  omega1 += o.omega1;
  omega2 += o.omega2;
  e1 += o.e1;
  e2 += o.e2;
  return *this;
}

FieldVector& FieldVector::operator-=(const FieldVector& o) noexcept {
  omega1 -= o.omega1;
  omega2 -= o.omega2;
  e1 -= o.e1;
  e2 -= o.e2;
  return *this;
}

FieldVector& FieldVector::operator*=(Complex s) noexcept {
  omega1 *= s;
  omega2 *= s;
  e1 *= s;
  e2 *= s;
  return *this;
}

FieldVector operator+(FieldVector a, const FieldVector& b) noexcept { return a += b; }
FieldVector operator-(FieldVector a, const FieldVector& b) noexcept { return a -= b; }
FieldVector operator*(Complex s, FieldVector v) noexcept { return v *= s; }

PackedFields pack(const FieldVector& v) noexcept {
  return {v.omega1.real(), v.omega1.imag(), v.omega2.real(), v.omega2.imag(),
          v.e1.real(),     v.e1.imag(),     v.e2.real(),     v.e2.imag()};
}

FieldVector unpack(const PackedFields& p) noexcept {
  return {{p[0], p[1]}, {p[2], p[3]}, {p[4], p[5]}, {p[6], p[7]}};
}

}  // namespace lambda_mixer
