#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lambda_mixer/errors.hpp"
#include "lambda_mixer/levelsys.hpp"
#include "lambda_mixer/validation.hpp"
#include "oracles.hpp"

using namespace lambda_mixer;

namespace {

constexpr double kPi = std::numbers::pi;

SystemParams lossless() {
  SystemParams p;
  p.gamma1 = p.gamma2 = 0.0;
  return p;
}

FieldState generic_state(double scale) {
  return Complex(scale) * FieldState{std::polar(1.0, 0.3), std::polar(0.8, -1.1),
                                     std::polar(0.6, 2.0), std::polar(0.7, 0.4)};
}

Complex ground_value(LevelModel model, const FieldState& f, const SystemParams& p) {
  const auto pairs = eig_exact(build_hamiltonian(model, f, p));
  return select_ground_branch(pairs, std::size_t{0}).value;
}

}  // namespace

TEST_SUITE("levelsys") {

TEST_CASE("four-level Hamiltonian of the bare atom is diagonal") {
  const ComplexMatrix h = build_hamiltonian_4({}, lossless());
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const Complex want = (r == 2 && c == 2) ? Complex(1.0) : Complex(0.0);
      CHECK(h(r, c) == want);
    }
  }
}

TEST_CASE("four-level Hamiltonian places the Omega2 coupling on the 1-3 transition") {
  SystemParams p = lossless();
  p.gamma2 = 0.01;
  FieldState f;
  f.omega2 = 1.0;
  const ComplexMatrix h = build_hamiltonian_4(f, p);
  // States |1>..|4> sit at indices 0..3.
  CHECK(h(0, 2) == Complex(-1.0));
  CHECK(h(2, 0) == Complex(-1.0));
  CHECK(h(2, 2) == Complex(1.0, -0.01));
  int nonzero_off_diagonal = 0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) nonzero_off_diagonal += (r != c && h(r, c) != Complex(0.0));
  }
  CHECK(nonzero_off_diagonal == 2);
}

TEST_CASE("four-level couplings use conjugates above the diagonal") {
  const FieldState f = generic_state(1.0);
  const ComplexMatrix h = build_hamiltonian_4(f, SystemParams{});
  CHECK(h(0, 2) == -std::conj(f.omega2));
  CHECK(h(0, 3) == -std::conj(f.e1));
  CHECK(h(1, 2) == -std::conj(f.e2));
  CHECK(h(1, 3) == -std::conj(f.omega1));
  CHECK(h(2, 0) == -f.omega2);
  CHECK(h(3, 0) == -f.e1);
  CHECK(h(2, 1) == -f.e2);
  CHECK(h(3, 1) == -f.omega1);
  CHECK(h(3, 3) == Complex(0.0, -0.01));
}

TEST_CASE("eigenvalue sum equals the trace for random four-level states") {
  std::mt19937_64 rng(11);
  SystemParams p;
  p.gamma1 = 0.03;
  p.gamma2 = 0.02;
  for (int i = 0; i < 20; ++i) {
    const auto roots = oracle::brute_force_eigenvalues(build_hamiltonian_4(random_field_state(rng), p));
    Complex sum = 0.0;
    for (const Complex& r : roots) sum += r;
    CHECK(std::abs(sum - Complex(1.0, -0.05)) < 1e-10);
  }
}

TEST_CASE("five-level Hamiltonian of the bare atom") {
  const ComplexMatrix h = build_hamiltonian_5({}, lossless());
  const Complex diag[] = {0.0, 0.0, 1.0, -1.0, 0.0};
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) CHECK(h(r, c) == (r == c ? diag[r] : Complex(0.0)));
  }
}

TEST_CASE("five-level Hamiltonian flips the sign of E2 on one split level") {
  FieldState f;
  f.e2 = 1.0;
  const ComplexMatrix h = build_hamiltonian_5(f, lossless());
  // Row |2>, columns of the split pair.
  CHECK(h(1, 2) == Complex(-1.0));
  CHECK(h(1, 3) == Complex(1.0));
  CHECK(h(2, 1) == Complex(-1.0));
  CHECK(h(3, 1) == Complex(1.0));
}

TEST_CASE("lossless five-level Hamiltonian is traceless") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 20; ++i) {
    const ComplexMatrix h = build_hamiltonian_5(random_field_state(rng), lossless());
    CHECK(std::abs(h.trace()) == doctest::Approx(0.0));
    const auto roots = oracle::brute_force_eigenvalues(h);
    Complex sum = 0.0;
    for (const Complex& r : roots) sum += r;
    CHECK(std::abs(sum) < 1e-10);
  }
}

TEST_CASE("shared-strength couplings scale the split pair by 1/sqrt2") {
  SystemParams p = lossless();
  p.five_level_coupling = FiveLevelCoupling::kSharedStrength;
  FieldState f;
  f.omega2 = 1.0;
  const ComplexMatrix h = build_hamiltonian_5(f, p);
  CHECK(h(0, 2).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(h(0, 3).real() == doctest::Approx(-1.0 / std::sqrt(2.0)));
}

TEST_CASE("as-printed five-level couplings double the mixing eigenvalue") {
  const FieldState f = generic_state(0.005);
  const double pert = lambda0_pert_5(f, 1.0);
  SystemParams printed = lossless();
  SystemParams shared = lossless();
  shared.five_level_coupling = FiveLevelCoupling::kSharedStrength;
  CHECK(ground_value(LevelModel::kFiveLevel, f, printed).real() / pert ==
        doctest::Approx(2.0).epsilon(1e-3));
  CHECK(ground_value(LevelModel::kFiveLevel, f, shared).real() / pert ==
        doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("eig_exact on a diagonal matrix returns coordinate eigenvectors") {
  const auto pairs = eig_exact(build_hamiltonian_4({}, lossless()));
  REQUIRE(pairs.size() == 4);
  int ones = 0;
  for (const auto& p : pairs) {
    CHECK(p.value.imag() == 0.0);
    ones += p.value == Complex(1.0);
    double max_component = 0.0;
    for (const Complex& c : p.vector) max_component = std::max(max_component, std::abs(c));
    CHECK(max_component == doctest::Approx(1.0));
  }
  CHECK(ones == 1);
}

TEST_CASE("single coupling reproduces the two-level avoided crossing") {
  FieldState f;
  f.omega2 = Complex(0.3, 0.2);
  const double g2 = std::norm(f.omega2);
  const auto pairs = eig_exact(build_hamiltonian_4(f, lossless()));
  std::vector<Complex> got;
  for (const auto& p : pairs) got.push_back(p.value);
  const double root = std::sqrt(1.0 + 4.0 * g2);
  CHECK(oracle::multiset_distance(got, {(1.0 + root) / 2.0, (1.0 - root) / 2.0, 0.0, 0.0}) <
        1e-12);
}

TEST_CASE("eig_exact agrees with the characteristic-polynomial roots") {
  std::mt19937_64 rng(13);
  SystemParams p;
  for (const LevelModel model : {LevelModel::kFourLevel, LevelModel::kFiveLevel}) {
    for (int i = 0; i < 25; ++i) {
      const ComplexMatrix h = build_hamiltonian(model, random_field_state(rng), p);
      const auto pairs = eig_exact(h);
      std::vector<Complex> got;
      for (const auto& e : pairs) {
        got.push_back(e.value);
        double norm2 = 0.0;
        for (const Complex& c : e.vector) norm2 += std::norm(c);
        CHECK(std::sqrt(norm2) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(e.residual <= 1e-10 * h.frobenius_norm());
      }
      CHECK(oracle::multiset_distance(got, oracle::brute_force_eigenvalues(h)) < 1e-9);
      Complex sum = 0.0;
      for (const Complex& v : got) sum += v;
      CHECK(std::abs(sum - h.trace()) <= 1e-12 * std::max(1.0, std::abs(h.trace())));
    }
  }
}

TEST_CASE("ground branch of the bare atom is |1>") {
  const auto pairs = eig_exact(build_hamiltonian_4({}, lossless()));
  const EigenResult g = select_ground_branch(pairs, std::size_t{0});
  CHECK(g.value == Complex(0.0));
  CHECK(std::abs(g.vector[0]) == doctest::Approx(1.0));
}

TEST_CASE("seed-free four-level ground branch carries the pump Stark shift") {
  FieldState f{0.01, 0.01, 0.0, 0.0};
  const Complex v = ground_value(LevelModel::kFourLevel, f, SystemParams{});
  CHECK(v.real() == doctest::Approx(-1e-4).epsilon(1e-3));
  CHECK(ground_value(LevelModel::kFourLevel, f, lossless()).real() ==
        doctest::Approx(-1e-4).epsilon(1e-3));
}

TEST_CASE("seed-free five-level ground branch has no Stark shift") {
  FieldState f{0.01, 0.01, 0.0, 0.0};
  for (const auto coupling : {FiveLevelCoupling::kAsPrinted, FiveLevelCoupling::kSharedStrength}) {
    SystemParams p = lossless();
    p.five_level_coupling = coupling;
    CHECK(std::abs(ground_value(LevelModel::kFiveLevel, f, p)) < 1e-10);
  }
}

TEST_CASE("equal overlaps are reported as an ambiguous branch") {
  const auto pairs = eig_exact(build_hamiltonian_4({}, lossless()));
  const double r = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> reference{r, r, 0.0, 0.0};
  CHECK_THROWS_AS((void)select_ground_branch(pairs, reference), AmbiguousBranch);
}

TEST_CASE("branch tracking stays continuous along a slow path") {
  GroundBranchTracker tracker(LevelModel::kFourLevel, SystemParams{});
  FieldState f{1.0, 1.0, std::polar(0.1, -0.4), std::polar(0.1, -0.4)};
  tracker.accept(tracker.evaluate(f));
  for (int i = 0; i < 200; ++i) {
    f.e1 *= std::polar(1.0 + 4e-4, 5e-4);
    f.omega2 *= std::polar(1.0 - 3e-4, -2e-4);
    const auto e = tracker.evaluate(f);
    CHECK(e.overlap > 0.999);
    tracker.accept(e);
  }
}

TEST_CASE("reduced four-level eigenvalue examples") {
  CHECK(lambda0_pert_4({0.1, 0.1, 0.0, 0.0}, 1.0) == doctest::Approx(-0.01));
  CHECK(lambda0_pert_4({0.7, 0.7, 0.7, 0.7}, 1.0) == doctest::Approx(0.0));
  CHECK(lambda0_pert_4({0.1, 0.1, 0.0, 0.0}, 2.0) == doctest::Approx(-0.005));
}

TEST_CASE("reduced four-level eigenvalue matches the exact branch to third order") {
  const FieldState f{0.1, Complex(0.0, 0.1), 0.05, 0.05};
  const SystemParams p = lossless();
  const double err1 = std::abs(ground_value(LevelModel::kFourLevel, f, p) - lambda0_pert_4(f, 1.0));
  const FieldState half = Complex(0.5) * f;
  const double err2 =
      std::abs(ground_value(LevelModel::kFourLevel, half, p) - lambda0_pert_4(half, 1.0));
  CHECK(err1 < 2e-2 * std::abs(lambda0_pert_4(f, 1.0)));
  CHECK(err1 / err2 > 8.0);
}

TEST_CASE("reduced eigenvalues reject an empty pump pair") {
  const FieldState f{0.0, 1.0, 0.0, 1.0};
  CHECK_THROWS_AS((void)lambda0_pert_4(f, 1.0), DegenerateDenominator);
  CHECK_THROWS_AS((void)lambda0_pert_5(f, 1.0), DegenerateDenominator);
}

TEST_CASE("reduced five-level eigenvalue examples") {
  CHECK(lambda0_pert_5({0.3, Complex(0.1, 0.2), 0.0, 0.0}, 1.0) == 0.0);
  const double a = 0.4;
  CHECK(lambda0_pert_5({a, a, a, a}, 1.0) == doctest::Approx(a * a));
  // Product phase of pi on one pump.
  CHECK(lambda0_pert_5({std::polar(a, kPi), a, a, a}, 1.0) == doctest::Approx(-a * a));
}

TEST_CASE("five-level eigenvalue is the four-level one without the Stark bracket") {
  std::mt19937_64 rng(14);
  for (int i = 0; i < 100; ++i) {
    const FieldState f = random_field_state(rng);
    const double d = std::norm(f.omega1) + std::norm(f.e1);
    const double stark =
        (std::norm(f.omega1) * std::norm(f.omega2) + std::norm(f.e1) * std::norm(f.e2)) / d;
    CHECK(lambda0_pert_4(f, 1.0) + stark == doctest::Approx(lambda0_pert_5(f, 1.0)));
  }
}

TEST_CASE("Wirtinger gradients at the seed-free point") {
  const FieldState f{1.0, 1.0, 0.0, 0.0};
  const auto l5 = [](const FieldState& x) { return lambda0_pert_5(x, 1.0); };
  const auto l4 = [](const FieldState& x) { return lambda0_pert_4(x, 1.0); };
  CHECK(std::abs(grad_conjugate(l5, f, Field::kE1)) < 1e-9);
  CHECK(std::abs(grad_conjugate(l4, f, Field::kE2)) < 1e-9);
  const Complex g = grad_conjugate(l4, f, Field::kOmega2);
  CHECK(g.real() == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(std::abs(g.imag()) < 1e-9);
  CHECK(lambda0_pert_4_gradient(f, 1.0).omega2 == Complex(-1.0));
}

TEST_CASE("closed-form gradients agree with finite differences") {
  std::mt19937_64 rng(15);
  for (int i = 0; i < 100; ++i) {
    const FieldState f = random_field_state(rng);
    const FieldVector g4 = lambda0_pert_4_gradient(f, 1.0);
    const FieldVector g5 = lambda0_pert_5_gradient(f, 1.0);
    for (const Field which : kAllFields) {
      const Complex fd4 =
          grad_conjugate([](const FieldState& x) { return lambda0_pert_4(x, 1.0); }, f, which);
      const Complex fd5 =
          grad_conjugate([](const FieldState& x) { return lambda0_pert_5(x, 1.0); }, f, which);
      CHECK(std::abs(g4[which] - fd4) <= 1e-6 * std::max(1.0, g4.max_abs()));
      CHECK(std::abs(g5[which] - fd5) <= 1e-6 * std::max(1.0, g5.max_abs()));
    }
  }
}

TEST_CASE("exact-branch gradient matches finite differences of the tracked eigenvalue") {
  std::mt19937_64 rng(16);
  for (const LevelModel model : {LevelModel::kFourLevel, LevelModel::kFiveLevel}) {
    SystemParams p;
    p.five_level_coupling = FiveLevelCoupling::kSharedStrength;
    const GroundBranchTracker tracker(model, p);
    for (int i = 0; i < 20; ++i) {
      FieldState f = random_field_state(rng, 0.5, 1.5);
      f.omega1 = 1.0;
      f.omega2 = 1.0;
      const auto e = tracker.evaluate(f);
      for (const Field which : kAllFields) {
        const Complex fd = grad_conjugate(
            [&](const FieldState& x) { return tracker.evaluate(x).value; }, f, which);
        CHECK(std::abs(e.gradient[which] - fd) <= 1e-5 * std::max(1.0, e.gradient.max_abs()));
      }
    }
  }
}

TEST_CASE("exact four-level gradient approaches the reduced one as the field scale drops") {
  const FieldState f{1.0, 1.0, std::polar(0.1, -0.4), std::polar(0.1, -0.4)};
  const FieldVector reduced = lambda0_pert_4_gradient(f, 1.0);
  double previous = 1.0;
  for (const double scale : {0.04, 0.02, 0.01}) {
    SystemParams p = lossless();
    p.omega_over_delta = scale;
    const FieldVector exact = GroundBranchTracker(LevelModel::kFourLevel, p).evaluate(f).gradient;
    const double err = (exact - reduced).max_abs() / reduced.max_abs();
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("with decay the exact eigenvalue gains an imaginary part of relative size gamma2") {
  SystemParams p;  // γ₁ = γ₂ = 0.01
  for (const double s : {0.01, 0.005, 0.0025}) {
    const Complex v = ground_value(LevelModel::kFourLevel, generic_state(s), p);
    CHECK(v.imag() / v.real() == doctest::Approx(p.gamma2 / p.delta).epsilon(0.05));
  }
}

TEST_CASE("decay enters the ground branch only at third order in the field scale" *
          doctest::may_fail()) {
  // Literal transparency bound |Im lambda| <= C s^3. The |3> admixture makes
  // Im lambda = (gamma2/Delta) Re lambda + ..., i.e. second order, so the
  // fitted exponent comes out near 2.
  SystemParams p;
  std::vector<double> xs;
  std::vector<double> ys;
  for (const double s : {0.01, 0.005, 0.0025}) {
    xs.push_back(std::log(s));
    ys.push_back(std::log(std::abs(ground_value(LevelModel::kFourLevel, generic_state(s), p).imag())));
  }
  const double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
  MESSAGE("fitted exponent of |Im lambda| vs s: " << slope);
  CHECK(slope >= 2.8);
}

}  // TEST_SUITE
