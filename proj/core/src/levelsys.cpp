#include "lambda_mixer/levelsys.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <string>

#include "lambda_mixer/errors.hpp"

namespace lambda_mixer {

namespace {

double split_pair_weight(const SystemParams& params) {
  return params.five_level_coupling == FiveLevelCoupling::kSharedStrength ? 1.0 / std::sqrt(2.0)
                                                                           : 1.0;
}

double checked_denominator(const FieldState& fields) {
  const double d = fields.pump_pair_intensity();
  if (!(d >= kDegenerateIntensity)) {
    throw DegenerateDenominator("|Omega1|^2 + |E1|^2 vanishes; the dark state is undefined");
  }
  return d;
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd out(m.dim(), m.dim());
  for (int r = 0; r < m.dim(); ++r) {
    for (int c = 0; c < m.dim(); ++c) out(r, c) = m(r, c);
  }
  return out;
}

// Pieces of the reduced eigenvalue N/D with N = mixing − stark.
struct ReducedTerms {
  double denominator;
  double mixing;  // Ω₁Ω₂E₁*E₂* + c.c.
  double stark;   // |Ω₁|²|Ω₂|² + |E₁|²|E₂|²
};

ReducedTerms reduced_terms(const FieldState& f) {
  const Complex x = f.omega1 * f.omega2 * std::conj(f.e1) * std::conj(f.e2);
  return {checked_denominator(f), 2.0 * x.real(),
          std::norm(f.omega1) * std::norm(f.omega2) + std::norm(f.e1) * std::norm(f.e2)};
}

// Quotient rule for ∂(N/D)/∂F* with D = |Ω₁|² + |E₁|², so ∂D/∂Ω₁* = Ω₁ and
// ∂D/∂E₁* = E₁.
FieldVector quotient_gradient(const FieldState& f, const FieldVector& dn, double numerator,
                              double denominator) {
  FieldVector g = (1.0 / denominator) * dn;
  const double q = numerator / (denominator * denominator);
  g.omega1 -= q * f.omega1;
  g.e1 -= q * f.e1;
  return g;
}

FieldVector mixing_numerator_gradient(const FieldState& f) {
  const Complex a = f.omega1 * f.omega2;
  const Complex b = f.e1 * f.e2;
  return {std::conj(f.omega2) * b, std::conj(f.omega1) * b, a * std::conj(f.e2),
          a * std::conj(f.e1)};
}

FieldVector stark_numerator_gradient(const FieldState& f) {
  return {f.omega1 * std::norm(f.omega2), f.omega2 * std::norm(f.omega1), f.e1 * std::norm(f.e2),
          f.e2 * std::norm(f.e1)};
}

}  // namespace

void SystemParams::validate() const {
  const auto require = [](bool ok, const char* key, const char* what) {
    if (!ok) throw ValidationError(key, what);
  };
  require(std::isfinite(delta) && delta > 0.0, "delta", "must be > 0");
  require(std::isfinite(gamma1) && gamma1 >= 0.0, "gamma1", "must be >= 0");
  require(std::isfinite(gamma2) && gamma2 >= 0.0, "gamma2", "must be >= 0");
  require(std::isfinite(kappa) && kappa > 0.0, "kappa", "must be > 0");
  require(omega_over_delta > 0.0 && omega_over_delta < 0.2, "omega_over_delta",
          "must lie in (0, 0.2)");
}

ComplexMatrix::ComplexMatrix(int dim)
    : dim_(dim), entries_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim)) {}

Complex ComplexMatrix::trace() const noexcept {
  Complex t{};
  for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const noexcept {
  return std::sqrt(std::accumulate(entries_.begin(), entries_.end(), 0.0,
                                   [](double s, Complex z) { return s + std::norm(z); }));
}

bool ComplexMatrix::is_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

std::vector<Complex> ComplexMatrix::apply(std::span<const Complex> v) const {
  std::vector<Complex> out(static_cast<std::size_t>(dim_));
  for (int r = 0; r < dim_; ++r) {
    Complex s{};
    for (int c = 0; c < dim_; ++c) s += (*this)(r, c) * v[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = s;
  }
  return out;
}

ComplexMatrix build_hamiltonian_4(const FieldState& f, const SystemParams& p) {
  ComplexMatrix h(4);
  h(0, 2) = -std::conj(f.omega2);
  h(0, 3) = -std::conj(f.e1);
  h(1, 2) = -std::conj(f.e2);
  h(1, 3) = -std::conj(f.omega1);
  h(2, 0) = -f.omega2;
  h(2, 1) = -f.e2;
  h(3, 0) = -f.e1;
  h(3, 1) = -f.omega1;
  h(2, 2) = Complex(p.delta, -p.gamma2);
  h(3, 3) = Complex(0.0, -p.gamma1);
  return h;
}

ComplexMatrix build_hamiltonian_5(const FieldState& f, const SystemParams& p) {
  const double w = split_pair_weight(p);
  // Bracketed matrix first, then the overall minus sign.
  ComplexMatrix m(5);
  m(0, 2) = w * std::conj(f.omega2);
  m(0, 3) = w * std::conj(f.omega2);
  m(0, 4) = std::conj(f.e1);
  m(1, 2) = w * std::conj(f.e2);
  m(1, 3) = -w * std::conj(f.e2);
  m(1, 4) = std::conj(f.omega1);
  m(2, 0) = w * f.omega2;
  m(2, 1) = w * f.e2;
  m(3, 0) = w * f.omega2;
  m(3, 1) = -w * f.e2;
  m(4, 0) = f.e1;
  m(4, 1) = f.omega1;
  m(2, 2) = Complex(-p.delta, -p.gamma2);
  m(3, 3) = Complex(p.delta, -p.gamma2);
  m(4, 4) = Complex(0.0, -p.gamma1);

  ComplexMatrix h(5);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) h(r, c) = -m(r, c);
  }
  return h;
}

ComplexMatrix build_hamiltonian(LevelModel model, const FieldState& fields,
                                const SystemParams& params) {
  return model == LevelModel::kFourLevel ? build_hamiltonian_4(fields, params)
                                         : build_hamiltonian_5(fields, params);
}

ComplexMatrix hamiltonian_conjugate_derivative(LevelModel model, Field which,
                                               const SystemParams& params) {
  if (model == LevelModel::kFourLevel) {
    ComplexMatrix d(4);
    switch (which) {
      case Field::kOmega1: d(1, 3) = -1.0; break;
      case Field::kOmega2: d(0, 2) = -1.0; break;
      case Field::kE1: d(0, 3) = -1.0; break;
      case Field::kE2: d(1, 2) = -1.0; break;
    }
    return d;
  }
  const double w = split_pair_weight(params);
  ComplexMatrix d(5);
  switch (which) {
    case Field::kOmega1: d(1, 4) = -1.0; break;
    case Field::kOmega2:
      d(0, 2) = -w;
      d(0, 3) = -w;
      break;
    case Field::kE1: d(0, 4) = -1.0; break;
    case Field::kE2:
      d(1, 2) = -w;
      d(1, 3) = w;
      break;
  }
  return d;
}

EigenSystem eig_system(const ComplexMatrix& m) {
  if (m.dim() < 1) throw ConvergenceFailure("empty matrix");
  const Eigen::MatrixXcd a = to_eigen(m);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceFailure("complex Schur iteration did not converge");
  }

  Eigen::MatrixXcd vectors = solver.eigenvectors();
  const Eigen::VectorXcd values = solver.eigenvalues();
  const double bound = 1e-10 * m.frobenius_norm();

  EigenSystem out;
  out.pairs.reserve(static_cast<std::size_t>(m.dim()));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    vectors.col(k).normalize();
    const double residual = (a * vectors.col(k) - values(k) * vectors.col(k)).norm();
    if (!(residual <= bound)) {
      throw ConvergenceFailure("eigenpair residual " + std::to_string(residual) +
                               " exceeds bound " + std::to_string(bound));
    }
    EigenResult pair;
    pair.value = values(k);
    pair.vector.assign(vectors.col(k).data(), vectors.col(k).data() + vectors.rows());
    pair.residual = residual;
    out.pairs.push_back(std::move(pair));
  }

  // Rows of V⁻¹ are the dual (left) eigenvectors: (V⁻¹)ₖ · vⱼ = δₖⱼ.
  const Eigen::MatrixXcd inverse = vectors.fullPivLu().inverse();
  out.left.reserve(out.pairs.size());
  for (Eigen::Index k = 0; k < inverse.rows(); ++k) {
    std::vector<Complex> w(static_cast<std::size_t>(inverse.cols()));
    for (Eigen::Index c = 0; c < inverse.cols(); ++c) {
      w[static_cast<std::size_t>(c)] = std::conj(inverse(k, c));
    }
    out.left.push_back(std::move(w));
  }
  return out;
}

std::vector<EigenResult> eig_exact(const ComplexMatrix& m) { return eig_system(m).pairs; }

std::size_t select_ground_branch_index(std::span<const EigenResult> pairs,
                                       std::span<const Complex> reference) {
  if (pairs.empty()) throw AmbiguousBranch("no eigenpairs to select from");
  std::vector<double> overlap(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    Complex s{};
    for (std::size_t i = 0; i < reference.size() && i < pairs[k].vector.size(); ++i) {
      s += std::conj(reference[i]) * pairs[k].vector[i];
    }
    overlap[k] = std::abs(s);
  }
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (overlap[a] != overlap[b]) return overlap[a] > overlap[b];
    return std::abs(pairs[a].value.imag()) < std::abs(pairs[b].value.imag());
  });
  if (order.size() > 1 && overlap[order[0]] - overlap[order[1]] < kBranchAmbiguityGap) {
    throw AmbiguousBranch("top eigenvector overlaps " + std::to_string(overlap[order[0]]) +
                          " and " + std::to_string(overlap[order[1]]) + " are indistinguishable");
  }
  return order[0];
}

EigenResult select_ground_branch(std::span<const EigenResult> pairs,
                                 std::span<const Complex> reference) {
  return pairs[select_ground_branch_index(pairs, reference)];
}

EigenResult select_ground_branch(std::span<const EigenResult> pairs, std::size_t ground_index) {
  const std::size_t dim = pairs.empty() ? 0 : pairs.front().vector.size();
  std::vector<Complex> reference(dim);
  if (ground_index < dim) reference[ground_index] = 1.0;
  return select_ground_branch(pairs, reference);
}

double lambda0_pert_4(const FieldState& fields, double delta) {
  const ReducedTerms t = reduced_terms(fields);
  return (t.mixing - t.stark) / (delta * t.denominator);
}

double lambda0_pert_5(const FieldState& fields, double delta) {
  const ReducedTerms t = reduced_terms(fields);
  return t.mixing / (delta * t.denominator);
}

double lambda0_pert(LevelModel model, const FieldState& fields, double delta) {
  return model == LevelModel::kFourLevel ? lambda0_pert_4(fields, delta)
                                         : lambda0_pert_5(fields, delta);
}

FieldVector lambda0_pert_4_gradient(const FieldState& fields, double delta) {
  const ReducedTerms t = reduced_terms(fields);
  const FieldVector dn = mixing_numerator_gradient(fields) - stark_numerator_gradient(fields);
  return (1.0 / delta) * quotient_gradient(fields, dn, t.mixing - t.stark, t.denominator);
}

FieldVector lambda0_pert_5_gradient(const FieldState& fields, double delta) {
  const ReducedTerms t = reduced_terms(fields);
  return (1.0 / delta) *
         quotient_gradient(fields, mixing_numerator_gradient(fields), t.mixing, t.denominator);
}

GroundBranchTracker::GroundBranchTracker(LevelModel model, const SystemParams& params)
    : model_(model), params_(params) {
  for (Field f : kAllFields) {
    derivatives_.push_back(hamiltonian_conjugate_derivative(model, f, params));
  }
  reset();
}

void GroundBranchTracker::reset() {
  reference_.assign(model_ == LevelModel::kFourLevel ? 4 : 5, Complex{});
  reference_[0] = 1.0;
}

GroundBranchTracker::Evaluation GroundBranchTracker::evaluate(const FieldState& fields) const {
  checked_denominator(fields);
  const double s = params_.omega_over_delta;
  const EigenSystem sys = eig_system(build_hamiltonian(model_, s * fields, params_));
  const std::size_t k = select_ground_branch_index(sys.pairs, reference_);
  const EigenResult& pair = sys.pairs[k];
  const std::vector<Complex>& left = sys.left[k];

  Evaluation e;
  e.value = pair.value / (s * s);
  e.vector = pair.vector;
  Complex ov{};
  for (std::size_t i = 0; i < reference_.size(); ++i) ov += std::conj(reference_[i]) * pair.vector[i];
  e.overlap = std::abs(ov);

  // Non-Hermitian Hellmann–Feynman: ∂λ/∂p = wᴴ (∂H/∂p) v with wᴴv = 1. The
  // physical field is s·F, so ∂/∂F* contributes one factor of s.
  for (std::size_t fi = 0; fi < kAllFields.size(); ++fi) {
    const std::vector<Complex> dv = derivatives_[fi].apply(pair.vector);
    Complex num{};
    for (std::size_t i = 0; i < dv.size(); ++i) num += std::conj(left[i]) * dv[i];
    e.gradient[kAllFields[fi]] = num / s;
  }
  return e;
}

}  // namespace lambda_mixer
