#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "lambda_mixer/field_state.hpp"

namespace lambda_mixer {

/// Which atomic level scheme generates the field dynamics.
enum class LevelModel {
  kFourLevel,  // double-Λ: ground |1⟩,|2⟩; resonant |4⟩; detuned |3⟩
  kFiveLevel,  // detuned level split into a ±Δ pair with one sign-flipped coupling
};

/// Coupling weight of the ±Δ split pair in the five-level Hamiltonian.
///
/// kAsPrinted uses unit weight on both components of the pair. The resulting
/// dark-state eigenvalue is twice the reduced five-level eigenvalue.
/// kSharedStrength scales each component by 1/√2, so the pair couples with
/// the same total strength as the single detuned level of the four-level
/// scheme. The dark-state eigenvalue then reduces to the mixing term alone.
enum class FiveLevelCoupling { kAsPrinted, kSharedStrength };

/// Atomic and medium parameters. Internal units: ħ = 1, Δ = 1, κ = 1.
struct SystemParams {
  double delta = 1.0;
  double gamma1 = 0.01;
  double gamma2 = 0.01;
  double kappa = 1.0;
  /// Field scale Ω₀/Δ applied before building Hamiltonians for the exact
  /// eigenvalue backend.
  double omega_over_delta = 0.01;
  FiveLevelCoupling five_level_coupling = FiveLevelCoupling::kAsPrinted;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

/// Small dense complex matrix (row-major), dimension 4 or 5 in practice.
class ComplexMatrix {
 public:
  explicit ComplexMatrix(int dim);

  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] Complex& operator()(int row, int col) noexcept { return entries_[index(row, col)]; }
  [[nodiscard]] const Complex& operator()(int row, int col) const noexcept {
    return entries_[index(row, col)];
  }
  [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }

  [[nodiscard]] Complex trace() const noexcept;
  [[nodiscard]] double frobenius_norm() const noexcept;
  [[nodiscard]] bool is_finite() const noexcept;
  [[nodiscard]] std::vector<Complex> apply(std::span<const Complex> v) const;

 private:
  [[nodiscard]] std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(dim_) +
           static_cast<std::size_t>(col);
  }

  int dim_;
  std::vector<Complex> entries_;
};

/// One eigenpair of a (generally non-Hermitian) matrix.
struct EigenResult {
  Complex value;
  std::vector<Complex> vector;  // unit 2-norm
  double residual = 0.0;        // ‖Hv − λv‖
};

/// Right eigenpairs plus the dual left eigenvectors, normalised so that
/// left[k]ᴴ · pairs[k].vector = 1.
struct EigenSystem {
  std::vector<EigenResult> pairs;
  std::vector<std::vector<Complex>> left;
};

/// Four-level interaction Hamiltonian in the basis (|1⟩,|2⟩,|3⟩,|4⟩).
/// Written with an overall +ħ: couplings enter as −F* above the diagonal and
/// −F below it; diagonal (0, 0, Δ − iγ₂, −iγ₁).
[[nodiscard]] ComplexMatrix build_hamiltonian_4(const FieldState& fields,
                                                const SystemParams& params);

/// Five-level Hamiltonian in the basis (|1⟩,|2⟩,|3a⟩,|3b⟩,|4⟩), built as
/// H = −M with M carrying +F couplings and diagonal (0, 0, −Δ − iγ₂, Δ − iγ₂, −iγ₁).
/// The |2⟩↔|3b⟩ element carries the opposite sign of E₂. The split-pair
/// weight follows `params.five_level_coupling`.
[[nodiscard]] ComplexMatrix build_hamiltonian_5(const FieldState& fields,
                                                const SystemParams& params);

[[nodiscard]] ComplexMatrix build_hamiltonian(LevelModel model, const FieldState& fields,
                                              const SystemParams& params);

/// ∂H/∂F* for the selected field: H is affine in (F, F*), so this is a
/// constant matrix with the coefficients of F*.
[[nodiscard]] ComplexMatrix hamiltonian_conjugate_derivative(LevelModel model, Field which,
                                                             const SystemParams& params);

/// All eigenpairs of a 4×4 or 5×5 complex matrix. Throws ConvergenceFailure
/// when the solver does not converge or a residual exceeds 1e-10·‖m‖_F.
[[nodiscard]] std::vector<EigenResult> eig_exact(const ComplexMatrix& m);

/// As eig_exact, with left eigenvectors for eigenvalue perturbation formulas.
[[nodiscard]] EigenSystem eig_system(const ComplexMatrix& m);

/// Top-two overlap gap below which branch selection is refused.
inline constexpr double kBranchAmbiguityGap = 1e-6;

/// Picks the eigenpair with the largest |⟨reference|v⟩|; ties go to the
/// smaller |Im λ|. Throws AmbiguousBranch when the best two overlaps differ by
/// less than kBranchAmbiguityGap. Returns the index into `pairs`.
[[nodiscard]] std::size_t select_ground_branch_index(std::span<const EigenResult> pairs,
                                                     std::span<const Complex> reference);

[[nodiscard]] EigenResult select_ground_branch(std::span<const EigenResult> pairs,
                                               std::span<const Complex> reference);

/// Reference is the unit vector on basis state `ground_index`.
[[nodiscard]] EigenResult select_ground_branch(std::span<const EigenResult> pairs,
                                               std::size_t ground_index);

/// Second-order dark-state eigenvalue of the four-level scheme:
///   λ₀ = [(Ω₁Ω₂E₁*E₂* + c.c.) − (|Ω₁|²|Ω₂|² + |E₁|²|E₂|²)] / (Δ (|Ω₁|² + |E₁|²)).
/// Throws DegenerateDenominator when |Ω₁|² + |E₁|² vanishes.
[[nodiscard]] double lambda0_pert_4(const FieldState& fields, double delta);

/// Five-level counterpart: only the four-wave-mixing bracket survives,
///   λ₀ = (Ω₁Ω₂E₁*E₂* + c.c.) / (Δ (|Ω₁|² + |E₁|²)).
[[nodiscard]] double lambda0_pert_5(const FieldState& fields, double delta);

[[nodiscard]] double lambda0_pert(LevelModel model, const FieldState& fields, double delta);

/// Closed-form Wirtinger gradients ∂λ₀/∂F* of the reduced eigenvalues, one
/// component per field.
[[nodiscard]] FieldVector lambda0_pert_4_gradient(const FieldState& fields, double delta);
[[nodiscard]] FieldVector lambda0_pert_5_gradient(const FieldState& fields, double delta);

/// Central-difference step used by grad_conjugate.
[[nodiscard]] inline double conjugate_fd_step(Complex f) noexcept {
  return 1e-6 * std::max(1.0, std::abs(f));
}

/// Wirtinger derivative ∂λ/∂F* = ½(∂λ/∂x + i ∂λ/∂y), F = x + iy, by central
/// differences on the real and imaginary parts. `eigfn` may return a real or
/// complex value.
template <class EigFn>
[[nodiscard]] Complex grad_conjugate(EigFn&& eigfn, const FieldState& fields, Field which) {
  const Complex f = fields[which];
  const double h = conjugate_fd_step(f);
  const auto at = [&](Complex shift) {
    FieldState shifted = fields;
    shifted[which] = f + shift;
    return Complex(eigfn(shifted));
  };
  const Complex d_re = (at({h, 0.0}) - at({-h, 0.0})) / (2.0 * h);
  const Complex d_im = (at({0.0, h}) - at({0.0, -h})) / (2.0 * h);
  return 0.5 * (d_re + Complex(0.0, 1.0) * d_im);
}

/// Tracks the adiabatic eigenbranch connected to |1⟩ for the exact backend.
///
/// Fields are given in units of Ω₀ and scaled by `omega_over_delta` before the
/// Hamiltonian is built. Reported eigenvalues and gradients are divided by
/// omega_over_delta² so they share units with the reduced λ₀.
class GroundBranchTracker {
 public:
  struct Evaluation {
    Complex value;                  // scaled eigenvalue
    FieldVector gradient;           // scaled ∂λ/∂F*
    std::vector<Complex> vector;    // right eigenvector
    double overlap = 0.0;           // |⟨reference|vector⟩|
  };

  GroundBranchTracker(LevelModel model, const SystemParams& params);

  /// Solves at `fields` against the current reference. Does not update it.
  [[nodiscard]] Evaluation evaluate(const FieldState& fields) const;

  /// Makes `e.vector` the reference for subsequent evaluations.
  void accept(const Evaluation& e) { reference_ = e.vector; }

  void reset();

  [[nodiscard]] std::span<const Complex> reference() const noexcept { return reference_; }
  [[nodiscard]] LevelModel model() const noexcept { return model_; }

 private:
  LevelModel model_;
  SystemParams params_;
  std::vector<Complex> reference_;
  std::vector<ComplexMatrix> derivatives_;  // indexed by Field
};

}  // namespace lambda_mixer
