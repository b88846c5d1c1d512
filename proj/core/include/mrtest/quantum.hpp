#pragma once

#include <cstddef>
#include <vector>

#include "mrtest/complex_matrix.hpp"

namespace mrtest {

/// Outcome of a dichotomic measurement.
enum class Sign : int { Minus = -1, Plus = 1 };

constexpr int value(Sign s) { return static_cast<int>(s); }
constexpr Sign sign_of(int v) { return v < 0 ? Sign::Minus : Sign::Plus; }

/// Throws InvalidObservable unless Q is Hermitian and Q^2 = I.
void require_dichotomic(const ComplexMatrix& observable);

/// Spectral projector (I + sQ)/2. projector(Q,+1) + projector(Q,-1) == I
/// holds bitwise because the minus projector is formed as I - P+.
ComplexMatrix projector(const ComplexMatrix& observable, Sign s);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // columns
};

/// Cyclic complex Jacobi. Throws Error for non-Hermitian input.
EigenDecomposition eig_hermitian(const ComplexMatrix& a);

/// exp(-iHt) through the spectral decomposition of H.
ComplexMatrix evolve_operator(const ComplexMatrix& hamiltonian, double t);
ComplexMatrix evolve_operator(const EigenDecomposition& spectrum, double t);

/// Heisenberg-picture observable U(t)^dagger Q U(t).
ComplexMatrix heisenberg(const ComplexMatrix& observable, const ComplexMatrix& hamiltonian, double t);

/// Re Tr(A rho). Throws Error on shape mismatch.
double expectation(const ComplexMatrix& rho, const ComplexMatrix& a);

/// Validated description of a closed system measured at 2-4 times.
/// Heisenberg observables Q(t_i) are computed once at construction; the
/// object is immutable afterwards.
class QuantumModel {
 public:
  /// Validates every invariant; throws ValidationError / InvalidObservable
  /// naming the one that failed. Times must be strictly increasing.
  static QuantumModel create(ComplexMatrix hamiltonian, ComplexMatrix rho, ComplexMatrix observable,
                             std::vector<double> times);

  /// Same model at other times. Coincident times are accepted here (the
  /// zero-gap limit of a sweep); decreasing times are not.
  QuantumModel with_times(std::vector<double> times) const;
  /// Same model with H replaced (used by the omega sweep).
  QuantumModel with_hamiltonian(ComplexMatrix hamiltonian) const;

  std::size_t dim() const { return rho_.dim(); }
  std::size_t n_times() const { return times_.size(); }
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  const ComplexMatrix& rho() const { return rho_; }
  const ComplexMatrix& observable() const { return observable_; }
  const std::vector<double>& times() const { return times_; }
  /// Q(t_i); throws std::out_of_range for a bad index.
  const ComplexMatrix& observable_at(std::size_t i) const;

 private:
  QuantumModel() = default;
  void validate_times(bool strict) const;
  void precompute();

  ComplexMatrix hamiltonian_;
  ComplexMatrix rho_;
  ComplexMatrix observable_;
  std::vector<double> times_;
  EigenDecomposition spectrum_;
  std::vector<ComplexMatrix> heisenberg_;
};

}  // namespace mrtest
