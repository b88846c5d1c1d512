#pragma once

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mrtest/harness.hpp"

namespace mrtest::testing {

inline const Complex kI{0.0, 1.0};

inline ComplexMatrix sigma_x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
inline ComplexMatrix sigma_y() { return {{0.0, -kI}, {kI, 0.0}}; }
inline ComplexMatrix sigma_z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
inline ComplexMatrix ket0() { return {{1.0, 0.0}, {0.0, 0.0}}; }
/// (I + r sigma_y) / 2
inline ComplexMatrix y_polarized(double r) {
  return (ComplexMatrix::identity(2) + sigma_y() * Complex(r)) * Complex(0.5);
}
inline ComplexMatrix mixed2() { return ComplexMatrix::identity(2) * Complex(0.5); }

/// Q = sigma_z, H = (omega/2) sigma_x.
inline QuantumModel precession(double omega, const ComplexMatrix& rho, std::vector<double> times) {
  return QuantumModel::create(sigma_x() * Complex(omega / 2), rho, sigma_z(), std::move(times));
}

/// Equal gaps tau starting at 0.
inline std::vector<double> equal_gaps(double tau, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = static_cast<double>(k) * tau;
  return t;
}

inline ::testing::AssertionResult matrices_near(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.dim() != b.dim()) return ::testing::AssertionFailure() << "dimension mismatch";
  const double d = distance(a, b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << "Frobenius distance " << d << " > " << tol;
}

/// Random Hermitian matrix with standard-normal entries.
inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix a(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const double re = n(rng);
      const double im = n(rng);
      a(r, c) = Complex(re, im);
    }
  return (a + a.adjoint()).hermitian_part() * Complex(0.5);
}

}  // namespace mrtest::testing
