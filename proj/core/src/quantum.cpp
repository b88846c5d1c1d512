#include "mrtest/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mrtest/error.hpp"
#include "mrtest/tolerances.hpp"

namespace mrtest {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). The rotation is
// G = diag(1, e^{-i phi}) * R(c, s) restricted to the (p, q) plane, where
// e^{i phi} is the phase of a(p,q); A <- G^dagger A G, V <- V G.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex apq = a(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;
  const Complex phase = apq / g;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * g);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const Complex s_conj_phase = s * std::conj(phase);  // s e^{-i phi}
  const Complex s_phase = s * phase;                  // s e^{i phi}
  const Complex c_conj_phase = c * std::conj(phase);
  const Complex c_phase = c * phase;

  const std::size_t n = a.dim();
  for (std::size_t k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = c * akp - s_conj_phase * akq;
    a(k, q) = s * akp + c_conj_phase * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = c * apk - s_phase * aqk;
    a(q, k) = s * apk + c_phase * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * g;
  a(q, q) = aqq + t * g;

  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = c * vkp - s_conj_phase * vkq;
    v(k, q) = s * vkp + c_conj_phase * vkq;
  }
}

}  // namespace

void require_dichotomic(const ComplexMatrix& observable) {
  if (observable.dim() == 0) throw InvalidObservable("observable is empty");
  if (!observable.is_hermitian(tol::kScalar)) {
    throw InvalidObservable("observable is not Hermitian (defect " +
                            std::to_string(observable.hermiticity_defect()) + ")");
  }
  const double defect = distance(observable * observable, ComplexMatrix::identity(observable.dim()));
  if (defect > tol::kStructural) {
    throw InvalidObservable("observable is not dichotomic: ||Q^2 - I|| = " + std::to_string(defect));
  }
}

ComplexMatrix projector(const ComplexMatrix& observable, Sign s) {
  require_dichotomic(observable);
  const auto id = ComplexMatrix::identity(observable.dim());
  ComplexMatrix plus = (id + observable) * Complex(0.5);
  if (s == Sign::Plus) return plus;
  return id - plus;
}

EigenDecomposition eig_hermitian(const ComplexMatrix& input) {
  if (!input.is_hermitian(tol::kScalar)) {
    throw Error("eig_hermitian: matrix is not Hermitian (defect " +
                std::to_string(input.hermiticity_defect()) + ")");
  }
  const std::size_t n = input.dim();
  ComplexMatrix a = input.hermitian_part();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = std::max(a.frobenius_norm(), 1e-300);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

ComplexMatrix evolve_operator(const EigenDecomposition& spectrum, double t) {
  const std::size_t n = spectrum.eigenvectors.dim();
  if (t == 0.0) return ComplexMatrix::identity(n);
  const auto& v = spectrum.eigenvectors;
  std::vector<Complex> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, -spectrum.eigenvalues[k] * t);
  ComplexMatrix u(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += v(r, k) * phases[k] * std::conj(v(c, k));
      u(r, c) = acc;
    }
  return u;
}

ComplexMatrix evolve_operator(const ComplexMatrix& hamiltonian, double t) {
  return evolve_operator(eig_hermitian(hamiltonian), t);
}

namespace {

ComplexMatrix heisenberg_from(const ComplexMatrix& observable, const EigenDecomposition& spectrum, double t) {
  if (t == 0.0) return observable;
  const ComplexMatrix u = evolve_operator(spectrum, t);
  return (u.adjoint() * observable * u).hermitian_part();
}

}  // namespace

ComplexMatrix heisenberg(const ComplexMatrix& observable, const ComplexMatrix& hamiltonian, double t) {
  require_dichotomic(observable);
  if (hamiltonian.dim() != observable.dim()) throw Error("heisenberg: dimension mismatch");
  return heisenberg_from(observable, eig_hermitian(hamiltonian), t);
}

double expectation(const ComplexMatrix& rho, const ComplexMatrix& a) {
  if (rho.dim() != a.dim()) throw Error("expectation: dimension mismatch");
  const std::size_t n = rho.dim();
  Complex acc = 0.0;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) acc += a(r, k) * rho(k, r);
  return acc.real();
}

// ---------------------------------------------------------------------------

QuantumModel QuantumModel::create(ComplexMatrix hamiltonian, ComplexMatrix rho, ComplexMatrix observable,
                                  std::vector<double> times) {
  const std::size_t n = rho.dim();
  if (n < 2 || n > static_cast<std::size_t>(tol::kMaxDim)) {
    throw ValidationError("dim must lie in [2, 16], got " + std::to_string(n));
  }
  if (hamiltonian.dim() != n || observable.dim() != n) {
    throw ValidationError("hamiltonian, rho and observable must share dimension " + std::to_string(n));
  }
  if (!hamiltonian.is_hermitian(tol::kScalar)) throw ValidationError("hamiltonian is not Hermitian");
  if (!rho.is_hermitian(tol::kScalar)) throw ValidationError("rho is not Hermitian");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol::kScalar) {
    throw ValidationError("rho trace must be 1, got " + std::to_string(tr));
  }
  const auto rho_spec = eig_hermitian(rho);
  if (rho_spec.eigenvalues.front() < -tol::kStructural) {
    throw ValidationError("rho is not positive semidefinite (min eigenvalue " +
                          std::to_string(rho_spec.eigenvalues.front()) + ")");
  }
  require_dichotomic(observable);

  QuantumModel m;
  m.hamiltonian_ = hamiltonian.hermitian_part();
  m.rho_ = rho.hermitian_part();
  m.observable_ = observable.hermitian_part();
  m.times_ = std::move(times);
  m.validate_times(true);
  m.spectrum_ = eig_hermitian(m.hamiltonian_);
  m.precompute();
  return m;
}

QuantumModel QuantumModel::with_times(std::vector<double> times) const {
  QuantumModel m = *this;
  m.times_ = std::move(times);
  m.validate_times(false);
  m.precompute();
  return m;
}

QuantumModel QuantumModel::with_hamiltonian(ComplexMatrix hamiltonian) const {
  if (hamiltonian.dim() != dim()) throw ValidationError("hamiltonian dimension mismatch");
  if (!hamiltonian.is_hermitian(tol::kScalar)) throw ValidationError("hamiltonian is not Hermitian");
  QuantumModel m = *this;
  m.hamiltonian_ = hamiltonian.hermitian_part();
  m.spectrum_ = eig_hermitian(m.hamiltonian_);
  m.precompute();
  return m;
}

const ComplexMatrix& QuantumModel::observable_at(std::size_t i) const {
  if (i >= heisenberg_.size()) {
    throw ValidationError("time index " + std::to_string(i) + " out of range");
  }
  return heisenberg_[i];
}

void QuantumModel::validate_times(bool strict) const {
  if (times_.size() < 2 || times_.size() > 4) {
    throw ValidationError("times must hold 2 to 4 entries, got " + std::to_string(times_.size()));
  }
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw ValidationError("times must be finite");
    if (i == 0) continue;
    const bool ok = strict ? times_[i] > times_[i - 1] : times_[i] >= times_[i - 1];
    if (!ok) throw ValidationError(strict ? "times must be strictly increasing" : "times must be non-decreasing");
  }
}

void QuantumModel::precompute() {
  heisenberg_.clear();
  heisenberg_.reserve(times_.size());
  for (double t : times_) heisenberg_.push_back(heisenberg_from(observable_, spectrum_, t));
}

}  // namespace mrtest
