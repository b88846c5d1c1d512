#pragma once

namespace mrtest::tol {

// Structural checks on matrices (unitarity, idempotence, Q^2 = I, PSD floor).
inline constexpr double kStructural = 1e-10;
// Scalar identities: Hermiticity, traces, normalization, algebraic identities.
inline constexpr double kScalar = 1e-12;
// Default verdict tolerance for condition reports.
inline constexpr double kVerdict = 1e-9;
// Margin tie-break for the closed-form D interval.
inline constexpr double kFineTie = 1e-12;
// Simplex pivot threshold and phase-1 feasibility threshold.
inline constexpr double kPivot = 1e-11;
inline constexpr double kPhaseOne = 1e-9;
// Floor applied to probabilities in the scan oracle.
inline constexpr double kScanFloor = 1e-12;

inline constexpr int kMaxDim = 16;

}  // namespace mrtest::tol
