#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mrtest/tolerances.hpp"

namespace mrtest {

struct PhaseOneResult {
  double objective = 0.0;  // sum of artificial variables at the optimum
  std::vector<double> x;   // structural variables
  int iterations = 0;
};

/// Phase 1 of the dense tableau simplex for {x >= 0 : A x = b}. Minimises
/// the sum of one artificial per row, entering/leaving by Bland's rule.
/// `a` is row-major with rows.size() == b.size(); every row has the same
/// width. A zero objective (to tolerance) means the system is feasible.
PhaseOneResult simplex_phase_one(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                 double pivot_tolerance = tol::kPivot);

struct LinearProgramResult {
  PhaseOneResult phase_one;
  /// Set when phase 1 reached objective <= feasibility_tolerance.
  std::optional<std::vector<double>> x;
  double objective = 0.0;  // c . x at the optimum
  bool unbounded = false;
};

/// min c.x subject to A x = b, x >= 0. Phase 1 as above, then artificials
/// are driven out of the basis and phase 2 runs on c, again with Bland's rule.
LinearProgramResult simplex_minimize(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                                     const std::vector<double>& c, double feasibility_tolerance = tol::kPhaseOne,
                                     double pivot_tolerance = tol::kPivot);

}  // namespace mrtest
