#pragma once

#include <optional>
#include <string>
#include <utility>

#include "mrtest/measurement.hpp"
#include "mrtest/probability_table.hpp"

namespace mrtest {

/// Outcome of a joint-probability existence test for a MomentSet.
struct FeasibilityResult {
  bool feasible = false;
  /// Admissible range of the triple correlator D (three-time methods).
  std::optional<std::pair<double, double>> d_interval;
  /// Nonnegative joint distribution reproducing the moments, when feasible.
  std::optional<ProbabilityTable> witness;
  std::optional<std::string> certificate;
};

/// Closed-form range of D over which the three-time expansion is
/// nonnegative. Feasible when the range is nonempty, up to a margin tie
/// tolerance of 1e-12 (the bounds are reported as computed). The witness
/// uses the interval midpoint.
FeasibilityResult d_interval(const MomentSet& m);

/// Simplex over all 2^n joint outcomes (n = 3 or 4) with the
/// normalization, average and canonical pair-correlator constraints.
/// Feasible when the phase-1 objective is at most 1e-9. The witness is the
/// feasible table with the largest smallest weight (found in phase 2).
FeasibilityResult lp_feasibility(const MomentSet& m);

/// Brute-force scan of D over [-1, 1] with the given step in (0, 0.1].
/// Test oracle for d_interval.
FeasibilityResult scan_oracle(const MomentSet& m, double grid_step);

/// Dispatch used by the CLI: d_interval at three times, LP at four.
FeasibilityResult fine(const MomentSet& m);

}  // namespace mrtest
