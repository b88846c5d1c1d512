#include "mrtest/fine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "mrtest/error.hpp"
#include "mrtest/simplex.hpp"
#include "mrtest/tolerances.hpp"

namespace mrtest {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string outcome3(std::size_t flat) {
  std::string s = "---";
  for (std::size_t pos = 0; pos < 3; ++pos)
    if ((flat >> (2 - pos)) & 1U) s[pos] = '+';
  return s;
}

int sign_bit(std::size_t flat, std::size_t bit) { return ((flat >> bit) & 1U) ? 1 : -1; }

}  // namespace

FeasibilityResult d_interval(const MomentSet& m) {
  if (m.n_times() != 3) throw ValidationError("d_interval needs a three-time moment set");
  if (m.triple()) throw ValidationError("d_interval solves for D; the moment set must not fix it");
  // 8 p(s) = E(s) + s1 s2 s3 D, with E the D-free part.
  const auto free_part = three_time_expansion(m, 0.0);
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::size_t lo_from = 0;
  std::size_t hi_from = 0;
  for (std::size_t flat = 0; flat < 8; ++flat) {
    const double e = 8.0 * free_part.weight_at(flat);
    const int parity = sign_bit(flat, 2) * sign_bit(flat, 1) * sign_bit(flat, 0);
    if (parity > 0) {
      if (-e > lo) {
        lo = -e;
        lo_from = flat;
      }
    } else if (e < hi) {
      hi = e;
      hi_from = flat;
    }
  }

  FeasibilityResult r;
  r.d_interval = std::make_pair(lo, hi);
  // hi - lo is twice the smallest two- or three-time LG margin.
  r.feasible = hi - lo >= -2.0 * tol::kFineTie;
  if (r.feasible) {
    r.witness = three_time_expansion(m, 0.5 * (lo + hi)).with_kind(TableKind::Joint);
  } else {
    r.certificate = "empty D interval: lower bound " + fmt(lo) + " from outcome " + outcome3(lo_from) +
                    " exceeds upper bound " + fmt(hi) + " from outcome " + outcome3(hi_from);
  }
  return r;
}

FeasibilityResult lp_feasibility(const MomentSet& m) {
  const std::size_t n = m.n_times();
  if (n != 3 && n != 4) throw ValidationError("lp_feasibility needs 3 or 4 times");
  const std::size_t outcomes = std::size_t{1} << n;
  // bit (n-1-i) of the outcome index is set when time i reads +1
  auto s = [&](std::size_t flat, std::size_t i) { return sign_bit(flat, n - 1 - i); };

  std::vector<std::vector<double>> a;
  std::vector<double> b;
  a.emplace_back(outcomes, 1.0);
  b.push_back(1.0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(outcomes);
    for (std::size_t f = 0; f < outcomes; ++f) row[f] = s(f, i);
    a.push_back(std::move(row));
    b.push_back(m.average(i));
  }
  for (std::size_t k = 0; k < m.pairs().size(); ++k) {
    const auto p = m.pairs()[k];
    std::vector<double> row(outcomes);
    for (std::size_t f = 0; f < outcomes; ++f) row[f] = s(f, p.first) * s(f, p.second);
    a.push_back(std::move(row));
    b.push_back(m.correlators()[k]);
  }

  // Extra column t with x = y + t: maximising t picks the feasible table
  // whose smallest weight is largest, which keeps the witness interior.
  std::vector<std::vector<double>> a_shift = a;
  for (auto& row : a_shift) {
    double sum = 0.0;
    for (double v : row) sum += v;
    row.push_back(sum);
  }
  std::vector<double> cost(outcomes + 1, 0.0);
  cost[outcomes] = -1.0;
  const auto sol = simplex_minimize(a_shift, b, cost);
  const double phase_one = sol.phase_one.objective;

  FeasibilityResult r;
  r.feasible = phase_one <= tol::kPhaseOne;
  if (r.feasible) {
    std::vector<double> x(outcomes);
    const auto& raw = phase_one > tol::kScalar ? sol.phase_one.x : *sol.x;
    for (std::size_t f = 0; f < outcomes; ++f) x[f] = raw[f] + raw[outcomes];
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    r.witness = ProbabilityTable(TableKind::Joint, std::move(idx), std::move(x));
    if (phase_one > tol::kScalar) r.certificate = "marginal: phase-1 objective " + fmt(phase_one);
  } else {
    r.certificate = "infeasible: phase-1 objective " + fmt(phase_one);
  }
  return r;
}

FeasibilityResult scan_oracle(const MomentSet& m, double grid_step) {
  if (m.n_times() != 3) throw ValidationError("scan_oracle needs a three-time moment set");
  if (!(grid_step > 0.0 && grid_step <= 0.1)) throw ValidationError("scan_oracle step must lie in (0, 0.1]");
  const auto free_part = three_time_expansion(m, 0.0);
  const auto points = static_cast<long>(std::llround(2.0 / grid_step));
  FeasibilityResult r;
  double first = 0.0;
  double last = 0.0;
  for (long k = 0; k <= points; ++k) {
    const double d = std::min(1.0, -1.0 + static_cast<double>(k) * grid_step);
    bool ok = true;
    for (std::size_t flat = 0; flat < 8 && ok; ++flat) {
      const int parity = sign_bit(flat, 2) * sign_bit(flat, 1) * sign_bit(flat, 0);
      ok = free_part.weight_at(flat) + 0.125 * parity * d >= -tol::kScanFloor;
    }
    if (!ok) continue;
    if (!r.feasible) first = d;
    last = d;
    r.feasible = true;
  }
  if (r.feasible) {
    r.d_interval = std::make_pair(first, last);
    r.witness = three_time_expansion(m, first).with_kind(TableKind::Joint);
  } else {
    r.certificate = "no grid value of D in [-1, 1] at step " + fmt(grid_step) + " gives a nonnegative table";
  }
  return r;
}

FeasibilityResult fine(const MomentSet& m) { return m.n_times() == 3 ? d_interval(m) : lp_feasibility(m); }

}  // namespace mrtest
