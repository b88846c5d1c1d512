#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mrtest/complex_matrix.hpp"
#include "mrtest/probability_table.hpp"
#include "mrtest/quantum.hpp"

namespace mrtest {

/// 0-based pair of time indices, first < second.
struct TimePair {
  std::size_t first = 0;
  std::size_t second = 0;
  friend bool operator==(const TimePair&, const TimePair&) = default;
};

/// {12, 23, 13} at three times, {12, 23, 34, 14} at four (0-based inside).
std::vector<TimePair> canonical_pairs(std::size_t n_times);

/// Averages <Q_i> and pair correlators C_ij at 3 or 4 times, optionally with
/// the triple correlator D. Pairs are always stored in canonical order.
class MomentSet {
 public:
  MomentSet(std::vector<double> averages, std::vector<double> correlators,
            std::optional<double> triple = std::nullopt);

  static MomentSet three(std::array<double, 3> averages, double c12, double c23, double c13);
  static MomentSet four(std::array<double, 4> averages, double c12, double c23, double c34, double c14);

  std::size_t n_times() const { return averages_.size(); }
  const std::vector<double>& averages() const { return averages_; }
  double average(std::size_t i) const { return averages_.at(i); }
  const std::vector<TimePair>& pairs() const { return pairs_; }
  const std::vector<double>& correlators() const { return correlators_; }
  bool has_pair(TimePair p) const;
  /// Throws ValidationError for a pair outside the canonical set.
  double correlator(TimePair p) const;
  const std::optional<double>& triple() const { return triple_; }

 private:
  std::vector<double> averages_;
  std::vector<TimePair> pairs_;
  std::vector<double> correlators_;
  std::optional<double> triple_;
};

/// Moments read off sequential measurement records, where values may depend
/// on which earlier or intermediate measurements were made.
struct ContextualMoments {
  MomentSet base;           // no-earlier-measurement values
  double q2_after_1 = 0;    // <Q2> with a measurement at t1
  double q3_after_1 = 0;    // <Q3> with a measurement at t1 only
  double q3_after_2 = 0;    // <Q3> with a measurement at t2 only
  double q3_after_12 = 0;   // <Q3> with measurements at t1 and t2
  double c23_after_1 = 0;   // C23 with a measurement at t1
  double c13_after_2 = 0;   // C13 with a measurement at t2
  double triple = 0;        // D from the three-time sequential record
};

/// Two-time candidate probability 1/4 (1 + s_i<Q_i> + s_j<Q_j> + s_i s_j C_ij).
/// Kind is Quasi since the entries are unconstrained in sign.
ProbabilityTable pair_expansion(const MomentSet& m, TimePair pair);
/// Three-time expansion 1/8 (1 + ... + s1 s2 s3 D) for a three-time set.
ProbabilityTable three_time_expansion(const MomentSet& m, double triple);

ProbabilityTable single_time_prob(const QuantumModel& model, std::size_t i);

/// Chained Lueders rule over the given (strictly increasing) time indices.
ProbabilityTable sequential_prob(const QuantumModel& model, std::span<const std::size_t> subset);

/// Lueders chain for explicit Heisenberg observables; no time ordering is
/// imposed, so repeated observables are allowed. Labels are time_indices.
ProbabilityTable sequential_table(const ComplexMatrix& rho, std::span<const ComplexMatrix> observables,
                                  std::vector<std::size_t> time_indices);

/// Symmetrised two-time quasi-probability 1/2 Tr({P_sj(t_j), P_si(t_i)} rho).
ProbabilityTable quasi_prob2(const QuantumModel& model, std::size_t i, std::size_t j);

/// Averages from single-time runs, each C_ij from its own two-time run.
MomentSet piecewise_moments(const QuantumModel& model);

/// Three-time model only.
ContextualMoments sequential_moments(const QuantumModel& model);

/// <[Q_i, Q_j] Q_i> as a complex number (real up to rounding).
Complex commutator_expectation(const QuantumModel& model, std::size_t i, std::size_t j);

/// T with p(s_i, s_j) = q(s_i, s_j) + T s_j, taken from the p - q residue.
double interference_term(const QuantumModel& model, std::size_t i, std::size_t j);
/// Same quantity from the operator formula: Re<[Q_i,Q_j]Q_i> / 8.
double interference_term_operator(const QuantumModel& model, std::size_t i, std::size_t j);

/// |sum_{s_i} p(s_i, s_j) - p_j(s_j)|, the NSIT residual.
double witness(const QuantumModel& model, std::size_t i, std::size_t j, Sign sj);
/// |<[Q_i,Q_j]Q_i>| / 4; equals witness() for either sign.
double witness_operator(const QuantumModel& model, std::size_t i, std::size_t j);

}  // namespace mrtest
