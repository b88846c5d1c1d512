#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mrtest/measurement.hpp"
#include "mrtest/probability_table.hpp"
#include "mrtest/quantum.hpp"
#include "mrtest/tolerances.hpp"

namespace mrtest {

enum class CheckKind { NonNegative, Zero };

/// "≥0" or "=0"
std::string to_string(CheckKind kind);

struct Check {
  std::string name;
  double value = 0.0;
  CheckKind kind = CheckKind::NonNegative;
  double margin = 0.0;  // value for NonNegative, -|value| for Zero
  bool pass = false;
};

/// Named inequality/equality checks evaluated against a single tolerance.
class ConditionReport {
 public:
  explicit ConditionReport(double epsilon = tol::kVerdict);

  void add_nonnegative(std::string name, double value);
  void add_zero(std::string name, double value);
  /// Informational line (modeling assumptions); never affects the verdict.
  void add_assumption(std::string note);
  /// Appends other's checks and assumptions. Epsilons must match.
  void append(const ConditionReport& other);

  double epsilon() const { return epsilon_; }
  const std::vector<Check>& checks() const { return checks_; }
  const std::vector<std::string>& assumptions() const { return assumptions_; }
  bool verdict() const;
  /// Throws std::out_of_range for an unknown name.
  const Check& find(const std::string& name) const;
  double min_margin() const;

 private:
  double epsilon_;
  std::vector<Check> checks_;
  std::vector<std::string> assumptions_;
};

/// Four two-time LG checks "LG2.ij.s_is_j" for one pair of the moment set.
ConditionReport lg2(const MomentSet& m, TimePair pair, double epsilon = tol::kVerdict);
/// Four three-time LG checks "LG3.1".."LG3.4".
ConditionReport lg3(const MomentSet& m, double epsilon = tol::kVerdict);
/// Eight four-time checks "LG4.k.lo"/"LG4.k.hi"; placement k = 1 puts the
/// minus sign on C14, k = 2, 3, 4 on C12, C23, C34.
ConditionReport lg4(const MomentSet& m, double epsilon = tol::kVerdict);
/// Signed sum for placement k (1-based) of lg4.
double lg4_signed_sum(const MomentSet& m, int placement);

/// "NSIT..." name for removing `marginalized` from a table over `indices`,
/// e.g. {0,1,2} minus 1 gives "NSIT1(2)3".
std::string nsit_name(const std::vector<std::size_t>& indices, std::size_t marginalized);

/// One equality check: max-norm of (marginal of table_a - table_b).
ConditionReport nsit(const ProbabilityTable& table_a, const ProbabilityTable& table_b, std::size_t marginalized,
                     double epsilon = tol::kVerdict);

/// Two-time LG on every pair of the set plus lg3 (three times) or lg4 (four).
ConditionReport mr_weak(const MomentSet& m, double epsilon = tol::kVerdict);
/// Pairwise NSIT on two-time sequential records plus lg3 on piecewise moments.
ConditionReport mr_int(const QuantumModel& model, double epsilon = tol::kVerdict);
/// NSIT(2)3, NSIT(1)23 and NSIT1(2)3 on sequential records.
ConditionReport mr_strong(const QuantumModel& model, double epsilon = tol::kVerdict);

/// Pairwise two-time NSIT residuals for every canonical pair of the model
/// (3 or 4 times), named "NSIT(i)j".
ConditionReport pairwise_nsit(const QuantumModel& model, double epsilon = tol::kVerdict);

}  // namespace mrtest
