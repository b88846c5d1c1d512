#include "mrtest/conditions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <limits>
#include <stdexcept>

#include "mrtest/error.hpp"

namespace mrtest {

std::string to_string(CheckKind kind) { return kind == CheckKind::NonNegative ? "≥0" : "=0"; }

ConditionReport::ConditionReport(double epsilon) : epsilon_(epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ValidationError("epsilon must be finite and >= 0");
}

void ConditionReport::add_nonnegative(std::string name, double value) {
  checks_.push_back({std::move(name), value, CheckKind::NonNegative, value, value >= -epsilon_});
}

void ConditionReport::add_zero(std::string name, double value) {
  checks_.push_back({std::move(name), value, CheckKind::Zero, -std::abs(value), std::abs(value) <= epsilon_});
}

void ConditionReport::add_assumption(std::string note) {
  if (std::find(assumptions_.begin(), assumptions_.end(), note) == assumptions_.end()) {
    assumptions_.push_back(std::move(note));
  }
}

void ConditionReport::append(const ConditionReport& other) {
  if (other.epsilon_ != epsilon_) throw std::logic_error("ConditionReport::append: epsilon mismatch");
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  for (const auto& a : other.assumptions_) add_assumption(a);
}

bool ConditionReport::verdict() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const Check& c) { return c.pass; });
}

const Check& ConditionReport::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return c;
  throw std::out_of_range("no check named " + name);
}

double ConditionReport::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& c : checks_) m = std::min(m, c.margin);
  return m;
}

// ---------------------------------------------------------------------------

namespace {

std::string pair_label(TimePair p) { return std::to_string(p.first + 1) + std::to_string(p.second + 1); }

char sign_char(int s) { return s > 0 ? '+' : '-'; }

const char* kAssumeNimPw = "assumption: NIM_pw (each moment measured non-invasively in its own experiment)";
const char* kAssumeInd = "assumption: Ind (future measurements do not affect the present state)";

}  // namespace

ConditionReport lg2(const MomentSet& m, TimePair pair, double epsilon) {
  if (!m.has_pair(pair)) throw ValidationError("lg2: pair " + pair_label(pair) + " is not in the moment set");
  const double ai = m.average(pair.first);
  const double aj = m.average(pair.second);
  const double c = m.correlator(pair);
  ConditionReport r(epsilon);
  for (int si : {-1, 1})
    for (int sj : {-1, 1}) {
      std::string name = "LG2." + pair_label(pair) + "." + sign_char(si) + sign_char(sj);
      r.add_nonnegative(std::move(name), 1.0 + si * ai + sj * aj + si * sj * c);
    }
  return r;
}

ConditionReport lg3(const MomentSet& m, double epsilon) {
  if (m.n_times() != 3) throw ValidationError("lg3 needs a three-time moment set");
  const double c12 = m.correlator({0, 1});
  const double c23 = m.correlator({1, 2});
  const double c13 = m.correlator({0, 2});
  ConditionReport r(epsilon);
  r.add_nonnegative("LG3.1", 1.0 + c12 + c23 + c13);
  r.add_nonnegative("LG3.2", 1.0 - c12 - c23 + c13);
  r.add_nonnegative("LG3.3", 1.0 + c12 - c23 - c13);
  r.add_nonnegative("LG3.4", 1.0 - c12 + c23 - c13);
  return r;
}

double lg4_signed_sum(const MomentSet& m, int placement) {
  if (m.n_times() != 4) throw ValidationError("lg4 needs a four-time moment set");
  // canonical order: C12, C23, C34, C14
  const auto& c = m.correlators();
  static constexpr std::array<std::size_t, 4> kNegated = {3, 0, 1, 2};
  if (placement < 1 || placement > 4) throw std::out_of_range("lg4 placement must be 1..4");
  const std::size_t neg = kNegated[static_cast<std::size_t>(placement - 1)];
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) sum += (k == neg ? -c[k] : c[k]);
  return sum;
}

ConditionReport lg4(const MomentSet& m, double epsilon) {
  ConditionReport r(epsilon);
  for (int k = 1; k <= 4; ++k) {
    const double s = lg4_signed_sum(m, k);
    r.add_nonnegative("LG4." + std::to_string(k) + ".lo", 2.0 + s);
    r.add_nonnegative("LG4." + std::to_string(k) + ".hi", 2.0 - s);
  }
  return r;
}

std::string nsit_name(const std::vector<std::size_t>& indices, std::size_t marginalized) {
  std::string name = "NSIT";
  for (std::size_t i : indices) {
    const std::string label = std::to_string(i + 1);
    name += (i == marginalized) ? "(" + label + ")" : label;
  }
  return name;
}

ConditionReport nsit(const ProbabilityTable& table_a, const ProbabilityTable& table_b, std::size_t marginalized,
                     double epsilon) {
  const auto& ia = table_a.time_indices();
  if (std::find(ia.begin(), ia.end(), marginalized) == ia.end()) {
    throw ValidationError("nsit: marginalized time is not measured in the first table");
  }
  std::vector<std::size_t> rest;
  std::copy_if(ia.begin(), ia.end(), std::back_inserter(rest), [&](std::size_t i) { return i != marginalized; });
  if (rest != table_b.time_indices()) {
    throw ValidationError("nsit: incompatible time index sets");
  }
  ConditionReport r(epsilon);
  r.add_zero(nsit_name(ia, marginalized), table_a.marginalize(marginalized).max_abs_difference(table_b));
  return r;
}

ConditionReport mr_weak(const MomentSet& m, double epsilon) {
  ConditionReport r(epsilon);
  r.add_assumption(kAssumeNimPw);
  r.add_assumption(kAssumeInd);
  for (const auto& p : m.pairs()) r.append(lg2(m, p, epsilon));
  if (m.n_times() == 3) {
    r.append(lg3(m, epsilon));
  } else {
    r.append(lg4(m, epsilon));
  }
  return r;
}

namespace {

ProbabilityTable seq(const QuantumModel& model, std::initializer_list<std::size_t> idx) {
  const std::vector<std::size_t> v(idx);
  return sequential_prob(model, v);
}

void require_three_times(const QuantumModel& model, const char* what) {
  if (model.n_times() != 3) throw ValidationError(std::string(what) + " needs a three-time model");
}

}  // namespace

ConditionReport pairwise_nsit(const QuantumModel& model, double epsilon) {
  ConditionReport r(epsilon);
  for (const auto& p : canonical_pairs(model.n_times())) {
    r.append(nsit(seq(model, {p.first, p.second}), single_time_prob(model, p.second), p.first, epsilon));
  }
  return r;
}

ConditionReport mr_int(const QuantumModel& model, double epsilon) {
  require_three_times(model, "mr_int");
  ConditionReport r(epsilon);
  r.add_assumption(kAssumeInd);
  r.append(nsit(seq(model, {0, 1}), single_time_prob(model, 1), 0, epsilon));
  r.append(nsit(seq(model, {0, 2}), single_time_prob(model, 2), 0, epsilon));
  r.append(nsit(seq(model, {1, 2}), single_time_prob(model, 2), 1, epsilon));
  r.append(lg3(piecewise_moments(model), epsilon));
  return r;
}

ConditionReport mr_strong(const QuantumModel& model, double epsilon) {
  require_three_times(model, "mr_strong");
  const auto p123 = seq(model, {0, 1, 2});
  const auto p23 = seq(model, {1, 2});
  const auto p13 = seq(model, {0, 2});
  ConditionReport r(epsilon);
  r.add_assumption(kAssumeInd);
  r.append(nsit(p23, single_time_prob(model, 2), 1, epsilon));
  r.append(nsit(p123, p23, 0, epsilon));
  r.append(nsit(p123, p13, 1, epsilon));
  return r;
}

}  // namespace mrtest
