#include "mrtest/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrtest/error.hpp"
#include "mrtest/tolerances.hpp"

namespace mrtest {

std::vector<TimePair> canonical_pairs(std::size_t n_times) {
  if (n_times == 3) return {{0, 1}, {1, 2}, {0, 2}};
  if (n_times == 4) return {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  throw ValidationError("moment sets need 3 or 4 times, got " + std::to_string(n_times));
}

namespace {

void require_unit_range(double v, const char* what) {
  if (!std::isfinite(v) || std::abs(v) > 1.0 + tol::kScalar) {
    throw ValidationError(std::string(what) + " must lie in [-1, 1], got " + std::to_string(v));
  }
}

void require_pair(const QuantumModel& model, std::size_t i, std::size_t j) {
  if (!(i < j) || j >= model.n_times()) {
    throw ValidationError("time pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") must be increasing and within the model's times");
  }
}

}  // namespace

MomentSet::MomentSet(std::vector<double> averages, std::vector<double> correlators, std::optional<double> triple)
    : averages_(std::move(averages)),
      pairs_(canonical_pairs(averages_.size())),
      correlators_(std::move(correlators)),
      triple_(triple) {
  if (correlators_.size() != pairs_.size()) {
    throw ValidationError("moment set needs one correlator per canonical pair");
  }
  for (double a : averages_) require_unit_range(a, "average");
  for (double c : correlators_) require_unit_range(c, "correlator");
  if (triple_) {
    if (n_times() != 3) throw ValidationError("triple correlator only defined at three times");
    require_unit_range(*triple_, "triple correlator");
  }
}

MomentSet MomentSet::three(std::array<double, 3> a, double c12, double c23, double c13) {
  return MomentSet({a[0], a[1], a[2]}, {c12, c23, c13});
}

MomentSet MomentSet::four(std::array<double, 4> a, double c12, double c23, double c34, double c14) {
  return MomentSet({a[0], a[1], a[2], a[3]}, {c12, c23, c34, c14});
}

bool MomentSet::has_pair(TimePair p) const {
  return std::find(pairs_.begin(), pairs_.end(), p) != pairs_.end();
}

double MomentSet::correlator(TimePair p) const {
  const auto it = std::find(pairs_.begin(), pairs_.end(), p);
  if (it == pairs_.end()) {
    throw ValidationError("pair " + std::to_string(p.first + 1) + std::to_string(p.second + 1) +
                          " is not in the moment set");
  }
  return correlators_[static_cast<std::size_t>(it - pairs_.begin())];
}

// ---------------------------------------------------------------------------

ProbabilityTable pair_expansion(const MomentSet& m, TimePair pair) {
  const double ai = m.average(pair.first);
  const double aj = m.average(pair.second);
  const double c = m.correlator(pair);
  std::vector<double> w(4);
  for (std::size_t flat = 0; flat < 4; ++flat) {
    const int si = (flat & 2U) ? 1 : -1;
    const int sj = (flat & 1U) ? 1 : -1;
    w[flat] = 0.25 * (1.0 + si * ai + sj * aj + si * sj * c);
  }
  return ProbabilityTable(TableKind::Quasi, {pair.first, pair.second}, std::move(w));
}

ProbabilityTable three_time_expansion(const MomentSet& m, double triple) {
  if (m.n_times() != 3) throw ValidationError("three-time expansion needs a three-time moment set");
  const auto& a = m.averages();
  const double c12 = m.correlator({0, 1});
  const double c23 = m.correlator({1, 2});
  const double c13 = m.correlator({0, 2});
  std::vector<double> w(8);
  for (std::size_t flat = 0; flat < 8; ++flat) {
    const int s1 = (flat & 4U) ? 1 : -1;
    const int s2 = (flat & 2U) ? 1 : -1;
    const int s3 = (flat & 1U) ? 1 : -1;
    w[flat] = 0.125 * (1.0 + s1 * a[0] + s2 * a[1] + s3 * a[2] + s1 * s2 * c12 + s2 * s3 * c23 +
                       s1 * s3 * c13 + s1 * s2 * s3 * triple);
  }
  return ProbabilityTable(TableKind::Quasi, {0, 1, 2}, std::move(w));
}

// ---------------------------------------------------------------------------

ProbabilityTable single_time_prob(const QuantumModel& model, std::size_t i) {
  const ComplexMatrix& q = model.observable_at(i);
  std::vector<double> w = {expectation(model.rho(), projector(q, Sign::Minus)),
                           expectation(model.rho(), projector(q, Sign::Plus))};
  return ProbabilityTable(TableKind::Single, {i}, std::move(w));
}

ProbabilityTable sequential_table(const ComplexMatrix& rho, std::span<const ComplexMatrix> observables,
                                  std::vector<std::size_t> time_indices) {
  const std::size_t k = observables.size();
  if (k == 0 || k > 4) throw ValidationError("sequential measurement needs 1 to 4 times");
  std::vector<std::array<ComplexMatrix, 2>> proj;
  proj.reserve(k);
  for (const auto& q : observables) proj.push_back({projector(q, Sign::Minus), projector(q, Sign::Plus)});

  std::vector<double> w(std::size_t{1} << k);
  // Depth-first over outcomes; flat index grows as (flat << 1) | bit, which
  // yields the lexicographic -1 < +1 order.
  auto recurse = [&](auto&& self, const ComplexMatrix& state, std::size_t depth, std::size_t flat) -> void {
    if (depth == k) {
      w[flat] = state.trace().real();
      return;
    }
    for (std::size_t bit = 0; bit < 2; ++bit) {
      const ComplexMatrix& p = proj[depth][bit];
      self(self, p * state * p, depth + 1, (flat << 1) | bit);
    }
  };
  recurse(recurse, rho, 0, 0);
  return ProbabilityTable(k == 1 ? TableKind::Single : TableKind::Sequential, std::move(time_indices), std::move(w));
}

ProbabilityTable sequential_prob(const QuantumModel& model, std::span<const std::size_t> subset) {
  if (subset.empty()) throw ValidationError("sequential_prob: empty time subset");
  for (std::size_t n = 0; n < subset.size(); ++n) {
    if (subset[n] >= model.n_times()) throw ValidationError("sequential_prob: time index out of range");
    if (n > 0 && subset[n] <= subset[n - 1]) {
      throw ValidationError("sequential_prob: time subset must be strictly increasing");
    }
  }
  std::vector<ComplexMatrix> obs;
  obs.reserve(subset.size());
  for (std::size_t i : subset) obs.push_back(model.observable_at(i));
  return sequential_table(model.rho(), obs, std::vector<std::size_t>(subset.begin(), subset.end()));
}

ProbabilityTable quasi_prob2(const QuantumModel& model, std::size_t i, std::size_t j) {
  require_pair(model, i, j);
  const ComplexMatrix& qi = model.observable_at(i);
  const ComplexMatrix& qj = model.observable_at(j);
  const std::array<ComplexMatrix, 2> pi = {projector(qi, Sign::Minus), projector(qi, Sign::Plus)};
  const std::array<ComplexMatrix, 2> pj = {projector(qj, Sign::Minus), projector(qj, Sign::Plus)};
  std::vector<double> w(4);
  for (std::size_t bi = 0; bi < 2; ++bi)
    for (std::size_t bj = 0; bj < 2; ++bj) {
      const ComplexMatrix sym = pj[bj] * pi[bi] + pi[bi] * pj[bj];
      w[(bi << 1) | bj] = 0.5 * expectation(model.rho(), sym);
    }
  return ProbabilityTable(TableKind::Quasi, {i, j}, std::move(w));
}

MomentSet piecewise_moments(const QuantumModel& model) {
  const std::size_t n = model.n_times();
  const auto pairs = canonical_pairs(n);
  std::vector<double> averages(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t pos = 0;
    averages[i] = single_time_prob(model, i).moment({&pos, 1});
  }
  std::vector<double> corr;
  corr.reserve(pairs.size());
  for (const auto& p : pairs) {
    const std::array<std::size_t, 2> subset = {p.first, p.second};
    const std::array<std::size_t, 2> both = {0, 1};
    corr.push_back(sequential_prob(model, subset).moment(both));
  }
  return MomentSet(std::move(averages), std::move(corr));
}

ContextualMoments sequential_moments(const QuantumModel& model) {
  if (model.n_times() != 3) throw ValidationError("sequential_moments needs exactly three times");
  const std::array<std::size_t, 3> all = {0, 1, 2};
  const std::array<std::size_t, 2> s13 = {0, 2};
  const std::array<std::size_t, 2> s23 = {1, 2};
  const auto p123 = sequential_prob(model, all);
  const auto p13 = sequential_prob(model, s13);
  const auto p23 = sequential_prob(model, s23);

  auto mom = [](const ProbabilityTable& t, std::initializer_list<std::size_t> pos) {
    const std::vector<std::size_t> v(pos);
    return t.moment(v);
  };
  ContextualMoments out{piecewise_moments(model)};
  out.q2_after_1 = mom(p123, {1});
  out.q3_after_12 = mom(p123, {2});
  out.c23_after_1 = mom(p123, {1, 2});
  out.c13_after_2 = mom(p123, {0, 2});
  out.triple = mom(p123, {0, 1, 2});
  out.q3_after_1 = mom(p13, {1});
  out.q3_after_2 = mom(p23, {1});
  return out;
}

Complex commutator_expectation(const QuantumModel& model, std::size_t i, std::size_t j) {
  require_pair(model, i, j);
  const ComplexMatrix& qi = model.observable_at(i);
  const ComplexMatrix& qj = model.observable_at(j);
  const ComplexMatrix op = commutator(qi, qj) * qi;
  return (op * model.rho()).trace();
}

double interference_term(const QuantumModel& model, std::size_t i, std::size_t j) {
  require_pair(model, i, j);
  const std::array<std::size_t, 2> subset = {i, j};
  const auto p = sequential_prob(model, subset);
  const auto q = quasi_prob2(model, i, j);
  double acc = 0.0;
  for (std::size_t flat = 0; flat < 4; ++flat) acc += p.sign_at(flat, 1) * (p.weight_at(flat) - q.weight_at(flat));
  return 0.25 * acc;
}

double interference_term_operator(const QuantumModel& model, std::size_t i, std::size_t j) {
  return commutator_expectation(model, i, j).real() / 8.0;
}

double witness(const QuantumModel& model, std::size_t i, std::size_t j, Sign sj) {
  require_pair(model, i, j);
  const std::array<std::size_t, 2> subset = {i, j};
  const auto marginal = sequential_prob(model, subset).marginalize(i);
  const auto target = single_time_prob(model, j);
  const std::size_t flat = sj == Sign::Plus ? 1 : 0;
  return std::abs(marginal.weight_at(flat) - target.weight_at(flat));
}

double witness_operator(const QuantumModel& model, std::size_t i, std::size_t j) {
  return std::abs(commutator_expectation(model, i, j)) / 4.0;
}

}  // namespace mrtest
