#include "test_support.hpp"

namespace mrtest {
namespace {

using namespace mrtest::testing;
using std::numbers::pi;

// Independent two-time formulas written out with explicit projectors.
double brute_p(const QuantumModel& m, std::size_t i, std::size_t j, int si, int sj) {
  const auto pi_ = projector(m.observable_at(i), sign_of(si));
  const auto pj = projector(m.observable_at(j), sign_of(sj));
  return (pj * pi_ * m.rho() * pi_).trace().real();
}
double brute_q(const QuantumModel& m, std::size_t i, std::size_t j, int si, int sj) {
  const auto pi_ = projector(m.observable_at(i), sign_of(si));
  const auto pj = projector(m.observable_at(j), sign_of(sj));
  return 0.5 * ((pj * pi_ + pi_ * pj) * m.rho()).trace().real();
}

TEST(ProbabilityTable, KeysOrderAndMarginals) {
  const ProbabilityTable t(TableKind::Sequential, {0, 2}, {0.1, 0.2, 0.3, 0.4});
  EXPECT_EQ(t.outcome_key(0), "--");
  EXPECT_EQ(t.outcome_key(1), "-+");
  EXPECT_EQ(t.outcome_key(2), "+-");
  EXPECT_EQ(t.outcome_key(3), "++");
  const std::array<int, 2> pm = {+1, -1};
  EXPECT_DOUBLE_EQ(t.weight(pm), 0.3);
  EXPECT_NEAR(t.total(), 1.0, 1e-15);
  const auto first = t.marginalize(2);
  EXPECT_EQ(first.time_indices(), (std::vector<std::size_t>{0}));
  EXPECT_NEAR(first.weight_at(0), 0.3, 1e-15);
  EXPECT_NEAR(first.weight_at(1), 0.7, 1e-15);
  const auto second = t.marginalize(0);
  EXPECT_NEAR(second.weight_at(0), 0.4, 1e-15);
  EXPECT_NEAR(second.weight_at(1), 0.6, 1e-15);
  const std::array<std::size_t, 2> both = {0, 1};
  EXPECT_NEAR(t.moment(both), 0.1 - 0.2 - 0.3 + 0.4, 1e-15);
  EXPECT_EQ(ProbabilityTable::signs_from_key("+-+"), (std::vector<int>{1, -1, 1}));
  EXPECT_THROW(ProbabilityTable::signs_from_key("+x"), ParseError);
}

TEST(ProbabilityTable, RejectsBadShapes) {
  EXPECT_THROW(ProbabilityTable(TableKind::Single, {}, {1.0}), ValidationError);
  EXPECT_THROW(ProbabilityTable(TableKind::Sequential, {1, 0}, {0.25, 0.25, 0.25, 0.25}), ValidationError);
  EXPECT_THROW(ProbabilityTable(TableKind::Sequential, {0, 1}, {0.5, 0.5}), ValidationError);
  const ProbabilityTable a(TableKind::Single, {0}, {0.5, 0.5});
  const ProbabilityTable b(TableKind::Single, {1}, {0.5, 0.5});
  EXPECT_THROW(a.max_abs_difference(b), ValidationError);
  EXPECT_THROW(a.marginalize(0), ValidationError);
}

TEST(SingleTime, Examples) {
  const auto still = QuantumModel::create(ComplexMatrix(2), ket0(), sigma_z(), {0.0, 1.0});
  const auto p = single_time_prob(still, 1);
  EXPECT_EQ(p.kind(), TableKind::Single);
  EXPECT_DOUBLE_EQ(p.weight_at(1), 1.0);
  EXPECT_DOUBLE_EQ(p.weight_at(0), 0.0);

  const auto mixed = precession(1.0, mixed2(), {0.0, 0.37});
  EXPECT_NEAR(single_time_prob(mixed, 1).weight_at(0), 0.5, 1e-15);
  EXPECT_NEAR(single_time_prob(mixed, 1).weight_at(1), 0.5, 1e-15);

  const auto quarter = precession(1.0, ket0(), {0.0, pi / 2});
  EXPECT_NEAR(single_time_prob(quarter, 1).weight_at(0), 0.5, 1e-15);
  EXPECT_NEAR(single_time_prob(quarter, 1).weight_at(1), 0.5, 1e-15);
  EXPECT_THROW(single_time_prob(quarter, 2), ValidationError);
}

TEST(Sequential, CoincidentTimesRepeatTheOutcome) {
  std::mt19937_64 rng(23);
  const auto base = random_model(rng, 3, 2, ModelFamily::Generic);
  const auto model = base.with_times({base.times()[0], base.times()[0]});
  const std::vector<std::size_t> sub = {0, 1};
  const auto p = sequential_prob(model, sub);
  const auto single = single_time_prob(model, 0);
  EXPECT_NEAR(p.weight_at(0), single.weight_at(0), 1e-12);  // --
  EXPECT_NEAR(p.weight_at(3), single.weight_at(1), 1e-12);  // ++
  EXPECT_NEAR(p.weight_at(1), 0.0, 1e-12);
  EXPECT_NEAR(p.weight_at(2), 0.0, 1e-12);
}

TEST(Sequential, MixedPrecessionClosedForm) {
  const double omega = 2.0;
  for (double tau : {0.1, 0.6, 1.3, 2.9}) {
    const auto model = precession(omega, mixed2(), {0.3, 0.3 + tau});
    const std::vector<std::size_t> sub = {0, 1};
    const auto p = sequential_prob(model, sub);
    for (std::size_t f = 0; f < 4; ++f) {
      const int s1 = p.sign_at(f, 0);
      const int s2 = p.sign_at(f, 1);
      EXPECT_NEAR(p.weight_at(f), 0.25 * (1 + s1 * s2 * std::cos(omega * tau)), 1e-14);
      EXPECT_NEAR(p.weight_at(f), brute_p(model, 0, 1, s1, s2), 1e-14);
    }
  }
}

TEST(Sequential, StaticStateConcentratesOnPlus) {
  const auto model = QuantumModel::create(ComplexMatrix(2), ket0(), sigma_z(), {0.0, 1.0, 2.0});
  const std::vector<std::size_t> all = {0, 1, 2};
  const auto p = sequential_prob(model, all);
  EXPECT_EQ(p.kind(), TableKind::Sequential);
  EXPECT_DOUBLE_EQ(p.weight_at(7), 1.0);
  for (std::size_t f = 0; f < 7; ++f) EXPECT_DOUBLE_EQ(p.weight_at(f), 0.0);
}

TEST(Sequential, RejectsBadSubsets) {
  const auto model = precession(1.0, mixed2(), {0.0, 1.0, 2.0});
  const std::vector<std::size_t> unordered = {1, 0};
  const std::vector<std::size_t> repeated = {1, 1};
  const std::vector<std::size_t> outside = {0, 3};
  EXPECT_THROW(sequential_prob(model, unordered), ValidationError);
  EXPECT_THROW(sequential_prob(model, repeated), ValidationError);
  EXPECT_THROW(sequential_prob(model, outside), ValidationError);
  EXPECT_THROW(sequential_prob(model, std::vector<std::size_t>{}), ValidationError);
}

TEST(Sequential, InductionHoldsOnRandomModels) {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 40; ++k) {
    const auto model = random_model(rng, 2 + static_cast<std::size_t>(k % 3), 4, ModelFamily::Generic);
    const std::vector<std::size_t> all = {0, 1, 2, 3};
    const std::vector<std::size_t> first3 = {0, 1, 2};
    const auto p4 = sequential_prob(model, all);
    EXPECT_GE(p4.min_weight(), -1e-12);
    EXPECT_NEAR(p4.total(), 1.0, 1e-12);
    EXPECT_LT(p4.marginalize(3).max_abs_difference(sequential_prob(model, first3)), 1e-12);
  }
}

TEST(Quasi, MixedStateMatchesSequential) {
  const auto model = precession(1.0, mixed2(), {0.0, 0.9});
  const std::vector<std::size_t> sub = {0, 1};
  const auto q = quasi_prob2(model, 0, 1);
  EXPECT_EQ(q.kind(), TableKind::Quasi);
  EXPECT_LT(q.max_abs_difference(sequential_prob(model, sub)), 1e-12);
}

TEST(Quasi, CommutingModelMatchesSequential) {
  std::mt19937_64 rng(31);
  const auto model = random_model(rng, 4, 3, ModelFamily::Commuting);
  for (const auto& pr : canonical_pairs(3)) {
    const std::vector<std::size_t> sub = {pr.first, pr.second};
    EXPECT_LT(quasi_prob2(model, pr.first, pr.second).max_abs_difference(sequential_prob(model, sub)), 1e-12);
  }
}

TEST(Quasi, EigenstateOfFirstObservable) {
  const double theta = 1.1;
  const auto model = precession(1.0, ket0(), {0.0, theta});
  const auto q = quasi_prob2(model, 0, 1);
  const std::array<int, 2> mm = {-1, -1};
  const std::array<int, 2> mp = {-1, +1};
  EXPECT_NEAR(q.weight(mm), 0.0, 1e-15);
  EXPECT_NEAR(q.weight(mp), 0.0, 1e-15);
  for (std::size_t f = 0; f < 4; ++f) {
    const int s1 = q.sign_at(f, 0);
    const int s2 = q.sign_at(f, 1);
    const double c = std::cos(theta);
    EXPECT_NEAR(q.weight_at(f), 0.25 * (1 + s1 + s2 * c + s1 * s2 * c), 1e-14);
  }
}

TEST(Quasi, CanBeNegativeAndMarginalsMatch) {
  // Q(t1) = sigma_z, Q(t2) = sigma_y, rho polarized along +y, tilted towards +z.
  const ComplexMatrix rho = (ComplexMatrix::identity(2) + sigma_y() * Complex(0.8) + sigma_z() * Complex(0.55)) *
                            Complex(0.5);
  const auto model = precession(1.0, rho, {0.0, pi / 2});
  const auto q = quasi_prob2(model, 0, 1);
  for (std::size_t f = 0; f < 4; ++f) {
    EXPECT_NEAR(q.weight_at(f), brute_q(model, 0, 1, q.sign_at(f, 0), q.sign_at(f, 1)), 1e-15);
  }
  EXPECT_LT(q.min_weight(), -0.05);
  EXPECT_LT(q.marginalize(1).max_abs_difference(single_time_prob(model, 0)), 1e-12);
  EXPECT_LT(q.marginalize(0).max_abs_difference(single_time_prob(model, 1)), 1e-12);
}

TEST(Piecewise, StaticStateHasUnitMoments) {
  const auto model = QuantumModel::create(ComplexMatrix(2), ket0(), sigma_z(), {0.0, 1.0, 2.0});
  const auto m = piecewise_moments(model);
  for (double a : m.averages()) EXPECT_DOUBLE_EQ(a, 1.0);
  for (double c : m.correlators()) EXPECT_DOUBLE_EQ(c, 1.0);
  EXPECT_FALSE(m.triple().has_value());
}

TEST(Piecewise, PrecessionClosedForm) {
  const double omega = 0.7;
  for (double tau : {0.2, 1.0, 2.2, 4.0}) {
    const auto m = piecewise_moments(precession(omega, mixed2(), equal_gaps(tau, 3)));
    for (double a : m.averages()) EXPECT_NEAR(a, 0.0, 1e-15);
    EXPECT_NEAR(m.correlator({0, 1}), std::cos(omega * tau), 1e-14);
    EXPECT_NEAR(m.correlator({1, 2}), std::cos(omega * tau), 1e-14);
    EXPECT_NEAR(m.correlator({0, 2}), std::cos(2 * omega * tau), 1e-14);
  }
  const auto quarter = piecewise_moments(precession(1.0, mixed2(), equal_gaps(pi / 2, 3)));
  EXPECT_NEAR(quarter.correlator({0, 1}), 0.0, 1e-15);
  EXPECT_NEAR(quarter.correlator({1, 2}), 0.0, 1e-15);
  EXPECT_NEAR(quarter.correlator({0, 2}), -1.0, 1e-15);
}

TEST(Piecewise, FourTimesUsesFourPairs) {
  const auto m = piecewise_moments(precession(1.0, mixed2(), equal_gaps(pi / 4, 4)));
  ASSERT_EQ(m.pairs().size(), 4U);
  EXPECT_NEAR(m.correlator({2, 3}), std::sqrt(0.5), 1e-14);
  EXPECT_NEAR(m.correlator({0, 3}), -std::sqrt(0.5), 1e-14);
  EXPECT_THROW(m.correlator({0, 2}), ValidationError);
}

TEST(Piecewise, CorrelatorsMatchQuasiTables) {
  std::mt19937_64 rng(37);
  for (int k = 0; k < 30; ++k) {
    const auto model = random_model(rng, 2 + static_cast<std::size_t>(k % 3), 3, ModelFamily::Generic);
    const auto m = piecewise_moments(model);
    const std::array<std::size_t, 2> both = {0, 1};
    for (const auto& pr : m.pairs()) {
      EXPECT_NEAR(m.correlator(pr), quasi_prob2(model, pr.first, pr.second).moment(both), 1e-12);
    }
  }
}

TEST(Contextual, CommutingModelEqualsBase) {
  const auto model = QuantumModel::create(sigma_z() * Complex(0.4), ket0() * Complex(0.3) + mixed2() * Complex(0.7),
                                          sigma_z(), {0.0, 1.0, 2.0});
  const auto c = sequential_moments(model);
  EXPECT_NEAR(c.q2_after_1, c.base.average(1), 1e-14);
  EXPECT_NEAR(c.q3_after_1, c.base.average(2), 1e-14);
  EXPECT_NEAR(c.q3_after_2, c.base.average(2), 1e-14);
  EXPECT_NEAR(c.q3_after_12, c.base.average(2), 1e-14);
  EXPECT_NEAR(c.c23_after_1, c.base.correlator({1, 2}), 1e-14);
  EXPECT_NEAR(c.c13_after_2, c.base.correlator({0, 2}), 1e-14);
}

TEST(Contextual, DephasedStateIsUndisturbedByFirstMeasurement) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 10; ++k) {
    const auto model = random_model(rng, 3, 3, ModelFamily::DiagonalInQ1);
    const auto c = sequential_moments(model);
    EXPECT_NEAR(c.q2_after_1, c.base.average(1), 1e-12);
    EXPECT_NEAR(c.q3_after_1, c.base.average(2), 1e-12);
  }
}

TEST(Contextual, PureStateIsDisturbedByTheWitnessAmount) {
  const auto model = precession(1.0, y_polarized(1.0), {0.0, 0.5, 1.4});
  const auto c = sequential_moments(model);
  const double residual = std::abs(c.q3_after_2 - c.base.average(2));
  EXPECT_GT(residual, 1e-3);
  // p_3(s) = (1 + s<Q3>)/2, so the NSIT residual is half the shift in <Q3>.
  EXPECT_NEAR(0.5 * residual, witness(model, 1, 2, Sign::Plus), 1e-12);
}

TEST(Interference, VanishesForCommutingAndMixed) {
  std::mt19937_64 rng(43);
  const auto commuting = random_model(rng, 3, 3, ModelFamily::Commuting);
  const auto mixed = random_model(rng, 4, 3, ModelFamily::MaximallyMixed);
  for (const auto& pr : canonical_pairs(3)) {
    EXPECT_NEAR(interference_term(commuting, pr.first, pr.second), 0.0, 1e-12);
    EXPECT_NEAR(interference_term(mixed, pr.first, pr.second), 0.0, 1e-12);
    EXPECT_NEAR(witness(commuting, pr.first, pr.second, Sign::Minus), 0.0, 1e-12);
    EXPECT_NEAR(witness(mixed, pr.first, pr.second, Sign::Plus), 0.0, 1e-12);
  }
}

TEST(Interference, QuarterTurnFromUpStateMatchesBruteForce) {
  const auto model = precession(1.0, ket0(), {0.0, pi / 2});
  for (int s1 : {-1, 1}) {
    const double direct = brute_p(model, 0, 1, s1, +1) - brute_q(model, 0, 1, s1, +1);
    EXPECT_NEAR(interference_term(model, 0, 1), direct, 1e-15);
  }
  EXPECT_NEAR(witness(model, 0, 1, Sign::Plus), 2 * std::abs(interference_term(model, 0, 1)), 1e-15);
}

TEST(Interference, PolarizedStateClosedForm) {
  // Q1 = sigma_z, Q2 = cos(th) sigma_z + sin(th) sigma_y, rho = (I + r sigma_y)/2:
  // <[Q1,Q2]Q1> = -2 r sin(th), so T = -r sin(th)/4 and W = r |sin(th)|/2.
  for (double r : {1.0, 0.4, -0.7}) {
    for (double th : {0.3, pi / 2, 2.0, 4.0}) {
      const auto model = precession(1.0, y_polarized(r), {0.0, th});
      EXPECT_NEAR(interference_term(model, 0, 1), -0.25 * r * std::sin(th), 1e-14);
      EXPECT_NEAR(interference_term_operator(model, 0, 1), -0.25 * r * std::sin(th), 1e-14);
      EXPECT_NEAR(commutator_expectation(model, 0, 1).real(), -2 * r * std::sin(th), 1e-14);
      EXPECT_NEAR(witness(model, 0, 1, Sign::Plus), 0.5 * std::abs(r * std::sin(th)), 1e-14);
      EXPECT_NEAR(witness(model, 0, 1, Sign::Minus), 0.5 * std::abs(r * std::sin(th)), 1e-14);
      EXPECT_NEAR(witness_operator(model, 0, 1), 0.5 * std::abs(r * std::sin(th)), 1e-14);
      for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
          EXPECT_NEAR(brute_p(model, 0, 1, s1, s2) - brute_q(model, 0, 1, s1, s2),
                      -0.25 * r * std::sin(th) * s2, 1e-14);
        }
    }
  }
}

TEST(Interference, ResidueIdentityAndBoundedInterferenceOnRandomModels) {
  std::mt19937_64 rng(47);
  int bounded_cases = 0;
  for (int k = 0; k < 200; ++k) {
    const auto family = static_cast<ModelFamily>(k % 5);
    const auto model = random_model(rng, 2 + static_cast<std::size_t>(k % 3), 3, family);
    for (const auto& pr : canonical_pairs(3)) {
      const double t = interference_term_operator(model, pr.first, pr.second);
      for (int s1 : {-1, 1})
        for (int s2 : {-1, 1}) {
          const double d = brute_p(model, pr.first, pr.second, s1, s2) - brute_q(model, pr.first, pr.second, s1, s2);
          EXPECT_NEAR(d, t * s2, 1e-12);
        }
      const double w = witness_operator(model, pr.first, pr.second);
      EXPECT_NEAR(w, witness(model, pr.first, pr.second, Sign::Plus), 1e-12);
      const std::vector<std::size_t> sub = {pr.first, pr.second};
      if (0.5 * w <= sequential_prob(model, sub).min_weight()) {
        ++bounded_cases;
        EXPECT_GE(quasi_prob2(model, pr.first, pr.second).min_weight(), -1e-12);
      }
    }
  }
  EXPECT_GT(bounded_cases, 50);
}

TEST(Interference, RejectsBadPairs) {
  const auto model = precession(1.0, mixed2(), {0.0, 1.0, 2.0});
  EXPECT_THROW(interference_term(model, 1, 0), ValidationError);
  EXPECT_THROW(witness(model, 0, 3, Sign::Plus), ValidationError);
  EXPECT_THROW(quasi_prob2(model, 2, 2), ValidationError);
}

TEST(MomentSet, ValidatesRanges) {
  EXPECT_THROW(MomentSet::three({0, 0, 1.5}, 0, 0, 0), ValidationError);
  EXPECT_THROW(MomentSet::three({0, 0, 0}, 0, -1.01, 0), ValidationError);
  EXPECT_NO_THROW(MomentSet::three({0, 0, 1.0 + 1e-13}, 0, 0, 0));
  EXPECT_THROW(MomentSet({0, 0, 0, 0}, {0, 0, 0, 0}, 0.5), ValidationError);
  EXPECT_THROW(MomentSet({0, 0}, {0}), ValidationError);
}

TEST(MomentSet, PairExpansionMatchesSequentialTable) {
  const auto model = precession(1.0, y_polarized(0.6), {0.0, 0.8, 1.9});
  const auto m = piecewise_moments(model);
  for (const auto& pr : m.pairs()) {
    EXPECT_LT(pair_expansion(m, pr).max_abs_difference(quasi_prob2(model, pr.first, pr.second)), 1e-12);
  }
}

}  // namespace
}  // namespace mrtest
