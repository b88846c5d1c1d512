#include <algorithm>
#include <fstream>

#include "test_support.hpp"

namespace mrtest {
namespace {

using namespace mrtest::testing;

TEST(Json, MatrixRoundTrip) {
  const ComplexMatrix a{{1.0, Complex(0.5, -0.25)}, {Complex(0.5, 0.25), -2.0}};
  EXPECT_EQ(matrix_from_json(to_json(a), "m"), a);
  const auto real_only = matrix_from_json(parse_json("[[1, 0], [0, -1]]"), "m");
  EXPECT_EQ(real_only, sigma_z());
}

TEST(Json, MatrixShapeErrorsNameTheField) {
  try {
    matrix_from_json(parse_json("[[[1,0],[0,0]],[[0,0]]]"), "rho");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("rho[1]"), std::string::npos) << e.what();
  }
  EXPECT_THROW(matrix_from_json(parse_json("[[[1,0,3]]]"), "h"), ParseError);
}

TEST(Json, ModelRoundTrip) {
  const auto model = precession(1.5, y_polarized(0.3), {0.0, 0.5, 1.25});
  const auto back = model_from_json(to_json(model));
  EXPECT_EQ(back.hamiltonian(), model.hamiltonian());
  EXPECT_EQ(back.rho(), model.rho());
  EXPECT_EQ(back.observable(), model.observable());
  EXPECT_EQ(back.times(), model.times());
  EXPECT_EQ(to_json(back).dump(), to_json(model).dump());
}

TEST(Json, ModelErrors) {
  auto j = to_json(precession(1.0, mixed2(), {0.0, 1.0}));
  auto missing = j;
  missing.erase("rho");
  try {
    model_from_json(missing);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("'rho'"), std::string::npos) << e.what();
  }
  auto bad_dim = j;
  bad_dim["dim"] = 3;
  EXPECT_THROW(model_from_json(bad_dim), ValidationError);
  auto bad_times = j;
  bad_times["times"] = Json::array({1.0, 0.0});
  EXPECT_THROW(model_from_json(bad_times), ValidationError);
  auto bad_q = j;
  bad_q["observable"] = to_json(ComplexMatrix::identity(2) * Complex(0.5));
  EXPECT_THROW(model_from_json(bad_q), InvalidObservable);
}

TEST(Json, MalformedTextReportsLine) {
  try {
    parse_json("{\n  \"dim\": 2,\n  \"rho\": [\n}", "model.json");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("model.json"), std::string::npos) << what;
    EXPECT_NE(what.find("line 4"), std::string::npos) << what;
  }
  EXPECT_THROW(load_json_file("/nonexistent/model.json"), ParseError);
}

TEST(Json, TableFormatAndRoundTrip) {
  const ProbabilityTable t(TableKind::Quasi, {0, 2}, {0.5, -0.125, 0.25, 0.375});
  const auto j = to_json(t);
  EXPECT_EQ(j.dump(), R"({"arity":2,"times":[1,3],"kind":"quasi","weights":{"--":0.5,"-+":-0.125,"+-":0.25,"++":0.375}})");
  const auto back = table_from_json(j);
  EXPECT_EQ(back.kind(), TableKind::Quasi);
  EXPECT_EQ(back.time_indices(), t.time_indices());
  EXPECT_TRUE(std::ranges::equal(back.weights(), t.weights()));
  auto missing = j;
  missing["weights"].erase("++");
  EXPECT_THROW(table_from_json(missing), ParseError);
}

TEST(Json, MomentSetFormatAndRoundTrip) {
  const auto m = MomentSet::three({0.0, 0.5, -0.25}, 0.5, 0.5, -0.5);
  EXPECT_EQ(to_json(m).dump(), R"({"n":3,"avg":[0.0,0.5,-0.25],"pairs":[[1,2],[2,3],[1,3]],"corr":[0.5,0.5,-0.5],"D":null})");
  const auto back = moments_from_json(to_json(m));
  EXPECT_EQ(back.averages(), m.averages());
  EXPECT_EQ(back.correlators(), m.correlators());
}

TEST(Json, MomentPairsInAnyOrder) {
  const auto m = moments_from_json(
      parse_json(R"({"n":3,"avg":[0,0,0],"pairs":[[3,1],[1,2],[2,3]],"corr":[-0.5,0.25,0.75]})"));
  EXPECT_DOUBLE_EQ(m.correlator({0, 1}), 0.25);
  EXPECT_DOUBLE_EQ(m.correlator({1, 2}), 0.75);
  EXPECT_DOUBLE_EQ(m.correlator({0, 2}), -0.5);
}

TEST(Json, MissingCorrelatorsAreListed) {
  try {
    moments_from_json(parse_json(R"({"n":3,"avg":[0,0,0],"pairs":[[1,2]],"corr":[0.1]})"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("23, 13"), std::string::npos) << e.what();
  }
  try {
    moments_from_json(parse_json(R"({"n":4,"avg":[0,0,0,0]})"));
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("12, 23, 34, 14"), std::string::npos) << e.what();
  }
  EXPECT_THROW(moments_from_json(parse_json(R"({"n":3,"avg":[0,0,0],"pairs":[[1,4]],"corr":[0.1]})")), ParseError);
  EXPECT_THROW(moments_from_json(parse_json(R"({"n":2,"avg":[0,0]})")), ValidationError);
}

TEST(Json, ReportAndFeasibilityShapes) {
  const auto r = mr_weak(MomentSet::three({0, 0, 0}, 0.5, 0.5, -0.5));
  const auto j = to_json(r);
  EXPECT_EQ(j["verdict"], false);
  EXPECT_EQ(j["checks"].size(), 16U);
  EXPECT_EQ(j["checks"][0]["name"], "LG2.12.--");
  EXPECT_EQ(j["checks"][0]["kind"], "≥0");
  EXPECT_EQ(j["assumptions"].size(), 2U);

  const auto f = to_json(d_interval(MomentSet::three({0, 0, 0}, 0, 0, 0)));
  EXPECT_EQ(f["feasible"], true);
  EXPECT_EQ(f["d_interval"], Json::array({-1.0, 1.0}));
  EXPECT_EQ(f["witness"]["kind"], "joint");
  EXPECT_TRUE(f["certificate"].is_null());
}

TEST(Json, ContextualMomentsKeys) {
  const auto c = sequential_moments(precession(1.0, ket0(), {0.0, 0.4, 0.9}));
  const auto j = to_json(c);
  EXPECT_TRUE(j.contains("base"));
  for (const char* key : {"Q2|1", "Q3|1", "Q3|2", "Q3|12", "C23|1", "C13|2", "D"})
    EXPECT_TRUE(j["contextual"].contains(key)) << key;
}

}  // namespace
}  // namespace mrtest
