#include "mrtest/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mrtest/error.hpp"

namespace mrtest {

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw ParseError("field '" + field + "': " + what);
}

const Json& require(const Json& j, const std::string& key, const std::string& context = "") {
  const std::string field = context.empty() ? key : context + "." + key;
  if (!j.is_object()) field_error(context.empty() ? "<root>" : context, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) field_error(field, "missing");
  return *it;
}

double number(const Json& j, const std::string& field) {
  if (!j.is_number()) field_error(field, "expected a number");
  return j.get<double>();
}

std::vector<double> number_list(const Json& j, const std::string& field) {
  if (!j.is_array()) field_error(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Convert the byte offset into a line number for the message.
    const std::size_t upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ParseError(source + ": malformed JSON near line " + std::to_string(line) + ": " + e.what());
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(Json::array({m(r, c).real() + 0.0, m(r, c).imag() + 0.0}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) field_error(field, "expected a square array of [re, im] pairs");
  const std::size_t n = j.size();
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::string rf = field + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != n) field_error(rf, "expected a row of " + std::to_string(n) + " entries");
    for (std::size_t c = 0; c < n; ++c) {
      const std::string ef = rf + "[" + std::to_string(c) + "]";
      const Json& z = j[r][c];
      if (z.is_number()) {
        m(r, c) = z.get<double>();
      } else if (z.is_array() && z.size() == 2) {
        m(r, c) = Complex(number(z[0], ef + "[0]"), number(z[1], ef + "[1]"));
      } else {
        field_error(ef, "expected [re, im]");
      }
    }
  }
  return m;
}

Json to_json(const QuantumModel& model) {
  Json j;
  j["dim"] = model.dim();
  j["hamiltonian"] = to_json(model.hamiltonian());
  j["rho"] = to_json(model.rho());
  j["observable"] = to_json(model.observable());
  j["times"] = model.times();
  return j;
}

QuantumModel model_from_json(const Json& j) {
  const Json& dim_j = require(j, "dim");
  if (!dim_j.is_number_integer()) field_error("dim", "expected an integer");
  const auto dim = dim_j.get<long>();
  auto h = matrix_from_json(require(j, "hamiltonian"), "hamiltonian");
  auto rho = matrix_from_json(require(j, "rho"), "rho");
  auto q = matrix_from_json(require(j, "observable"), "observable");
  auto times = number_list(require(j, "times"), "times");
  for (const auto* m : {&h, &rho, &q}) {
    if (static_cast<long>(m->dim()) != dim) {
      throw ValidationError("matrix dimension does not match dim = " + std::to_string(dim));
    }
  }
  return QuantumModel::create(std::move(h), std::move(rho), std::move(q), std::move(times));
}

Json to_json(const ProbabilityTable& t) {
  Json j;
  j["arity"] = t.arity();
  Json times = Json::array();
  for (std::size_t i : t.time_indices()) times.push_back(i + 1);
  j["times"] = std::move(times);
  j["kind"] = to_string(t.kind());
  Json w = Json::object();
  for (std::size_t flat = 0; flat < t.weights().size(); ++flat) w[t.outcome_key(flat)] = t.weight_at(flat);
  j["weights"] = std::move(w);
  return j;
}

ProbabilityTable table_from_json(const Json& j) {
  const Json& arity_j = require(j, "arity");
  if (!arity_j.is_number_integer()) field_error("arity", "expected an integer");
  const auto arity = arity_j.get<long>();
  const auto times_raw = number_list(require(j, "times"), "times");
  const Json& kind_j = require(j, "kind");
  if (!kind_j.is_string()) field_error("kind", "expected a string");
  if (arity < 1 || arity > 4 || static_cast<long>(times_raw.size()) != arity) {
    field_error("times", "expected arity entries");
  }
  std::vector<std::size_t> times;
  for (double t : times_raw) {
    if (t < 1 || t != static_cast<double>(static_cast<long>(t))) field_error("times", "expected 1-based indices");
    times.push_back(static_cast<std::size_t>(t) - 1);
  }
  const Json& wj = require(j, "weights");
  if (!wj.is_object()) field_error("weights", "expected an object keyed by outcome");
  std::vector<double> w(std::size_t{1} << arity, 0.0);
  std::vector<bool> seen(w.size(), false);
  for (const auto& [key, val] : wj.items()) {
    const auto signs = ProbabilityTable::signs_from_key(key);
    if (static_cast<long>(signs.size()) != arity) field_error("weights." + key, "wrong outcome length");
    std::size_t flat = 0;
    for (int s : signs) flat = (flat << 1) | (s > 0 ? 1U : 0U);
    w[flat] = number(val, "weights." + key);
    seen[flat] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) field_error("weights", "missing outcomes");
  return ProbabilityTable(table_kind_from_string(kind_j.get<std::string>()), std::move(times), std::move(w));
}

Json to_json(const MomentSet& m) {
  Json j;
  j["n"] = m.n_times();
  j["avg"] = m.averages();
  Json pairs = Json::array();
  for (const auto& p : m.pairs()) pairs.push_back(Json::array({p.first + 1, p.second + 1}));
  j["pairs"] = std::move(pairs);
  j["corr"] = m.correlators();
  j["D"] = optional_number(m.triple());
  return j;
}

MomentSet moments_from_json(const Json& j) {
  const Json& n_j = require(j, "n");
  if (!n_j.is_number_integer()) field_error("n", "expected an integer");
  const auto n = n_j.get<long>();
  if (n != 3 && n != 4) throw ValidationError("moment sets need n = 3 or 4, got " + std::to_string(n));
  auto avg = number_list(require(j, "avg"), "avg");
  if (static_cast<long>(avg.size()) != n) field_error("avg", "expected " + std::to_string(n) + " averages");

  const auto canonical = canonical_pairs(static_cast<std::size_t>(n));
  std::vector<std::optional<double>> corr(canonical.size());
  const Json* pairs_j = j.contains("pairs") ? &j["pairs"] : nullptr;
  const Json* corr_j = j.contains("corr") ? &j["corr"] : nullptr;
  if ((pairs_j == nullptr) != (corr_j == nullptr)) field_error("pairs", "'pairs' and 'corr' must appear together");
  if (pairs_j != nullptr) {
    if (!pairs_j->is_array() || !corr_j->is_array() || pairs_j->size() != corr_j->size()) {
      field_error("pairs", "expected arrays of equal length for 'pairs' and 'corr'");
    }
    for (std::size_t k = 0; k < pairs_j->size(); ++k) {
      const std::string pf = "pairs[" + std::to_string(k) + "]";
      const Json& pj = (*pairs_j)[k];
      if (!pj.is_array() || pj.size() != 2 || !pj[0].is_number_integer() || !pj[1].is_number_integer()) {
        field_error(pf, "expected [i, j]");
      }
      long a = pj[0].get<long>();
      long b = pj[1].get<long>();
      if (a > b) std::swap(a, b);
      const TimePair p{static_cast<std::size_t>(a - 1), static_cast<std::size_t>(b - 1)};
      const auto it = std::find(canonical.begin(), canonical.end(), p);
      if (a < 1 || it == canonical.end()) field_error(pf, "pair is not part of the canonical set");
      corr[static_cast<std::size_t>(it - canonical.begin())] = number((*corr_j)[k], "corr[" + std::to_string(k) + "]");
    }
  }
  std::string missing;
  for (std::size_t k = 0; k < canonical.size(); ++k) {
    if (corr[k]) continue;
    if (!missing.empty()) missing += ", ";
    missing += std::to_string(canonical[k].first + 1) + std::to_string(canonical[k].second + 1);
  }
  if (!missing.empty()) throw ValidationError("missing correlators for pairs: " + missing);

  std::optional<double> triple;
  if (j.contains("D") && !j["D"].is_null()) triple = number(j["D"], "D");
  std::vector<double> c;
  for (const auto& v : corr) c.push_back(*v);
  return MomentSet(std::move(avg), std::move(c), triple);
}

Json to_json(const ContextualMoments& c) {
  Json j;
  j["base"] = to_json(c.base);
  Json ctx;
  ctx["Q2|1"] = c.q2_after_1;
  ctx["Q3|1"] = c.q3_after_1;
  ctx["Q3|2"] = c.q3_after_2;
  ctx["Q3|12"] = c.q3_after_12;
  ctx["C23|1"] = c.c23_after_1;
  ctx["C13|2"] = c.c13_after_2;
  ctx["D"] = c.triple;
  j["contextual"] = std::move(ctx);
  return j;
}

Json to_json(const ConditionReport& r) {
  Json j;
  j["epsilon"] = r.epsilon();
  j["verdict"] = r.verdict();
  Json checks = Json::array();
  for (const auto& c : r.checks()) {
    Json cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["kind"] = to_string(c.kind);
    cj["margin"] = c.margin;
    cj["pass"] = c.pass;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["assumptions"] = r.assumptions();
  return j;
}

Json to_json(const FeasibilityResult& f) {
  Json j;
  j["feasible"] = f.feasible;
  j["d_interval"] = f.d_interval ? Json::array({f.d_interval->first, f.d_interval->second}) : Json(nullptr);
  j["witness"] = f.witness ? to_json(*f.witness) : Json(nullptr);
  j["certificate"] = f.certificate ? Json(*f.certificate) : Json(nullptr);
  return j;
}

}  // namespace mrtest
