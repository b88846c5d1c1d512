#include "mrtest/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <thread>

#include "mrtest/error.hpp"

namespace mrtest {

// ---------------------------------------------------------------- sweeps

namespace {

SweepParameter parameter_from_string(const std::string& s) {
  if (s == "tau") return SweepParameter::Tau;
  if (s == "t2") return SweepParameter::T2;
  if (s == "t3") return SweepParameter::T3;
  if (s == "omega") return SweepParameter::Omega;
  throw ValidationError("unknown sweep parameter '" + s + "' (expected tau, t2, t3 or omega)");
}

std::string parameter_name(SweepParameter p) {
  switch (p) {
    case SweepParameter::Tau: return "tau";
    case SweepParameter::T2: return "t2";
    case SweepParameter::T3: return "t3";
    case SweepParameter::Omega: return "omega";
  }
  return "?";
}

bool wants(const SweepSpec& spec, const char* group) {
  return std::find(spec.outputs.begin(), spec.outputs.end(), group) != spec.outputs.end();
}

std::string pair_label(TimePair p) { return std::to_string(p.first + 1) + std::to_string(p.second + 1); }

}  // namespace

void validate(const SweepSpec& spec) {
  if (!(spec.from < spec.to)) throw ValidationError("sweep needs from < to");
  if (spec.steps < 2 || spec.steps > 1'000'000) throw ValidationError("sweep steps must lie in [2, 1e6]");
  for (const auto& o : spec.outputs) {
    if (std::find(kSweepOutputs.begin(), kSweepOutputs.end(), o) == kSweepOutputs.end()) {
      throw ValidationError("unknown sweep output '" + o + "'");
    }
  }
  const std::size_t n = spec.model.n_times();
  if (n < 3) throw ValidationError("sweeps need a model with 3 or 4 times");
  if (spec.parameter == SweepParameter::T3 && n < 3) throw ValidationError("t3 sweep needs three times");
}

SweepSpec sweep_from_json(const Json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ParseError("sweep spec: expected an object");
  auto get_number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw ParseError(std::string("field '") + key + "': expected a number");
    return j[key].get<double>();
  };
  std::optional<QuantumModel> model;
  if (j.contains("model")) {
    model = model_from_json(j["model"]);
  } else if (j.contains("model_file") && j["model_file"].is_string()) {
    std::filesystem::path p = j["model_file"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    model = model_from_json(load_json_file(p));
  } else {
    throw ParseError("field 'model': missing (give 'model' or 'model_file')");
  }
  if (!j.contains("parameter") || !j["parameter"].is_string()) throw ParseError("field 'parameter': expected a string");

  SweepSpec spec{*model};
  spec.parameter = parameter_from_string(j["parameter"].get<std::string>());
  spec.from = get_number("from");
  spec.to = get_number("to");
  if (!j.contains("steps") || !j["steps"].is_number_integer() || j["steps"].get<long long>() < 0) {
    throw ParseError("field 'steps': expected a non-negative integer");
  }
  spec.steps = j["steps"].get<std::size_t>();
  if (j.contains("outputs")) {
    if (!j["outputs"].is_array()) throw ParseError("field 'outputs': expected an array of strings");
    spec.outputs.clear();
    for (const auto& o : j["outputs"]) {
      if (!o.is_string()) throw ParseError("field 'outputs': expected an array of strings");
      spec.outputs.push_back(o.get<std::string>());
    }
  }
  if (j.contains("epsilon")) spec.epsilon = get_number("epsilon");
  validate(spec);
  return spec;
}

double grid_value(const SweepSpec& spec, std::size_t k) {
  if (k + 1 == spec.steps) return spec.to;
  return spec.from + (spec.to - spec.from) * static_cast<double>(k) / static_cast<double>(spec.steps - 1);
}

QuantumModel model_at(const SweepSpec& spec, double value) {
  const auto& tmpl = spec.model;
  std::vector<double> times = tmpl.times();
  switch (spec.parameter) {
    case SweepParameter::Tau:
      for (std::size_t k = 1; k < times.size(); ++k) times[k] = times[0] + static_cast<double>(k) * value;
      return tmpl.with_times(std::move(times));
    case SweepParameter::T2:
      times[1] = value;
      return tmpl.with_times(std::move(times));
    case SweepParameter::T3:
      times[2] = value;
      return tmpl.with_times(std::move(times));
    case SweepParameter::Omega:
      return tmpl.with_hamiltonian(tmpl.hamiltonian() * Complex(value));
  }
  throw std::logic_error("unhandled sweep parameter");
}

RunRecord evaluate(const QuantumModel& model, double parameter, double epsilon) {
  RunRecord r{.parameter = parameter, .moments = piecewise_moments(model)};
  r.weak = mr_weak(r.moments, epsilon);
  r.nsit = pairwise_nsit(model, epsilon);
  for (const auto& p : canonical_pairs(model.n_times())) {
    r.witnesses.push_back(witness(model, p.first, p.second, Sign::Plus));
  }
  r.fine = fine(r.moments);
  r.verdict_weak = r.weak.verdict();
  if (model.n_times() == 3) {
    r.verdict_int = mr_int(model, epsilon).verdict();
    r.verdict_strong = mr_strong(model, epsilon).verdict();
  }
  return r;
}

std::vector<RunRecord> run_sweep(const SweepSpec& spec, unsigned jobs) {
  validate(spec);
  std::vector<std::optional<RunRecord>> slots(spec.steps);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const double v = grid_value(spec, k);
      slots[k] = evaluate(model_at(spec, v), v, spec.epsilon);
    }
  };
  jobs = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(spec.steps)));
  if (jobs == 1) {
    work(0, spec.steps);
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (spec.steps + jobs - 1) / jobs;
    for (unsigned t = 0; t < jobs; ++t) {
      const std::size_t b = t * chunk;
      const std::size_t e = std::min(spec.steps, b + chunk);
      if (b < e) threads.emplace_back(work, b, e);
    }
    for (auto& th : threads) th.join();
  }
  std::vector<RunRecord> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const SweepSpec& spec, const std::vector<RunRecord>& records) {
  const std::size_t n = spec.model.n_times();
  const auto pairs = canonical_pairs(n);
  const ConditionReport* weak_layout = records.empty() ? nullptr : &records.front().weak;

  std::vector<std::string> header = {parameter_name(spec.parameter)};
  if (wants(spec, "averages"))
    for (std::size_t i = 0; i < n; ++i) header.push_back("Q" + std::to_string(i + 1));
  if (wants(spec, "correlators"))
    for (const auto& p : pairs) header.push_back("C" + pair_label(p));
  if (wants(spec, "margins") && weak_layout)
    for (const auto& c : weak_layout->checks()) header.push_back(c.name);
  if (wants(spec, "witness"))
    for (const auto& p : pairs) header.push_back("W" + pair_label(p));
  if (wants(spec, "nsit"))
    for (const auto& p : pairs) header.push_back("NSIT(" + std::to_string(p.first + 1) + ")" + std::to_string(p.second + 1));
  if (wants(spec, "fine")) {
    if (n == 3) {
      header.push_back("d_lo");
      header.push_back("d_hi");
    }
    header.push_back("fine_feasible");
  }
  if (wants(spec, "verdicts")) {
    header.push_back("verdict_weak");
    if (n == 3) {
      header.push_back("verdict_int");
      header.push_back("verdict_strong");
    }
  }

  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out << ',';
      out << cells[k];
    }
    out << '\n';
  };
  emit(header);

  auto flag = [](bool b) { return std::string(b ? "1" : "0"); };
  for (const auto& r : records) {
    std::vector<std::string> row = {format_number(r.parameter)};
    if (wants(spec, "averages"))
      for (double a : r.moments.averages()) row.push_back(format_number(a));
    if (wants(spec, "correlators"))
      for (double c : r.moments.correlators()) row.push_back(format_number(c));
    if (wants(spec, "margins"))
      for (const auto& c : r.weak.checks()) row.push_back(format_number(c.margin));
    if (wants(spec, "witness"))
      for (double w : r.witnesses) row.push_back(format_number(w));
    if (wants(spec, "nsit"))
      for (const auto& c : r.nsit.checks()) row.push_back(format_number(c.value));
    if (wants(spec, "fine")) {
      if (n == 3) {
        row.push_back(format_number(r.fine.d_interval->first));
        row.push_back(format_number(r.fine.d_interval->second));
      }
      row.push_back(flag(r.fine.feasible));
    }
    if (wants(spec, "verdicts")) {
      row.push_back(flag(r.verdict_weak));
      if (n == 3) {
        row.push_back(flag(*r.verdict_int));
        row.push_back(flag(*r.verdict_strong));
      }
    }
    emit(row);
  }
}

double refine_minimum(const std::function<double(double)>& f, double lo, double hi, double tolerance) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tolerance) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// ------------------------------------------------------- random models

std::string to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::Generic: return "generic";
    case ModelFamily::Commuting: return "commuting";
    case ModelFamily::MaximallyMixed: return "maximally_mixed";
    case ModelFamily::DiagonalInQ1: return "diagonal_in_q1";
    case ModelFamily::FixedInitial: return "fixed_initial";
  }
  return "?";
}

namespace {

ComplexMatrix ginibre(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

}  // namespace

ComplexMatrix haar_unitary(std::mt19937_64& rng, std::size_t dim) {
  // Modified Gram-Schmidt on the columns; R then has a positive diagonal,
  // which is the normalization that makes Q Haar distributed.
  ComplexMatrix q = ginibre(rng, dim);
  for (std::size_t k = 0; k < dim; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      Complex proj = 0.0;
      for (std::size_t r = 0; r < dim; ++r) proj += std::conj(q(r, j)) * q(r, k);
      for (std::size_t r = 0; r < dim; ++r) q(r, k) -= proj * q(r, j);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) norm += std::norm(q(r, k));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < dim; ++r) q(r, k) /= norm;
  }
  return q;
}

ComplexMatrix random_density_matrix(std::mt19937_64& rng, std::size_t dim) {
  const ComplexMatrix a = ginibre(rng, dim);
  ComplexMatrix rho = (a * a.adjoint()).hermitian_part();
  rho *= Complex(1.0 / rho.trace().real());
  return rho;
}

QuantumModel random_model(std::mt19937_64& rng, std::size_t dim, std::size_t n_times, ModelFamily family) {
  std::uniform_int_distribution<std::size_t> minus_count(1, dim - 1);
  std::uniform_real_distribution<double> energy(-2.0, 2.0);
  std::uniform_real_distribution<double> start(0.0, 1.0);
  std::uniform_real_distribution<double> gap(0.1, 2.0);

  std::vector<double> q_diag(dim, 1.0);
  const std::size_t minus = minus_count(rng);
  for (std::size_t k = 0; k < minus; ++k) q_diag[k] = -1.0;
  std::vector<double> h_diag(dim);
  for (auto& e : h_diag) e = energy(rng);

  const ComplexMatrix u = haar_unitary(rng, dim);
  const ComplexMatrix v = family == ModelFamily::Commuting ? u : haar_unitary(rng, dim);
  const ComplexMatrix q = (u * ComplexMatrix::diagonal(q_diag) * u.adjoint()).hermitian_part();
  const ComplexMatrix h = (v * ComplexMatrix::diagonal(h_diag) * v.adjoint()).hermitian_part();

  std::vector<double> times(n_times);
  times[0] = start(rng);
  for (std::size_t k = 1; k < n_times; ++k) times[k] = times[k - 1] + gap(rng);

  ComplexMatrix rho = random_density_matrix(rng, dim);
  if (family == ModelFamily::MaximallyMixed) {
    rho = ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim));
  }
  if (family == ModelFamily::DiagonalInQ1 || family == ModelFamily::FixedInitial) {
    const ComplexMatrix q1 = heisenberg(q, h, times[0]);
    const ComplexMatrix plus = projector(q1, Sign::Plus);
    const ComplexMatrix minus_p = projector(q1, Sign::Minus);
    ComplexMatrix dephased = plus * rho * plus;
    if (family == ModelFamily::DiagonalInQ1) dephased += minus_p * rho * minus_p;
    rho = dephased.hermitian_part();
    rho *= Complex(1.0 / rho.trace().real());
  }
  return QuantumModel::create(h, rho, q, std::move(times));
}

std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

// ------------------------------------------------------------ campaign

std::size_t CampaignSummary::total_violations() const {
  std::size_t n = 0;
  for (const auto& [name, s] : invariants) n += s.violations;
  return n;
}

namespace {

constexpr std::array<ModelFamily, 5> kFamilies = {ModelFamily::Generic, ModelFamily::Commuting,
                                                  ModelFamily::MaximallyMixed, ModelFamily::DiagonalInQ1,
                                                  ModelFamily::FixedInitial};

struct Recorder {
  CampaignSummary& summary;
  std::uint64_t seed;
  std::size_t index;

  // defect <= bound counts as satisfied
  void record(const std::string& name, double defect, double bound) {
    auto& s = summary.invariants[name];
    ++s.checked;
    s.worst = std::max(s.worst, defect);
    if (!(defect <= bound)) {
      ++s.violations;
      if (summary.reproducers.size() < 20) {
        summary.reproducers.push_back("seed=" + std::to_string(seed) + " index=" + std::to_string(index) +
                                      " invariant=" + name + " defect=" + format_number(defect));
      }
    }
  }
  void require(const std::string& name, bool ok) { record(name, ok ? 0.0 : 1.0, 0.0); }
};

void check_sample(const QuantumModel& model, double eps, Recorder& rec) {
  const std::size_t n = model.n_times();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& qi = model.observable_at(i);
    rec.record("heisenberg_dichotomic", distance(qi * qi, ComplexMatrix::identity(model.dim())), tol::kStructural);
    rec.record("expectation_range", std::max(0.0, std::abs(expectation(model.rho(), qi)) - 1.0), tol::kStructural);
  }

  // Sequential tables: nonnegative, normalized, last-time marginal consistent.
  const std::vector<std::size_t> all = {0, 1, 2};
  const auto p123 = sequential_prob(model, all);
  for (const auto& sub : std::vector<std::vector<std::size_t>>{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}}) {
    const auto t = sequential_prob(model, sub);
    rec.record("sequential_nonnegative", std::max(0.0, -t.min_weight()), tol::kScalar);
    rec.record("sequential_normalized", std::abs(t.total() - 1.0), tol::kScalar);
    std::vector<std::size_t> shorter(sub.begin(), sub.end() - 1);
    rec.record("sequential_last_marginal",
               t.marginalize(sub.back()).max_abs_difference(sequential_prob(model, shorter)), tol::kScalar);
  }

  const auto moments = piecewise_moments(model);
  for (const auto& pr : canonical_pairs(n)) {
    const std::size_t i = pr.first;
    const std::size_t j = pr.second;
    const std::vector<std::size_t> sub = {i, j};
    const auto p = sequential_prob(model, sub);
    const auto q = quasi_prob2(model, i, j);
    const double t_res = interference_term(model, i, j);
    const double t_op = interference_term_operator(model, i, j);
    double residue = 0.0;
    for (std::size_t f = 0; f < 4; ++f) {
      residue = std::max(residue, std::abs(p.weight_at(f) - q.weight_at(f) - t_op * p.sign_at(f, 1)));
    }
    rec.record("pq_residue", residue, tol::kScalar);
    rec.record("interference_routes", std::abs(t_res - t_op), tol::kScalar);
    rec.record("interference_real", std::abs(commutator_expectation(model, i, j).imag()), tol::kScalar);

    const double w_plus = witness(model, i, j, Sign::Plus);
    const double w_minus = witness(model, i, j, Sign::Minus);
    const double w_op = witness_operator(model, i, j);
    rec.record("witness_formulas", std::max(std::abs(w_plus - w_op), std::abs(w_minus - w_op)), tol::kScalar);
    rec.record("witness_sign_independent", std::abs(w_plus - w_minus), tol::kScalar);
    if (0.5 * w_op <= p.min_weight()) {
      rec.record("bounded_interference", std::max(0.0, -q.min_weight()), tol::kScalar);
    }

    rec.record("quasi_marginal_i", q.marginalize(j).max_abs_difference(single_time_prob(model, i)), tol::kScalar);
    rec.record("quasi_marginal_j", q.marginalize(i).max_abs_difference(single_time_prob(model, j)), tol::kScalar);
    rec.record("quasi_normalized", std::abs(q.total() - 1.0), tol::kScalar);

    const std::array<std::size_t, 2> both = {0, 1};
    rec.record("correlator_sequential_vs_quasi", std::abs(moments.correlator(pr) - q.moment(both)), tol::kScalar);
    rec.record("nsit_equals_witness",
               std::abs(nsit(p, single_time_prob(model, j), i, eps).checks().front().value - w_op), tol::kScalar);
  }

  const bool strong = mr_strong(model, eps).verdict();
  const bool inter = mr_int(model, eps).verdict();
  const auto weak_report = mr_weak(moments, eps);
  const bool weak = weak_report.verdict();
  rec.require("implication_strong_int", !strong || inter);
  rec.require("implication_int_weak", !inter || weak);
  rec.summary.verdict_counts[strong ? "strong_pass" : "strong_fail"]++;
  rec.summary.verdict_counts[inter ? "int_pass" : "int_fail"]++;
  rec.summary.verdict_counts[weak ? "weak_pass" : "weak_fail"]++;

  // Fine's theorem end to end; skip samples sitting on the boundary.
  if (std::abs(weak_report.min_margin()) > eps) {
    rec.require("fine_consistency", d_interval(moments).feasible == weak);
  }
}

}  // namespace

CampaignSummary random_campaign(const CampaignOptions& options) {
  if (options.count > 100'000) throw ValidationError("campaign count must not exceed 1e5");
  if (options.dim_min < 2 || options.dim_max > static_cast<std::size_t>(tol::kMaxDim) ||
      options.dim_min > options.dim_max) {
    throw ValidationError("campaign dims must satisfy 2 <= dim_min <= dim_max <= 16");
  }
  CampaignSummary summary;
  summary.options = options;
  for (std::size_t k = 0; k < options.count; ++k) {
    auto rng = sample_rng(options.seed, k);
    std::uniform_int_distribution<std::size_t> dim_dist(options.dim_min, options.dim_max);
    const std::size_t dim = dim_dist(rng);
    const auto family = kFamilies[k % kFamilies.size()];
    const auto model = random_model(rng, dim, 3, family);
    Recorder rec{summary, options.seed, k};
    check_sample(model, options.epsilon, rec);
  }
  return summary;
}

Json to_json(const CampaignSummary& s) {
  Json j;
  j["seed"] = s.options.seed;
  j["count"] = s.options.count;
  j["dim_min"] = s.options.dim_min;
  j["dim_max"] = s.options.dim_max;
  j["epsilon"] = s.options.epsilon;
  j["total_violations"] = s.total_violations();
  Json inv = Json::object();
  for (const auto& [name, st] : s.invariants) {
    Json e;
    e["checked"] = st.checked;
    e["violations"] = st.violations;
    e["worst"] = st.worst;
    inv[name] = std::move(e);
  }
  j["invariants"] = std::move(inv);
  Json verdicts = Json::object();
  for (const auto& [name, c] : s.verdict_counts) verdicts[name] = c;
  j["verdicts"] = std::move(verdicts);
  j["reproducers"] = s.reproducers;
  return j;
}

}  // namespace mrtest
