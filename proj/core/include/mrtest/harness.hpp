#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "mrtest/conditions.hpp"
#include "mrtest/error.hpp"
#include "mrtest/fine.hpp"
#include "mrtest/measurement.hpp"
#include "mrtest/quantum.hpp"
#include "mrtest/serialize.hpp"

namespace mrtest {

// ---------------------------------------------------------------- sweeps

enum class SweepParameter { Tau, T2, T3, Omega };

/// Output groups a sweep can record. Column layout per group:
///   averages     Q1..Qn
///   correlators  C12, C23, C13 (or C12, C23, C34, C14)
///   margins      every LG2/LG3/LG4 margin by check name
///   witness      W12, ... per canonical pair
///   nsit         NSIT(i)j residual per canonical pair
///   fine         d_lo, d_hi, fine_feasible (3 times) or fine_feasible (4)
///   verdicts     verdict_weak [, verdict_int, verdict_strong at 3 times]
inline const std::vector<std::string> kSweepOutputs = {"averages", "correlators", "margins", "witness",
                                                       "nsit",     "fine",        "verdicts"};

struct SweepSpec {
  QuantumModel model;  // template; its times set the count and t1
  SweepParameter parameter = SweepParameter::Tau;
  double from = 0.0;
  double to = 1.0;
  std::size_t steps = 2;
  std::vector<std::string> outputs = kSweepOutputs;
  double epsilon = tol::kVerdict;
};

/// Validates from < to, 2 <= steps <= 1e6 and the output names.
void validate(const SweepSpec& spec);

/// Reads {"model": {...} | "model_file": path, "parameter", "from", "to",
/// "steps", "outputs"?, "epsilon"?}. model_file is relative to base_dir.
SweepSpec sweep_from_json(const Json& j, const std::filesystem::path& base_dir = {});

/// Model at one grid value of the swept parameter.
/// tau: t_k = t_1 + k tau; t2/t3: replace that time; omega: H = omega * H_template.
QuantumModel model_at(const SweepSpec& spec, double value);

/// Grid value k of steps, evenly spaced with both ends included.
double grid_value(const SweepSpec& spec, std::size_t k);

struct RunRecord {
  double parameter = 0.0;
  MomentSet moments;
  ConditionReport weak{tol::kVerdict};  // LG2 on every pair plus LG3 or LG4
  ConditionReport nsit{tol::kVerdict};  // pairwise two-time NSIT
  std::vector<double> witnesses{};  // per canonical pair
  FeasibilityResult fine{};
  bool verdict_weak = false;
  std::optional<bool> verdict_int{};
  std::optional<bool> verdict_strong{};
};

/// Everything a sweep records for one model (3 or 4 times).
RunRecord evaluate(const QuantumModel& model, double parameter, double epsilon = tol::kVerdict);

/// One record per grid point, in grid order. jobs > 1 splits the grid over
/// threads; results are identical to the serial run.
std::vector<RunRecord> run_sweep(const SweepSpec& spec, unsigned jobs = 1);

/// Header plus one row per record; '.' decimal, 17 significant digits.
void write_csv(std::ostream& out, const SweepSpec& spec, const std::vector<RunRecord>& records);

std::string format_number(double v);

/// Golden-section search for a local minimum of f on [lo, hi].
double refine_minimum(const std::function<double(double)>& f, double lo, double hi, double tolerance = 1e-12);

// ------------------------------------------------------- random models

enum class ModelFamily {
  Generic,         // Haar-rotated H and Q, random mixed state
  Commuting,       // H diagonal in the eigenbasis of Q
  MaximallyMixed,  // rho = I / dim
  DiagonalInQ1,    // rho commutes with Q(t1)
  FixedInitial,    // rho supported in the Q(t1) = +1 eigenspace
};

std::string to_string(ModelFamily family);

/// Haar-distributed unitary (QR of a complex Ginibre matrix).
ComplexMatrix haar_unitary(std::mt19937_64& rng, std::size_t dim);
/// A A^dagger / Tr(A A^dagger) with standard-normal complex A.
ComplexMatrix random_density_matrix(std::mt19937_64& rng, std::size_t dim);

/// Random dichotomic observable (at least one eigenvalue of each sign),
/// Hamiltonian with spectrum in [-2, 2], increasing times in [0, 7].
QuantumModel random_model(std::mt19937_64& rng, std::size_t dim, std::size_t n_times, ModelFamily family);

/// Deterministic per-sample stream derived from (seed, index).
std::mt19937_64 sample_rng(std::uint64_t seed, std::uint64_t index);

// ------------------------------------------------------------ campaign

struct CampaignOptions {
  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::size_t dim_min = 2;
  std::size_t dim_max = 4;
  double epsilon = tol::kVerdict;
};

struct InvariantStats {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest observed defect
};

struct CampaignSummary {
  CampaignOptions options;
  std::map<std::string, InvariantStats> invariants;
  std::map<std::string, std::size_t> verdict_counts;  // e.g. "strong_pass"
  std::vector<std::string> reproducers;               // "seed=S index=I invariant=..."
  std::size_t total_violations() const;
};

/// Samples count models (family cycles with the index, dim uniform in
/// [dim_min, dim_max], three times) and checks every module invariant.
CampaignSummary random_campaign(const CampaignOptions& options);

Json to_json(const CampaignSummary& s);

}  // namespace mrtest
