// mrtest: simulate measurement protocols, check macrorealism conditions,
// solve the joint-distribution problem, and run sweeps and campaigns.
//
// Exit codes: 0 pass, 1 condition failed (or campaign violation), 2 usage or
// validation error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include "mrtest/error.hpp"
#include "mrtest/harness.hpp"

namespace {

using mrtest::Json;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitError = 2;

void write_json(const Json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw mrtest::Error("cannot write " + out_path);
  out << text;
}

double resolve_epsilon(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("MRTEST_EPSILON"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0') throw mrtest::ValidationError(std::string("MRTEST_EPSILON is not a number: ") + env);
    return v;
  }
  return mrtest::tol::kVerdict;
}

void require_epsilon(double eps) {
  if (!(eps >= 0.0) || eps > 1e-3) throw mrtest::ValidationError("epsilon must lie in [0, 1e-3]");
}

Json simulate(const mrtest::QuantumModel& model) {
  const std::size_t n = model.n_times();
  Json out;
  out["model"] = mrtest::to_json(model);
  out["moments"] = n >= 3 ? mrtest::to_json(mrtest::piecewise_moments(model)) : Json(nullptr);
  out["contextual"] = n == 3 ? mrtest::to_json(mrtest::sequential_moments(model)) : Json(nullptr);

  Json single = Json::array();
  for (std::size_t i = 0; i < n; ++i) single.push_back(mrtest::to_json(mrtest::single_time_prob(model, i)));
  out["single"] = std::move(single);

  // Every subset of two or more times, ordered by size then lexicographically.
  Json sequential = Json::array();
  std::vector<std::vector<std::size_t>> subsets;
  for (unsigned mask = 1; mask < (1U << n); ++mask) {
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1U << i)) subset.push_back(i);
    if (subset.size() >= 2) subsets.push_back(std::move(subset));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  for (const auto& s : subsets) sequential.push_back(mrtest::to_json(mrtest::sequential_prob(model, s)));
  out["sequential"] = std::move(sequential);

  Json quasi = Json::array();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) quasi.push_back(mrtest::to_json(mrtest::quasi_prob2(model, i, j)));
  out["quasi"] = std::move(quasi);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Macrorealism condition tester"};
  app.require_subcommand(1);

  std::string model_file;
  std::string moments_file;
  std::string out_file;
  std::string spec_file;
  std::string which = "weak";
  double epsilon_flag = 0.0;
  unsigned jobs = 1;
  mrtest::CampaignOptions campaign;

  auto* sim = app.add_subcommand("simulate", "Moments and probability tables for a model");
  sim->add_option("--model", model_file, "Model JSON file")->required();
  sim->add_option("--out", out_file, "Write JSON here instead of stdout");

  auto* check = app.add_subcommand("check", "Evaluate a composite condition");
  auto* check_model = check->add_option("--model", model_file, "Model JSON file");
  auto* check_moments = check->add_option("--moments", moments_file, "Moment set JSON file");
  check_model->excludes(check_moments);
  check->add_option("--which", which, "weak, int or strong")
      ->check(CLI::IsMember({"weak", "int", "strong"}))
      ->required();
  auto* check_eps = check->add_option("--epsilon", epsilon_flag, "Verdict tolerance (overrides MRTEST_EPSILON)");
  check->add_option("--out", out_file, "Write JSON here instead of stdout");

  auto* fine_cmd = app.add_subcommand("fine", "Joint-distribution feasibility of a moment set");
  fine_cmd->add_option("--moments", moments_file, "Moment set JSON file")->required();
  fine_cmd->add_option("--out", out_file, "Write JSON here instead of stdout");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep to CSV");
  sweep->add_option("--spec", spec_file, "Sweep spec JSON file")->required();
  sweep->add_option("--out", out_file, "CSV output file")->required();
  sweep->add_option("--jobs", jobs, "Worker threads (0 = hardware concurrency)");
  auto* sweep_eps = sweep->add_option("--epsilon", epsilon_flag, "Verdict tolerance (overrides spec and env)");

  auto* camp = app.add_subcommand("campaign", "Random-model invariant campaign");
  camp->add_option("--seed", campaign.seed, "Seed");
  camp->add_option("--count", campaign.count, "Number of models");
  camp->add_option("--dim-min", campaign.dim_min, "Smallest Hilbert-space dimension");
  camp->add_option("--dim-max", campaign.dim_max, "Largest Hilbert-space dimension");
  auto* camp_eps = camp->add_option("--epsilon", epsilon_flag, "Verdict tolerance (overrides MRTEST_EPSILON)");
  camp->add_option("--out", out_file, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  auto flag_value = [&](CLI::Option* opt) -> std::optional<double> {
    return opt->count() > 0 ? std::optional<double>(epsilon_flag) : std::nullopt;
  };

  try {
    if (*sim) {
      write_json(simulate(mrtest::model_from_json(mrtest::load_json_file(model_file))), out_file);
      return kExitPass;
    }

    if (*check) {
      const double eps = resolve_epsilon(flag_value(check_eps));
      require_epsilon(eps);
      if (model_file.empty() && moments_file.empty()) {
        throw mrtest::ValidationError("check needs --model or --moments");
      }
      std::optional<mrtest::ConditionReport> report;
      if (which == "weak") {
        const auto m = moments_file.empty()
                           ? mrtest::piecewise_moments(mrtest::model_from_json(mrtest::load_json_file(model_file)))
                           : mrtest::moments_from_json(mrtest::load_json_file(moments_file));
        report = mrtest::mr_weak(m, eps);
      } else {
        if (model_file.empty()) {
          throw mrtest::ValidationError("--which " + which + " needs --model (sequential tables are required)");
        }
        const auto model = mrtest::model_from_json(mrtest::load_json_file(model_file));
        report = which == "int" ? mrtest::mr_int(model, eps) : mrtest::mr_strong(model, eps);
      }
      write_json(mrtest::to_json(*report), out_file);
      return report->verdict() ? kExitPass : kExitFail;
    }

    if (*fine_cmd) {
      const auto result = mrtest::fine(mrtest::moments_from_json(mrtest::load_json_file(moments_file)));
      write_json(mrtest::to_json(result), out_file);
      return result.feasible ? kExitPass : kExitFail;
    }

    if (*sweep) {
      const std::filesystem::path spec_path(spec_file);
      auto spec = mrtest::sweep_from_json(mrtest::load_json_file(spec_path), spec_path.parent_path());
      if (auto flag = flag_value(sweep_eps)) {
        spec.epsilon = *flag;
      } else if (std::getenv("MRTEST_EPSILON") != nullptr) {
        spec.epsilon = resolve_epsilon(std::nullopt);
      }
      require_epsilon(spec.epsilon);
      if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
      const auto records = mrtest::run_sweep(spec, jobs);
      std::ofstream out(out_file, std::ios::binary);
      if (!out) throw mrtest::Error("cannot write " + out_file);
      mrtest::write_csv(out, spec, records);
      return kExitPass;
    }

    if (*camp) {
      campaign.epsilon = resolve_epsilon(flag_value(camp_eps));
      require_epsilon(campaign.epsilon);
      const auto summary = mrtest::random_campaign(campaign);
      write_json(mrtest::to_json(summary), out_file);
      if (summary.total_violations() > 0) {
        for (const auto& r : summary.reproducers) std::cerr << "violation: " << r << '\n';
        return kExitFail;
      }
      return kExitPass;
    }
  } catch (const mrtest::Error& e) {
    std::cerr << "mrtest: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "mrtest: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
