#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sonmf/baselines.hpp"
#include "sonmf/binary.hpp"
#include "sonmf/continuous.hpp"
#include "sonmf/metrics.hpp"
#include "sonmf/scenario.hpp"

namespace sonmf {

enum class Solver { sonmf, sonmf_binary, nmf, onmf, semi, lognmf };

Solver solver_from_string(const std::string& name);
std::string to_string(Solver s);
bool solver_wants_binary(Solver s);

// One bag of knobs covering every solver; each solver reads its subset.
struct SolverConfig {
  Solver solver = Solver::sonmf;
  Index k = 10;
  int max_iters = 500;
  double epsilon = 1e-4;
  double tau = 0.0;   // 0 means the solver default (0.5 continuous, 2 binary)
  double eta = 0.05;
  double lognmf_step = 0.001;
  InitMode init = InitMode::svd;
  std::uint64_t seed = 0;
};

FactorizationResult run_solver(const Matrix& x, const SolverConfig& cfg,
                               const IterationObserver& observer = {});

// --- studies ----------------------------------------------------------------

// What gets averaged for one label (a method, an init mode, or an eta value).
struct RunRecord {
  MetricsRecord metrics;
  std::uint64_t x_digest = 0;  // digest of the instance this run consumed
  std::string termination;
};

struct SeriesSummary {
  std::string label;
  SolverConfig config;
  std::vector<RunRecord> runs;        // one per trial
  MetricsRecord mean;                 // averaged over trials
  std::vector<double> mean_trace;     // normalized objective, padded to budget
  std::vector<double> mean_eps_p_trace;  // binary studies only, else empty
  double mean_iters_to_target = 0.0;  // step-size study, else 0
};

struct TrialSummary {
  ScenarioSpec scenario;
  int trials = 0;
  std::vector<SeriesSummary> series;
  std::vector<std::uint64_t> x_digests;  // one per trial, shared by series
  // Normalized objective of the generating truth, averaged over trials
  // (average residual for continuous scenarios, mean cost for binary).
  double mean_true_value = 0.0;
};

// Runs every configured series on the same generated instance per trial
// (trial t uses scenario.seed + t).  Throws DimensionError when a series
// cannot consume the scenario (a Bernoulli solver on continuous data or the
// reverse).  jobs > 1 distributes trials over threads; summaries are
// aggregated in trial order, so results are identical for any jobs value.
TrialSummary run_trials(const ScenarioSpec& scenario, int trials,
                        const std::vector<SolverConfig>& series, int jobs = 1);

// Same instance and solver per trial, one series per initialization mode.
TrialSummary run_init_study(const ScenarioSpec& scenario, int trials,
                            const SolverConfig& base,
                            const std::vector<InitMode>& modes, int jobs = 1);

// Bernoulli solver swept over eta.  Each series tracks the probability-error
// trace and the mean first iteration whose mean cost falls below the truth's
// (budget + 1 when never reached).
TrialSummary run_step_size_study(const ScenarioSpec& scenario, int trials,
                                 const SolverConfig& base,
                                 const std::vector<double>& etas, int jobs = 1);

std::string trial_summary_json(const TrialSummary& s);

// Long-form trace table, columns iteration,method,value (one row per series
// per iteration of the mean normalized objective).
std::string trial_traces_csv(const TrialSummary& s);

// Same layout for the probability-error traces; empty string when none.
std::string trial_eps_p_csv(const TrialSummary& s);

}  // namespace sonmf
