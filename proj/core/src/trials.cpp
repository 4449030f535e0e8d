#include "sonmf/trials.hpp"

#include <cmath>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "sonmf/random.hpp"

namespace sonmf {

Solver solver_from_string(const std::string& name) {
  if (name == "sonmf") return Solver::sonmf;
  if (name == "sonmf-binary") return Solver::sonmf_binary;
  if (name == "nmf") return Solver::nmf;
  if (name == "onmf") return Solver::onmf;
  if (name == "semi") return Solver::semi;
  if (name == "lognmf") return Solver::lognmf;
  throw DimensionError("unknown method: " + name);
}

std::string to_string(Solver s) {
  switch (s) {
    case Solver::sonmf: return "sonmf";
    case Solver::sonmf_binary: return "sonmf-binary";
    case Solver::nmf: return "nmf";
    case Solver::onmf: return "onmf";
    case Solver::semi: return "semi";
    case Solver::lognmf: return "lognmf";
  }
  return "?";
}

bool solver_wants_binary(Solver s) {
  return s == Solver::sonmf_binary || s == Solver::lognmf;
}

FactorizationResult run_solver(const Matrix& x, const SolverConfig& cfg,
                               const IterationObserver& observer) {
  switch (cfg.solver) {
    case Solver::sonmf: {
      ContinuousOptions o;
      o.k = cfg.k;
      o.max_iters = cfg.max_iters;
      o.epsilon = cfg.epsilon;
      o.tau = cfg.tau > 0.0 ? cfg.tau : 0.5;
      o.init = cfg.init;
      o.seed = cfg.seed;
      return factorize_continuous(x, o, observer);
    }
    case Solver::sonmf_binary: {
      BinaryOptions o;
      o.k = cfg.k;
      o.max_iters = cfg.max_iters;
      o.epsilon = cfg.epsilon;
      o.tau = cfg.tau > 0.0 ? cfg.tau : 2.0;
      o.eta = cfg.eta;
      o.init = cfg.init;
      o.seed = cfg.seed;
      return factorize_binary(x, o, observer);
    }
    default: {
      BaselineOptions o;
      o.k = cfg.k;
      o.max_iters = cfg.max_iters;
      o.epsilon = cfg.epsilon;
      o.seed = cfg.seed;
      o.step = cfg.lognmf_step;
      BaselineMethod m;
      switch (cfg.solver) {
        case Solver::nmf: m = BaselineMethod::nmf_mu; break;
        case Solver::onmf: m = BaselineMethod::onmf; break;
        case Solver::semi: m = BaselineMethod::semi; break;
        default: m = BaselineMethod::lognmf; break;
      }
      return factorize_baseline(x, m, o, observer);
    }
  }
}

namespace {

bool tracks_orthonormality(Solver s) {
  return s == Solver::sonmf || s == Solver::sonmf_binary || s == Solver::onmf;
}

struct TrialOutput {
  std::uint64_t x_digest = 0;
  double true_value = 0.0;
  std::vector<RunRecord> records;
  std::vector<std::vector<double>> traces;      // normalized, padded
  std::vector<std::vector<double>> eps_traces;  // may stay empty
  std::vector<double> iters_to_target;
};

TrialOutput run_one_trial(const ScenarioSpec& base, int trial,
                          const std::vector<SolverConfig>& series,
                          bool want_eps_trace) {
  ScenarioSpec spec = base;
  spec.seed = base.seed + static_cast<std::uint64_t>(trial);
  const ScenarioData data = generate_scenario(spec);
  const double entries = static_cast<double>(spec.p * spec.n);
  const bool binary_scenario = spec.id == ScenarioId::binary;

  TrialOutput out;
  out.x_digest = matrix_digest(data.x);
  out.true_value =
      binary_scenario
          ? binary_cost(data.x, data.f_true, data.g_true).mean
          : average_residual(data.x, data.f_true, data.g_true);

  for (size_t s = 0; s < series.size(); ++s) {
    SolverConfig cfg = series[s];
    cfg.seed = mix_seed(spec.seed, 0x50e0 + s);

    std::vector<double> eps_trace;
    IterationObserver obs;
    if (want_eps_trace && binary_scenario) {
      obs = [&](int, const Matrix& f, const Matrix& g) {
        eps_trace.push_back(probability_error(*data.p_true, f, g));
      };
    }

    const FactorizationResult r = run_solver(data.x, cfg, obs);

    std::vector<double> trace(r.objective_trace.size());
    for (size_t i = 0; i < trace.size(); ++i)
      trace[i] = r.objective_trace[i] / entries;
    const double pad = trace.empty() ? 0.0 : trace.back();
    trace.resize(static_cast<size_t>(cfg.max_iters), pad);
    if (!eps_trace.empty())
      eps_trace.resize(static_cast<size_t>(cfg.max_iters), eps_trace.back());

    RunRecord rec;
    rec.x_digest = out.x_digest;
    rec.termination = to_string(r.termination);
    MetricsRecord& m = rec.metrics;
    if (binary_scenario) {
      m.mean_cost = r.objective_trace.empty()
                        ? binary_cost(data.x, r.f, r.g).mean
                        : r.objective_trace.back() / entries;
      m.eps_p = probability_error(*data.p_true, r.f, r.g);
    } else {
      m.average_residual = average_residual(data.x, r.f, r.g);
    }
    if (tracks_orthonormality(cfg.solver))
      m.orthogonal_residual = orthogonal_residual(r.f);
    m.eps_f = subspace_error(data.f_true, r.f);
    m.eps_g = subspace_error(data.g_true, r.g);
    m.sparsity_f_pct = sparsity_pct(r.f);
    m.sparsity_g_pct = sparsity_pct(r.g);
    const ThresholdCrossing cross = iterations_to_threshold(trace);
    m.iterations_to_threshold = cross.iterations;
    m.threshold_reached = cross.reached;
    m.elapsed_seconds = r.elapsed_seconds;

    double to_target = static_cast<double>(cfg.max_iters) + 1.0;
    for (size_t i = 0; i < trace.size(); ++i)
      if (trace[i] <= out.true_value) {
        to_target = static_cast<double>(i) + 1.0;
        break;
      }

    out.records.push_back(std::move(rec));
    out.traces.push_back(std::move(trace));
    out.eps_traces.push_back(std::move(eps_trace));
    out.iters_to_target.push_back(to_target);
  }
  return out;
}

std::optional<double> mean_optional(
    const std::vector<RunRecord>& runs,
    std::optional<double> MetricsRecord::*field) {
  double sum = 0.0;
  int count = 0;
  for (const RunRecord& r : runs)
    if (r.metrics.*field) {
      sum += *(r.metrics.*field);
      ++count;
    }
  if (count == 0) return std::nullopt;
  return sum / count;
}

TrialSummary aggregate(const ScenarioSpec& scenario, int trials,
                       const std::vector<SolverConfig>& series,
                       const std::vector<std::string>& labels,
                       std::vector<TrialOutput>& outputs) {
  TrialSummary summary;
  summary.scenario = scenario;
  summary.trials = trials;
  for (const TrialOutput& o : outputs) {
    summary.x_digests.push_back(o.x_digest);
    summary.mean_true_value += o.true_value / trials;
  }

  for (size_t s = 0; s < series.size(); ++s) {
    SeriesSummary ss;
    ss.label = labels[s];
    ss.config = series[s];
    for (TrialOutput& o : outputs) {
      ss.runs.push_back(o.records[s]);
      if (ss.mean_trace.empty()) ss.mean_trace.assign(o.traces[s].size(), 0.0);
      for (size_t i = 0; i < o.traces[s].size(); ++i)
        ss.mean_trace[i] += o.traces[s][i] / trials;
      if (!o.eps_traces[s].empty()) {
        if (ss.mean_eps_p_trace.empty())
          ss.mean_eps_p_trace.assign(o.eps_traces[s].size(), 0.0);
        for (size_t i = 0; i < o.eps_traces[s].size(); ++i)
          ss.mean_eps_p_trace[i] += o.eps_traces[s][i] / trials;
      }
      ss.mean_iters_to_target += o.iters_to_target[s] / trials;
    }

    MetricsRecord& m = ss.mean;
    m.average_residual =
        mean_optional(ss.runs, &MetricsRecord::average_residual);
    m.mean_cost = mean_optional(ss.runs, &MetricsRecord::mean_cost);
    m.orthogonal_residual =
        mean_optional(ss.runs, &MetricsRecord::orthogonal_residual);
    m.eps_f = mean_optional(ss.runs, &MetricsRecord::eps_f);
    m.eps_g = mean_optional(ss.runs, &MetricsRecord::eps_g);
    m.eps_p = mean_optional(ss.runs, &MetricsRecord::eps_p);
    m.threshold_reached = true;
    for (const RunRecord& r : ss.runs) {
      m.sparsity_f_pct += r.metrics.sparsity_f_pct / trials;
      m.sparsity_g_pct += r.metrics.sparsity_g_pct / trials;
      m.iterations_to_threshold += r.metrics.iterations_to_threshold / trials;
      m.elapsed_seconds += r.metrics.elapsed_seconds;
      m.threshold_reached = m.threshold_reached && r.metrics.threshold_reached;
    }
    summary.series.push_back(std::move(ss));
  }
  return summary;
}

TrialSummary run_study(const ScenarioSpec& scenario, int trials,
                       const std::vector<SolverConfig>& series,
                       const std::vector<std::string>& labels, int jobs,
                       bool want_eps_trace) {
  require(trials >= 1, "run_trials: need at least one trial");
  require(!series.empty(), "run_trials: no series configured");
  for (const SolverConfig& cfg : series) {
    const bool want = solver_wants_binary(cfg.solver);
    const bool have = scenario.id == ScenarioId::binary;
    if (want != have)
      throw DimensionError("method " + to_string(cfg.solver) +
                           (want ? " needs the binary scenario"
                                 : " cannot consume binary data"));
  }

  std::vector<TrialOutput> outputs(static_cast<size_t>(trials));
  const int workers = std::max(1, std::min(jobs, trials));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t)
      outputs[static_cast<size_t>(t)] =
          run_one_trial(scenario, t, series, want_eps_trace);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (int t = w; t < trials; t += workers)
          outputs[static_cast<size_t>(t)] =
              run_one_trial(scenario, t, series, want_eps_trace);
      });
    }
    for (std::thread& th : pool) th.join();
  }
  return aggregate(scenario, trials, series, labels, outputs);
}

}  // namespace

TrialSummary run_trials(const ScenarioSpec& scenario, int trials,
                        const std::vector<SolverConfig>& series, int jobs) {
  std::vector<std::string> labels;
  for (const SolverConfig& cfg : series) labels.push_back(to_string(cfg.solver));
  return run_study(scenario, trials, series, labels, jobs,
                   scenario.id == ScenarioId::binary);
}

TrialSummary run_init_study(const ScenarioSpec& scenario, int trials,
                            const SolverConfig& base,
                            const std::vector<InitMode>& modes, int jobs) {
  require(!modes.empty(), "run_init_study: no init modes given");
  std::vector<SolverConfig> series;
  std::vector<std::string> labels;
  for (InitMode mode : modes) {
    SolverConfig cfg = base;
    cfg.init = mode;
    series.push_back(cfg);
    labels.push_back(to_string(mode));
  }
  return run_study(scenario, trials, series, labels, jobs, false);
}

TrialSummary run_step_size_study(const ScenarioSpec& scenario, int trials,
                                 const SolverConfig& base,
                                 const std::vector<double>& etas, int jobs) {
  require(!etas.empty(), "run_step_size_study: no eta values given");
  require(solver_wants_binary(base.solver),
          "run_step_size_study: needs a Bernoulli solver");
  std::vector<SolverConfig> series;
  std::vector<std::string> labels;
  for (double eta : etas) {
    SolverConfig cfg = base;
    cfg.eta = eta;
    series.push_back(cfg);
    std::ostringstream label;
    label << "eta=" << eta;
    labels.push_back(label.str());
  }
  return run_study(scenario, trials, series, labels, jobs, true);
}

namespace {

nlohmann::json scenario_json(const ScenarioSpec& s) {
  nlohmann::json j;
  j["id"] = to_string(s.id);
  j["p"] = s.p;
  j["n"] = s.n;
  j["true_rank"] = s.true_rank;
  j["noise_sd"] = s.noise_sd;
  j["seed"] = s.seed;
  return j;
}

}  // namespace

std::string trial_summary_json(const TrialSummary& s) {
  nlohmann::json j;
  j["scenario"] = scenario_json(s.scenario);
  j["trials"] = s.trials;
  j["mean_true_value"] = s.mean_true_value;
  j["x_digests"] = s.x_digests;
  j["series"] = nlohmann::json::array();
  for (const SeriesSummary& ss : s.series) {
    nlohmann::json e;
    e["label"] = ss.label;
    e["solver"] = to_string(ss.config.solver);
    e["init"] = to_string(ss.config.init);
    e["eta"] = ss.config.eta;
    e["mean_metrics"] = nlohmann::json::parse(metrics_json(ss.mean));
    e["mean_iters_to_target"] = ss.mean_iters_to_target;
    e["runs"] = nlohmann::json::array();
    for (const RunRecord& r : ss.runs) {
      nlohmann::json rj;
      rj["metrics"] = nlohmann::json::parse(metrics_json(r.metrics));
      rj["x_digest"] = r.x_digest;
      rj["termination"] = r.termination;
      e["runs"].push_back(std::move(rj));
    }
    j["series"].push_back(std::move(e));
  }
  return j.dump(2);
}

namespace {

std::string traces_csv(const TrialSummary& s, bool eps) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,method,value\n";
  for (const SeriesSummary& ss : s.series) {
    const std::vector<double>& trace = eps ? ss.mean_eps_p_trace : ss.mean_trace;
    for (size_t i = 0; i < trace.size(); ++i)
      os << (i + 1) << ',' << ss.label << ',' << trace[i] << '\n';
  }
  return os.str();
}

}  // namespace

std::string trial_traces_csv(const TrialSummary& s) {
  return traces_csv(s, false);
}

std::string trial_eps_p_csv(const TrialSummary& s) {
  bool any = false;
  for (const SeriesSummary& ss : s.series)
    any = any || !ss.mean_eps_p_trace.empty();
  if (!any) return "";
  return traces_csv(s, true);
}

}  // namespace sonmf
