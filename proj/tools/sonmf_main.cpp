// Command-line front end: factorize single matrices, run simulation studies,
// and process text corpora.  Every run writes a manifest.json that records
// the fully resolved configuration, seeds, input digests, and result metrics,
// so any run can be reproduced bit-identically from its manifest alone.
//
// Exit codes: 0 success, 2 invalid arguments or input content, 3 I/O failure,
// 4 numerical failure (the solver never accepted an update step).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "sonmf/matrix_io.hpp"
#include "sonmf/metrics.hpp"
#include "sonmf/random.hpp"
#include "sonmf/textpipe.hpp"
#include "sonmf/trials.hpp"
#include "sonmf/version.hpp"

namespace {

using nlohmann::json;
using namespace sonmf;

constexpr int kExitBadInput = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

// --- small utilities --------------------------------------------------------

std::uint64_t file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

std::string iso_utc_now() {
  const std::time_t t =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory: " + dir);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

std::string joined_argv(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// splitmix64: tiny deterministic generator for index shuffling, stable
// across platforms (unlike std::shuffle's distribution).
std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::uint64_t state = mix_seed(seed, 0x5917ull);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = splitmix64(state) % i;
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

json solver_config_json(const SolverConfig& cfg) {
  json j;
  j["method"] = to_string(cfg.solver);
  j["k"] = cfg.k;
  j["max_iters"] = cfg.max_iters;
  j["epsilon"] = cfg.epsilon;
  j["tau"] = cfg.tau;
  j["eta"] = cfg.eta;
  j["lognmf_step"] = cfg.lognmf_step;
  j["init"] = to_string(cfg.init);
  j["seed"] = cfg.seed;
  return j;
}

// Raw objective trace in the same tidy layout the study CSVs use.
std::string run_trace_csv(const std::string& method,
                          const std::vector<double>& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "iteration,method,value\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    os << (i + 1) << ',' << method << ',' << trace[i] << '\n';
  return os.str();
}

MetricsRecord run_metrics(const Matrix& x, const SolverConfig& cfg,
                          const FactorizationResult& res) {
  MetricsRecord m;
  const double np = static_cast<double>(x.rows() * x.cols());
  if (solver_wants_binary(cfg.solver)) {
    if (!res.objective_trace.empty())
      m.mean_cost = res.objective_trace.back() / np;
  } else {
    m.average_residual = average_residual(x, res.f, res.g);
  }
  if (res.max_orth_residual)
    m.orthogonal_residual = orthogonal_residual(res.f);
  m.sparsity_f_pct = sparsity_pct(res.f);
  m.sparsity_g_pct = sparsity_pct(res.g);
  std::vector<double> normalized(res.objective_trace.size());
  for (std::size_t i = 0; i < normalized.size(); ++i)
    normalized[i] = res.objective_trace[i] / np;
  const ThresholdCrossing tc = iterations_to_threshold(normalized);
  m.iterations_to_threshold = tc.iterations;
  m.threshold_reached = tc.reached;
  m.elapsed_seconds = res.elapsed_seconds;
  return m;
}

int finish_run(const std::string& out_dir, json manifest,
               const FactorizationResult& res) {
  manifest["timestamps"]["finished"] = iso_utc_now();
  write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
  if (res.termination == Termination::stalled) {
    std::cerr << "numerical failure: no update step was accepted\n";
    return kExitNumerical;
  }
  return 0;
}

// --- factorize --------------------------------------------------------------

struct FactorizeArgs {
  std::string input;
  std::string method = "sonmf";
  std::string init = "svd";
  std::string out = "sonmf_out";
  SolverConfig cfg;
};

int cmd_factorize(const FactorizeArgs& a, const std::string& argv_line) {
  const std::string started = iso_utc_now();
  SolverConfig cfg = a.cfg;
  cfg.solver = solver_from_string(a.method);
  cfg.init = init_mode_from_string(a.init);

  const Matrix x = read_matrix_any(a.input);
  const FactorizationResult res = run_solver(x, cfg);
  const MetricsRecord metrics = run_metrics(x, cfg, res);

  ensure_out_dir(a.out);
  write_matrix_market(a.out + "/f.mtx", res.f);
  write_matrix_market(a.out + "/g.mtx", res.g);
  write_text(a.out + "/trace.csv",
             run_trace_csv(to_string(cfg.solver), res.objective_trace));

  json manifest;
  manifest["command"] = "factorize";
  manifest["argv"] = argv_line;
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["config"] = solver_config_json(cfg);
  manifest["input"] = {{"path", a.input},
                       {"file_digest", file_digest(a.input)},
                       {"matrix_digest", matrix_digest(x)},
                       {"rows", x.rows()},
                       {"cols", x.cols()}};
  manifest["result"] = json::parse(result_stats_json(res));
  manifest["metrics"] = json::parse(metrics_json(metrics));
  manifest["outputs"] = {"f.mtx", "g.mtx", "trace.csv", "manifest.json"};
  manifest["timestamps"]["started"] = started;
  return finish_run(a.out, std::move(manifest), res);
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  std::string scenario = "cont1";
  Index p = 500;
  Index n = 500;
  Index true_rank = 10;
  double noise_sd = 0.3;
  int trials = 20;
  std::string study = "methods";
  std::vector<std::string> methods = {"sonmf", "semi", "nmf", "onmf"};
  std::vector<double> etas = {0.05, 0.01, 0.001};
  std::string init = "svd";
  std::string out = "sonmf_out";
  int jobs = 1;
  SolverConfig cfg;
};

int cmd_simulate(const SimulateArgs& a, const std::string& argv_line) {
  const std::string started = iso_utc_now();
  ScenarioSpec spec;
  spec.id = scenario_from_string(a.scenario);
  spec.p = a.p;
  spec.n = a.n;
  spec.true_rank = a.true_rank;
  spec.noise_sd = a.noise_sd;
  spec.seed = a.cfg.seed;

  SolverConfig base = a.cfg;
  base.init = init_mode_from_string(a.init);

  TrialSummary summary;
  if (a.study == "methods") {
    std::vector<SolverConfig> series;
    for (const std::string& name : a.methods) {
      SolverConfig c = base;
      c.solver = solver_from_string(name);
      series.push_back(c);
    }
    summary = run_trials(spec, a.trials, series, a.jobs);
  } else if (a.study == "init") {
    if (a.methods.size() != 1)
      throw DimensionError("--study init expects exactly one --methods entry");
    base.solver = solver_from_string(a.methods.front());
    summary = run_init_study(
        spec, a.trials, base,
        {InitMode::svd, InitMode::kmeans, InitMode::random}, a.jobs);
  } else if (a.study == "step-size") {
    if (a.methods.size() != 1)
      throw DimensionError(
          "--study step-size expects exactly one --methods entry");
    base.solver = solver_from_string(a.methods.front());
    summary = run_step_size_study(spec, a.trials, base, a.etas, a.jobs);
  } else {
    throw DimensionError("unknown --study: " + a.study +
                         " (expected methods, init, or step-size)");
  }

  ensure_out_dir(a.out);
  write_text(a.out + "/summary.json", trial_summary_json(summary) + "\n");
  write_text(a.out + "/traces.csv", trial_traces_csv(summary));
  const std::string eps_csv = trial_eps_p_csv(summary);
  if (!eps_csv.empty()) write_text(a.out + "/eps_p.csv", eps_csv);

  json manifest;
  manifest["command"] = "simulate";
  manifest["argv"] = argv_line;
  manifest["version"] = kVersion;
  manifest["seed"] = spec.seed;
  manifest["config"] = {{"scenario", a.scenario},
                        {"p", spec.p},
                        {"n", spec.n},
                        {"true_rank", spec.true_rank},
                        {"noise_sd", spec.noise_sd},
                        {"trials", a.trials},
                        {"study", a.study},
                        {"methods", a.methods},
                        {"etas", a.etas},
                        {"jobs", a.jobs},
                        {"solver", solver_config_json(base)}};
  manifest["outputs"] = {"summary.json", "traces.csv", "manifest.json"};
  if (!eps_csv.empty()) manifest["outputs"].push_back("eps_p.csv");
  manifest["series_labels"] = json::array();
  for (const SeriesSummary& ss : summary.series)
    manifest["series_labels"].push_back(ss.label);
  manifest["x_digests"] = summary.x_digests;
  manifest["timestamps"]["started"] = started;
  manifest["timestamps"]["finished"] = iso_utc_now();
  write_text(a.out + "/manifest.json", manifest.dump(2) + "\n");
  return 0;
}

// --- textpipe ---------------------------------------------------------------

struct TextpipeArgs {
  std::string corpus;
  std::string format = "auto";
  std::string weighting = "tfidf";
  std::string method = "sonmf";
  std::string init = "svd";
  std::string out = "sonmf_out";
  int min_df = 1;
  double test_split = 0.0;
  SolverConfig cfg;
};

CorpusFormat corpus_format_from_string(const std::string& name) {
  if (name == "auto") return CorpusFormat::auto_detect;
  if (name == "plain") return CorpusFormat::plain;
  if (name == "labeled") return CorpusFormat::labeled;
  throw DimensionError("unknown corpus format: " + name);
}

std::string features_csv(const Matrix& features,
                         const std::vector<std::size_t>& doc_ids,
                         const std::vector<std::string>& labels) {
  std::ostringstream os;
  os.precision(17);
  os << "doc_id,label";
  for (Index j = 0; j < features.cols(); ++j) os << ",f" << (j + 1);
  os << '\n';
  for (Index i = 0; i < features.rows(); ++i) {
    os << doc_ids[static_cast<std::size_t>(i)] << ','
       << labels[static_cast<std::size_t>(i)];
    for (Index j = 0; j < features.cols(); ++j) os << ',' << features(i, j);
    os << '\n';
  }
  return os.str();
}

int cmd_textpipe(const TextpipeArgs& a, const std::string& argv_line) {
  const std::string started = iso_utc_now();
  SolverConfig cfg = a.cfg;
  cfg.solver = solver_from_string(a.method);
  cfg.init = init_mode_from_string(a.init);
  const Weighting scheme = weighting_from_string(a.weighting);
  if (a.test_split < 0.0 || a.test_split >= 1.0)
    throw DimensionError("--test-split must lie in [0, 1)");

  const std::vector<Document> corpus =
      read_corpus(a.corpus, corpus_format_from_string(a.format));

  // Deterministic split: shuffle document indices under the run seed, then
  // take the tail as the held-out set.
  std::vector<std::size_t> train_ids(corpus.size());
  std::iota(train_ids.begin(), train_ids.end(), std::size_t{0});
  std::vector<std::size_t> test_ids;
  if (a.test_split > 0.0) {
    const auto n_test = static_cast<std::size_t>(
        std::llround(a.test_split * static_cast<double>(corpus.size())));
    if (n_test == 0 || n_test >= corpus.size())
      throw DimensionError("--test-split leaves an empty train or test side");
    std::vector<std::size_t> order = shuffled_indices(corpus.size(), cfg.seed);
    test_ids.assign(order.end() - static_cast<std::ptrdiff_t>(n_test),
                    order.end());
    order.resize(corpus.size() - n_test);
    train_ids = std::move(order);
    std::sort(train_ids.begin(), train_ids.end());
    std::sort(test_ids.begin(), test_ids.end());
  }
  const auto pick = [&corpus](const std::vector<std::size_t>& ids) {
    std::vector<Document> docs;
    docs.reserve(ids.size());
    for (std::size_t i : ids) docs.push_back(corpus[i]);
    return docs;
  };
  const std::vector<Document> train_docs = pick(train_ids);
  const std::vector<Document> test_docs = pick(test_ids);

  const BagOfWords bow =
      build_bag_of_words(train_docs, a.min_df, default_stopwords());
  const Matrix x = weight_matrix(bow, scheme);
  const FactorizationResult res = run_solver(x, cfg);
  const MetricsRecord metrics = run_metrics(x, cfg, res);

  ensure_out_dir(a.out);
  write_matrix_market(a.out + "/f.mtx", res.f);
  write_matrix_market(a.out + "/g.mtx", res.g);
  write_text(a.out + "/trace.csv",
             run_trace_csv(to_string(cfg.solver), res.objective_trace));
  write_text(a.out + "/topics.txt",
             topics_text(topic_summary(res.f, bow.vocabulary, 5)));
  {
    std::ostringstream os;
    os << "term,doc_freq\n";
    for (std::size_t t = 0; t < bow.vocabulary.size(); ++t)
      os << bow.vocabulary[t] << ',' << bow.doc_freq[t] << '\n';
    write_text(a.out + "/vocab.csv", os.str());
  }
  const auto labels_of = [&corpus](const std::vector<std::size_t>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (std::size_t i : ids) out.push_back(corpus[i].label);
    return out;
  };
  write_text(a.out + "/features_train.csv",
             features_csv(project_features(x, res.f), train_ids,
                          labels_of(train_ids)));

  long dropped_tokens = 0;
  if (!test_ids.empty()) {
    const VectorizeStats vs =
        vectorize_against(bow, test_docs, default_stopwords());
    dropped_tokens = vs.dropped_tokens;
    if (dropped_tokens > 0)
      std::cerr << "warning: dropped " << dropped_tokens
                << " out-of-vocabulary token(s) from the test split\n";
    const Matrix x_test = weight_against(bow, vs.counts, scheme);
    write_text(a.out + "/features_test.csv",
               features_csv(project_features(x_test, res.f), test_ids,
                            labels_of(test_ids)));
  }

  json manifest;
  manifest["command"] = "textpipe";
  manifest["argv"] = argv_line;
  manifest["version"] = kVersion;
  manifest["seed"] = cfg.seed;
  manifest["config"] = {{"corpus", a.corpus},
                        {"format", a.format},
                        {"weighting", a.weighting},
                        {"min_df", a.min_df},
                        {"test_split", a.test_split},
                        {"topic_terms_per_side", 5},
                        {"solver", solver_config_json(cfg)}};
  manifest["input"] = {{"path", a.corpus},
                       {"file_digest", file_digest(a.corpus)},
                       {"documents", corpus.size()},
                       {"train_documents", train_ids.size()},
                       {"test_documents", test_ids.size()},
                       {"vocabulary_size", bow.vocabulary.size()},
                       {"matrix_digest", matrix_digest(x)},
                       {"dropped_test_tokens", dropped_tokens}};
  manifest["result"] = json::parse(result_stats_json(res));
  manifest["metrics"] = json::parse(metrics_json(metrics));
  manifest["outputs"] = {"f.mtx",      "g.mtx",
                         "trace.csv",  "topics.txt",
                         "vocab.csv",  "features_train.csv",
                         "manifest.json"};
  if (!test_ids.empty()) manifest["outputs"].push_back("features_test.csv");
  manifest["timestamps"]["started"] = started;
  return finish_run(a.out, std::move(manifest), res);
}

// --- argument wiring --------------------------------------------------------

void add_solver_flags(CLI::App* cmd, SolverConfig* cfg, std::string* init) {
  cmd->add_option("--k", cfg->k, "Factorization rank")->capture_default_str();
  cmd->add_option("--max-iters", cfg->max_iters, "Outer iteration budget")
      ->capture_default_str();
  cmd->add_option("--epsilon", cfg->epsilon,
                  "Stop when the objective decrease falls inside [0, epsilon]")
      ->capture_default_str();
  cmd->add_option("--tau", cfg->tau,
                  "Initial orthogonality-preserving step size (0 = default)")
      ->capture_default_str();
  cmd->add_option("--eta", cfg->eta, "Newton step size for the binary solver")
      ->capture_default_str();
  cmd->add_option("--seed", cfg->seed, "Random seed")
      ->envname("SONMF_KIT_SEED")
      ->capture_default_str();
  cmd->add_option("--init", *init, "F initialization: svd, kmeans, or random")
      ->check(CLI::IsMember({"svd", "kmeans", "random"}))
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-orthogonal matrix factorization toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  // Config files hold options under a section named after the subcommand,
  // e.g. [simulate].  The flag may appear before or after the subcommand.
  app.set_config("--config", "",
                 "Read options from a TOML-style file ([subcommand] section)");
  const std::string argv_line = joined_argv(argc, argv);

  FactorizeArgs fa;
  CLI::App* fac = app.add_subcommand(
      "factorize", "Factorize a matrix file and write F, G, trace, manifest");
  fac->fallthrough(true);
  fac->add_option("input", fa.input, "Matrix file (.mtx or CSV)")->required();
  fac->add_option("--method", fa.method,
                  "sonmf, sonmf-binary, nmf, onmf, semi, or lognmf")
      ->check(CLI::IsMember(
          {"sonmf", "sonmf-binary", "nmf", "onmf", "semi", "lognmf"}))
      ->capture_default_str();
  fac->add_option("--out", fa.out, "Output directory")->capture_default_str();
  add_solver_flags(fac, &fa.cfg, &fa.init);

  SimulateArgs sa;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Run a multi-trial synthetic study and write its summary");
  sim->fallthrough(true);
  sim->add_option("--scenario", sa.scenario,
                  "cont1, cont2, cont3, binary, or rank_deficient")
      ->check(CLI::IsMember(
          {"cont1", "cont2", "cont3", "binary", "rank_deficient"}))
      ->capture_default_str();
  sim->add_option("--p", sa.p, "Rows of the generated matrix")
      ->capture_default_str();
  sim->add_option("--n", sa.n, "Columns of the generated matrix")
      ->capture_default_str();
  sim->add_option("--true-rank", sa.true_rank, "Rank of the generating truth")
      ->capture_default_str();
  sim->add_option("--noise-sd", sa.noise_sd, "Noise standard deviation")
      ->capture_default_str();
  sim->add_option("--trials", sa.trials, "Independent trials to average")
      ->capture_default_str();
  sim->add_option("--study", sa.study, "methods, init, or step-size")
      ->check(CLI::IsMember({"methods", "init", "step-size"}))
      ->capture_default_str();
  sim->add_option("--methods", sa.methods,
                  "Solvers to compare (one entry for init/step-size studies)");
  sim->add_option("--etas", sa.etas, "Step sizes for --study step-size");
  sim->add_option("--jobs", sa.jobs, "Worker threads for trials")
      ->capture_default_str();
  sim->add_option("--out", sa.out, "Output directory")->capture_default_str();
  add_solver_flags(sim, &sa.cfg, &sa.init);

  TextpipeArgs ta;
  CLI::App* txt = app.add_subcommand(
      "textpipe", "Vectorize a corpus, factorize it, and write topics");
  txt->fallthrough(true);
  txt->add_option("corpus", ta.corpus, "Corpus file (one document per line)")
      ->required();
  txt->add_option("--format", ta.format, "auto, plain, or labeled")
      ->check(CLI::IsMember({"auto", "plain", "labeled"}))
      ->capture_default_str();
  txt->add_option("--weighting", ta.weighting, "tfidf or binary")
      ->check(CLI::IsMember({"tfidf", "binary"}))
      ->capture_default_str();
  txt->add_option("--method", ta.method,
                  "sonmf, sonmf-binary, nmf, onmf, semi, or lognmf")
      ->check(CLI::IsMember(
          {"sonmf", "sonmf-binary", "nmf", "onmf", "semi", "lognmf"}))
      ->capture_default_str();
  txt->add_option("--min-df", ta.min_df,
                  "Drop terms appearing in fewer documents than this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  txt->add_option("--test-split", ta.test_split,
                  "Held-out document fraction in [0, 1)")
      ->capture_default_str();
  txt->add_option("--out", ta.out, "Output directory")->capture_default_str();
  add_solver_flags(txt, &ta.cfg, &ta.init);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (fac->parsed()) return cmd_factorize(fa, argv_line);
    if (sim->parsed()) return cmd_simulate(sa, argv_line);
    return cmd_textpipe(ta, argv_line);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const DimensionError& e) {
    std::cerr << "invalid arguments: " << e.what() << '\n';
    return kExitBadInput;
  } catch (const Error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
