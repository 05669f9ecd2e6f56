#include <CLI11.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fairsim/harness.hpp"

namespace {

using namespace fairsim;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    std::size_t pos = 0;
    const double value = std::stod(token, &pos);
    if (pos != token.size()) throw std::invalid_argument("bad number '" + token + "'");
    out.push_back(value);
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_double_list(text)) out.push_back(static_cast<int>(v));
  return out;
}

struct CommonFlags {
  std::optional<std::string> config_path;
  std::optional<std::string> data_path;
  std::optional<int> y_max;
  std::optional<std::size_t> max_candidates;
  std::optional<int> n_queries;
  std::optional<int> n_items;
  std::optional<std::uint64_t> data_seed;
  std::optional<std::string> fractions;
  std::optional<std::uint64_t> split_seed;
  std::optional<std::string> policy;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<std::string> setting;
  std::optional<std::int64_t> steps;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<int> ks;
  std::optional<double> epsilon;
  std::optional<double> gamma;
  std::optional<std::string> cutoffs;
  std::optional<std::int64_t> checkpoint_every;
  std::optional<double> e0;
  std::optional<double> c0;
  bool random_ties = false;
  std::string out_dir = "fairsim_out";
  int threads = 0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON experiment config to start from");
  cmd->add_option("--data", flags.data_path, "LETOR file (gzip detected by magic bytes)");
  cmd->add_option("--y-max", flags.y_max, "maximum relevance grade");
  cmd->add_option("--max-candidates", flags.max_candidates,
                  "drop queries with more candidates than this (0 keeps all)");
  cmd->add_option("--n-queries", flags.n_queries, "synthetic: number of queries");
  cmd->add_option("--n-items", flags.n_items, "synthetic: candidates per query");
  cmd->add_option("--data-seed", flags.data_seed, "synthetic: generation seed");
  cmd->add_option("--fractions", flags.fractions, "train,validation,test split fractions");
  cmd->add_option("--split-seed", flags.split_seed, "partition shuffle seed");
  cmd->add_option("--policy", flags.policy,
                  "topk | explorek | fairk | fairco | fairco-explore | mcfair");
  cmd->add_option("--alpha", flags.alpha, "fairness weight");
  cmd->add_option("--beta", flags.beta, "exploration weight");
  cmd->add_option("--setting", flags.setting, "post_processing | online");
  cmd->add_option("--steps", flags.steps, "simulation steps per trial");
  cmd->add_option("--trials", flags.trials, "independent trials");
  cmd->add_option("--seed", flags.seed, "base seed for trial streams");
  cmd->add_option("--ks", flags.ks, "selection-bias cutoff k_s");
  cmd->add_option("--epsilon", flags.epsilon, "click-noise floor");
  cmd->add_option("--gamma", flags.gamma, "cNDCG discount factor");
  cmd->add_option("--cutoffs", flags.cutoffs, "comma list of evaluation cutoffs");
  cmd->add_option("--checkpoint-every", flags.checkpoint_every, "steps between checkpoints");
  cmd->add_option("--e0", flags.e0, "estimator exposure prior");
  cmd->add_option("--c0", flags.c0, "estimator click prior");
  cmd->add_flag("--random-ties", flags.random_ties, "break score ties with a seeded draw");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = OpenMP default)");
}

ExperimentConfig build_config(const CommonFlags& flags) {
  ExperimentConfig config;
  if (flags.config_path) {
    std::ifstream in(*flags.config_path);
    if (!in) throw std::runtime_error("cannot open config '" + *flags.config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    config = parse_experiment_config(buf.str());
  }

  if (flags.data_path) config.dataset.path = *flags.data_path;
  if (flags.y_max) config.dataset.y_max = *flags.y_max;
  if (flags.max_candidates) config.dataset.max_candidates = *flags.max_candidates;
  if (flags.n_queries) config.dataset.synthetic.n_queries = *flags.n_queries;
  if (flags.n_items) config.dataset.synthetic.n_items = *flags.n_items;
  if (flags.data_seed) config.dataset.synthetic.seed = *flags.data_seed;
  if (flags.fractions) {
    const auto f = parse_double_list(*flags.fractions);
    if (f.size() != 3) throw std::invalid_argument("--fractions needs exactly 3 values");
    config.dataset.fractions = {f[0], f[1], f[2]};
  }
  if (flags.split_seed) config.dataset.split_seed = *flags.split_seed;
  if (flags.policy) config.policy.kind = policy_kind_from_string(*flags.policy);
  if (flags.alpha) config.policy.alpha = *flags.alpha;
  if (flags.beta) config.policy.beta = *flags.beta;
  if (flags.setting) config.setting = setting_from_string(*flags.setting);
  if (flags.steps) config.steps = *flags.steps;
  if (flags.trials) config.trials = *flags.trials;
  if (flags.seed) config.base_seed = *flags.seed;
  if (flags.ks) config.k_s = *flags.ks;
  if (flags.epsilon) config.epsilon = *flags.epsilon;
  if (flags.gamma) config.gamma_eval = *flags.gamma;
  if (flags.cutoffs) config.cutoffs = parse_int_list(*flags.cutoffs);
  if (flags.checkpoint_every) config.checkpoint_every = *flags.checkpoint_every;
  if (flags.e0) config.e0 = *flags.e0;
  if (flags.c0) config.c0 = *flags.c0;
  if (flags.random_ties) config.policy.random_ties = true;

  config.resolve();
  config.validate();
  return config;
}

void set_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

int command_run(const CommonFlags& flags, bool dump_ledger) {
  set_threads(flags.threads);
  const ExperimentConfig config = build_config(flags);
  const Dataset dataset = load_dataset(config.dataset);

  const ExperimentResult result = run_experiment(config, dataset, dump_ledger);
  SweepResult sweep;
  sweep.experiments.push_back(result);

  const std::filesystem::path out(flags.out_dir);
  std::filesystem::create_directories(out);
  write_results_json(sweep, (out / "results.json").string());
  write_report(sweep, flags.out_dir);
  if (dump_ledger && !result.ledgers.empty()) {
    std::ofstream ledger_csv(out / "ledger_trial0.csv", std::ios::binary);
    result.ledgers.front().write_csv(ledger_csv);
  }
  if (result.failed) {
    std::cerr << "trial failed: " << result.error << '\n';
    return 1;
  }
  std::cout << "wrote " << (out / "results.json").string() << ", curve.csv, series.csv, curve.svg\n";
  return 0;
}

int command_sweep(const CommonFlags& flags, const std::string& alphas_text,
                  const std::string& betas_text) {
  set_threads(flags.threads);
  const ExperimentConfig config = build_config(flags);

  const SweepResult sweep =
      run_sweep(config, parse_double_list(alphas_text), parse_double_list(betas_text));

  const std::filesystem::path out(flags.out_dir);
  std::filesystem::create_directories(out);
  write_results_json(sweep, (out / "results.json").string());
  write_report(sweep, flags.out_dir);

  int failures = 0;
  for (const ExperimentResult& result : sweep.experiments) {
    if (result.failed) {
      ++failures;
      std::cerr << "grid point alpha=" << result.config.policy.alpha
                << " beta=" << result.config.policy.beta << " failed: " << result.error << '\n';
    }
  }
  std::cout << "swept " << sweep.experiments.size() << " grid points (" << failures
            << " failed), report in " << flags.out_dir << '\n';
  return failures == static_cast<int>(sweep.experiments.size()) ? 1 : 0;
}

int command_report(const std::string& in_dir, const std::string& out_dir) {
  const std::filesystem::path in(in_dir);
  const SweepResult results = read_results_json((in / "results.json").string());
  write_report(results, out_dir.empty() ? in_dir : out_dir);
  std::cout << "report written to " << (out_dir.empty() ? in_dir : out_dir) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairsim: exposure-fair ranking under biased click feedback"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  bool dump_ledger = false;
  CLI::App* run_cmd = app.add_subcommand("run", "run one configuration");
  add_common_flags(run_cmd, run_flags);
  run_cmd->add_flag("--dump-ledger", dump_ledger, "write trial 0's final ledger as CSV");

  CommonFlags sweep_flags;
  std::string alphas = "0,0.1,1,10,100,1000";
  std::string betas = "0";
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run an alpha/beta grid");
  add_common_flags(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--alphas", alphas, "comma list of alpha values");
  sweep_cmd->add_option("--betas", betas, "comma list of beta values");

  std::string report_in;
  std::string report_out;
  CLI::App* report_cmd = app.add_subcommand("report", "regenerate CSV/SVG from results.json");
  report_cmd->add_option("--in", report_in, "directory containing results.json")->required();
  report_cmd->add_option("--out", report_out, "output directory (default: --in)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return command_run(run_flags, dump_ledger);
    if (sweep_cmd->parsed()) return command_sweep(sweep_flags, alphas, betas);
    if (report_cmd->parsed()) return command_report(report_in, report_out);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 1;
  }
  return 0;
}
