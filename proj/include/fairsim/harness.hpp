#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "fairsim/dataset.hpp"
#include "fairsim/estimator.hpp"
#include "fairsim/metrics.hpp"
#include "fairsim/policies.hpp"

namespace fairsim {

struct SyntheticSpec {
  int n_queries = 50;
  int n_items = 15;
  std::uint64_t seed = 42;
};

struct DatasetConfig {
  std::string path;  // empty: generate from `synthetic`
  SyntheticSpec synthetic;
  int y_max = 2;
  std::array<double, 3> fractions{0.8, 0.1, 0.1};
  std::uint64_t split_seed = 42;
  std::size_t max_candidates = 0;  // 0: keep all queries
};

struct ExperimentConfig {
  DatasetConfig dataset;
  Setting setting = Setting::PostProcessing;
  PolicyConfig policy;
  std::int64_t steps = 0;  // 0: setting default (2e4 post-processing, 1e5 online)
  int trials = 5;
  std::uint64_t base_seed = 42;
  int k_s = 5;
  std::vector<int> cutoffs{1, 3, 5};
  double gamma_eval = 0.995;
  std::int64_t checkpoint_every = 1000;
  double epsilon = 0.1;
  double e0 = 0.1;
  double c0 = 0.05;

  /// Fills setting-dependent defaults and mirrors `setting` into the policy.
  void resolve();
  void validate() const;
};

/// Config file round-trip. The JSON keys mirror the field names exactly;
/// unknown keys are errors.
ExperimentConfig parse_experiment_config(const std::string& json_text);
std::string experiment_config_json(const ExperimentConfig& config);

struct SnapshotRow {
  int trial = 0;
  MetricSnapshot metrics;
};

struct TrialOutput {
  std::vector<MetricSnapshot> snapshots;
  Ledger ledger;  // final state, one per trial
};

struct ExperimentResult {
  ExperimentConfig config;
  std::string dataset_hash;
  bool failed = false;
  std::string error;
  std::vector<SnapshotRow> rows;  // strictly increasing in (trial, step)
  std::vector<Ledger> ledgers;    // populated only when requested
};

struct SweepResult {
  std::vector<ExperimentResult> experiments;
};

Dataset load_dataset(const DatasetConfig& config);

/// One online loop: sample query, rank, simulate clicks, update ledger,
/// checkpoint metrics. Deterministic given (config, trial_index).
TrialOutput run_trial(const ExperimentConfig& config, const Dataset& dataset,
                      int trial_index);

/// All trials of one configuration. Trials execute in parallel.
ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                                bool keep_ledgers = false);

/// Cartesian (alpha, beta) grid, trials included, executed as one parallel
/// job pool. A failing trial marks its grid point failed; the others proceed.
SweepResult run_sweep(const ExperimentConfig& base, const std::vector<double>& alphas,
                      const std::vector<double>& betas);

/// Writes curve.csv (final-checkpoint mean/std per grid point), series.csv
/// (checkpoint time series) and curve.svg into out_dir. Throws on empty
/// results before touching any file; identical results give identical bytes.
void write_report(const SweepResult& results, const std::string& out_dir);

void write_results_json(const SweepResult& results, const std::string& path);
SweepResult read_results_json(const std::string& path);

}  // namespace fairsim
