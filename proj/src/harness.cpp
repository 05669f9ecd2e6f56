#include "fairsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fairsim/io_format.hpp"
#include "fairsim/rng.hpp"
#include "fairsim/user_model.hpp"

namespace fairsim {

namespace {

using nlohmann::json;

constexpr std::int64_t kDefaultStepsPostProcessing = 20000;
constexpr std::int64_t kDefaultStepsOnline = 100000;

// ---------------------------------------------------------------------------
// Simulation context: everything derived from dataset + evaluation settings,
// shared read-only by all trials and grid points of one invocation.

struct QueryView {
  const Query* query = nullptr;
  std::vector<int> labels;
  std::vector<double> true_rel;
  std::vector<double> ideal_dcg;  // aligned with cutoffs
  bool is_test = false;
};

struct SimContext {
  const Dataset* dataset = nullptr;
  ClickModelConfig click;
  std::vector<int> cutoffs;
  double gamma = 0.995;
  std::vector<QueryView> views;
  std::vector<std::size_t> test_indices;
};

SimContext build_context(const ExperimentConfig& config, const Dataset& dataset) {
  SimContext ctx;
  ctx.dataset = &dataset;
  ctx.click = ClickModelConfig{config.epsilon, dataset.y_max, config.k_s};
  ctx.click.validate();
  ctx.cutoffs = config.cutoffs;
  ctx.gamma = config.gamma_eval;

  const auto add_partition = [&ctx](const std::vector<Query>& part, bool is_test) {
    for (const Query& q : part) {
      QueryView view;
      view.query = &q;
      view.is_test = is_test;
      view.labels.resize(q.items.size());
      for (std::size_t i = 0; i < q.items.size(); ++i) view.labels[i] = q.items[i].label;
      view.true_rel = true_relevance(q, ctx.click);
      view.ideal_dcg.reserve(ctx.cutoffs.size());
      for (int k_c : ctx.cutoffs) {
        view.ideal_dcg.push_back(ideal_dcg_at(view.true_rel, k_c, ctx.click.k_s));
      }
      if (is_test) ctx.test_indices.push_back(ctx.views.size());
      ctx.views.push_back(std::move(view));
    }
  };
  add_partition(dataset.train, false);
  add_partition(dataset.validation, false);
  add_partition(dataset.test, true);

  if (ctx.views.empty()) throw std::invalid_argument("run: dataset has no queries");
  if (ctx.test_indices.empty()) {
    throw std::invalid_argument("run: test partition is empty, nothing to evaluate");
  }
  return ctx;
}

// Mean pairwise unfairness over the test partition. Per-query values are
// independent slots, so the parallel loop stays deterministic; the reduction
// runs serially in index order.
double mean_test_unfairness(const SimContext& ctx, const Ledger& ledger) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(ctx.test_indices.size());
  std::vector<double> values(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const QueryView& view = ctx.views[ctx.test_indices[static_cast<std::size_t>(i)]];
    values[static_cast<std::size_t>(i)] =
        unfairness(ledger.exposures(view.query->query_id), view.true_rel);
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(n);
}

[[noreturn]] void throw_nan_diagnostic(const ExperimentConfig& config, const QueryView& view,
                                       const Ledger& ledger, std::int64_t step) {
  std::ostringstream msg;
  msg << "run_trial: NaN score, policy=" << to_string(config.policy.kind)
      << " alpha=" << config.policy.alpha << " beta=" << config.policy.beta << " step=" << step
      << " query_id=" << view.query->query_id << "\nledger rows (item_id,exposure,cum_clicks):\n";
  const auto& stats = ledger.stats(view.query->query_id);
  for (std::size_t i = 0; i < stats.size(); ++i) {
    msg << i << ',' << stats[i].exposure << ',' << stats[i].cum_clicks << '\n';
  }
  throw std::runtime_error(msg.str());
}

TrialOutput run_trial_impl(const ExperimentConfig& config, const SimContext& ctx,
                           int trial_index) {
  SeededRng rng(config.base_seed, static_cast<std::uint64_t>(trial_index));
  std::optional<SeededRng> tie_rng;
  if (config.policy.random_ties) {
    tie_rng.emplace(config.base_seed, static_cast<std::uint64_t>(trial_index), /*tag=*/2);
  }

  Ledger ledger(*ctx.dataset, EstimatorConfig{config.e0, config.c0});
  const std::size_t n_queries = ctx.views.size();
  const std::size_t n_cutoffs = ctx.cutoffs.size();
  std::vector<double> cndcg(n_queries * n_cutoffs, 0.0);

  const bool post = config.setting == Setting::PostProcessing;
  TrialOutput out;

  for (std::int64_t t = 0; t < config.steps; ++t) {
    const std::size_t qi = rng.next_below(n_queries);
    const QueryView& view = ctx.views[qi];
    const std::int64_t qid = view.query->query_id;

    const std::vector<double> exposure = ledger.exposures(qid);
    const std::vector<double> certainty = ledger.marginal_certainties(qid);
    const std::vector<double> relevance = post ? view.true_rel : ledger.estimates(qid);

    const std::vector<double> scores =
        policy_scores(config.policy, relevance, exposure, certainty, t);
    for (double s : scores) {
      if (std::isnan(s)) throw_nan_diagnostic(config, view, ledger, t);
    }

    const RankedList ranked =
        tie_rng ? rank(qid, scores, *tie_rng) : rank(qid, scores);
    const Impression impression = simulate_clicks(ranked, view.labels, ctx.click, rng);
    record_impression(ledger, qid, impression);

    for (std::size_t c = 0; c < n_cutoffs; ++c) {
      const double now = ndcg_at(ranked.order, view.true_rel, ctx.cutoffs[c], ctx.click.k_s,
                                 view.ideal_dcg[c]);
      double& acc = cndcg[qi * n_cutoffs + c];
      acc = update_cndcg(acc, now, ctx.gamma);
    }

    // Checkpoints only read state; they never consume rng draws, so changing
    // the checkpoint frequency cannot perturb the trajectory.
    if ((t + 1) % config.checkpoint_every == 0 || t + 1 == config.steps) {
      MetricSnapshot snap;
      snap.step = t + 1;
      snap.cndcg_at.resize(n_cutoffs, 0.0);
      for (std::size_t c = 0; c < n_cutoffs; ++c) {
        double sum = 0.0;
        for (std::size_t ti : ctx.test_indices) sum += cndcg[ti * n_cutoffs + c];
        snap.cndcg_at[c] = sum / static_cast<double>(ctx.test_indices.size());
      }
      snap.unfairness = mean_test_unfairness(ctx, ledger);
      out.snapshots.push_back(std::move(snap));
    }
  }

  out.ledger = std::move(ledger);
  return out;
}

// Shared worker pool: every (experiment, trial) pair is one independent job.
// Outputs land in per-job slots, so the dynamic schedule cannot affect the
// aggregated result.
void run_jobs(std::vector<ExperimentResult>& experiments, const SimContext& ctx,
              bool keep_ledgers) {
  struct Job {
    std::size_t experiment;
    int trial;
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < experiments.size(); ++e) {
    for (int trial = 0; trial < experiments[e].config.trials; ++trial) {
      jobs.push_back(Job{e, trial});
    }
  }

  std::vector<std::vector<MetricSnapshot>> rows(jobs.size());
  std::vector<Ledger> ledgers(keep_ledgers ? jobs.size() : 0);
  std::vector<std::string> errors(jobs.size());
  std::vector<char> ok(jobs.size(), 0);

  const std::ptrdiff_t n_jobs = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t j = 0; j < n_jobs; ++j) {
    const Job& job = jobs[static_cast<std::size_t>(j)];
    try {
      TrialOutput out =
          run_trial_impl(experiments[job.experiment].config, ctx, job.trial);
      rows[static_cast<std::size_t>(j)] = std::move(out.snapshots);
      if (keep_ledgers) ledgers[static_cast<std::size_t>(j)] = std::move(out.ledger);
      ok[static_cast<std::size_t>(j)] = 1;
    } catch (const std::exception& ex) {
      errors[static_cast<std::size_t>(j)] = ex.what();
    }
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    ExperimentResult& result = experiments[jobs[j].experiment];
    if (!ok[j]) {
      result.failed = true;
      if (result.error.empty()) result.error = errors[j];
      continue;
    }
    for (MetricSnapshot& snap : rows[j]) {
      result.rows.push_back(SnapshotRow{jobs[j].trial, std::move(snap)});
    }
    if (keep_ledgers) result.ledgers.push_back(std::move(ledgers[j]));
  }
  for (ExperimentResult& result : experiments) {
    if (result.failed) {
      result.rows.clear();
      result.ledgers.clear();
    }
  }
}

// ---------------------------------------------------------------------------
// JSON config and result serialization.

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&key](const char* a) { return key == a; }) == allowed.end()) {
      throw std::invalid_argument("config: unknown key '" + key + "' in " + where);
    }
  }
}

DatasetConfig dataset_config_from_json(const json& j) {
  check_keys(j, {"path", "synthetic", "y_max", "fractions", "split_seed", "max_candidates"},
             "dataset");
  DatasetConfig out;
  if (j.contains("path")) out.path = j.at("path").get<std::string>();
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    check_keys(s, {"n_queries", "n_items", "seed"}, "dataset.synthetic");
    if (s.contains("n_queries")) out.synthetic.n_queries = s.at("n_queries").get<int>();
    if (s.contains("n_items")) out.synthetic.n_items = s.at("n_items").get<int>();
    if (s.contains("seed")) out.synthetic.seed = s.at("seed").get<std::uint64_t>();
  }
  if (j.contains("y_max")) out.y_max = j.at("y_max").get<int>();
  if (j.contains("fractions")) {
    const auto f = j.at("fractions").get<std::vector<double>>();
    if (f.size() != 3) throw std::invalid_argument("config: fractions needs 3 entries");
    out.fractions = {f[0], f[1], f[2]};
  }
  if (j.contains("split_seed")) out.split_seed = j.at("split_seed").get<std::uint64_t>();
  if (j.contains("max_candidates")) {
    out.max_candidates = j.at("max_candidates").get<std::size_t>();
  }
  return out;
}

json dataset_config_to_json(const DatasetConfig& config) {
  json j;
  if (!config.path.empty()) {
    j["path"] = config.path;
  } else {
    j["synthetic"] = {{"n_queries", config.synthetic.n_queries},
                      {"n_items", config.synthetic.n_items},
                      {"seed", config.synthetic.seed}};
  }
  j["y_max"] = config.y_max;
  j["fractions"] = config.fractions;
  j["split_seed"] = config.split_seed;
  j["max_candidates"] = config.max_candidates;
  return j;
}

PolicyConfig policy_config_from_json(const json& j) {
  check_keys(j, {"kind", "alpha", "beta", "random_ties"}, "policy");
  PolicyConfig out;
  if (j.contains("kind")) out.kind = policy_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("alpha")) out.alpha = j.at("alpha").get<double>();
  if (j.contains("beta")) out.beta = j.at("beta").get<double>();
  if (j.contains("random_ties")) out.random_ties = j.at("random_ties").get<bool>();
  return out;
}

json policy_config_to_json(const PolicyConfig& config) {
  return json{{"kind", to_string(config.kind)},
              {"alpha", config.alpha},
              {"beta", config.beta},
              {"random_ties", config.random_ties}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  check_keys(j,
             {"dataset", "setting", "policy", "steps", "trials", "base_seed", "k_s", "cutoffs",
              "gamma_eval", "checkpoint_every", "epsilon", "e0", "c0"},
             "experiment");
  ExperimentConfig out;
  if (j.contains("dataset")) out.dataset = dataset_config_from_json(j.at("dataset"));
  if (j.contains("setting")) out.setting = setting_from_string(j.at("setting").get<std::string>());
  if (j.contains("policy")) out.policy = policy_config_from_json(j.at("policy"));
  if (j.contains("steps")) out.steps = j.at("steps").get<std::int64_t>();
  if (j.contains("trials")) out.trials = j.at("trials").get<int>();
  if (j.contains("base_seed")) out.base_seed = j.at("base_seed").get<std::uint64_t>();
  if (j.contains("k_s")) out.k_s = j.at("k_s").get<int>();
  if (j.contains("cutoffs")) out.cutoffs = j.at("cutoffs").get<std::vector<int>>();
  if (j.contains("gamma_eval")) out.gamma_eval = j.at("gamma_eval").get<double>();
  if (j.contains("checkpoint_every")) {
    out.checkpoint_every = j.at("checkpoint_every").get<std::int64_t>();
  }
  if (j.contains("epsilon")) out.epsilon = j.at("epsilon").get<double>();
  if (j.contains("e0")) out.e0 = j.at("e0").get<double>();
  if (j.contains("c0")) out.c0 = j.at("c0").get<double>();
  out.resolve();
  out.validate();
  return out;
}

json experiment_config_to_json(const ExperimentConfig& config) {
  json j;
  j["dataset"] = dataset_config_to_json(config.dataset);
  j["setting"] = to_string(config.setting);
  j["policy"] = policy_config_to_json(config.policy);
  j["steps"] = config.steps;
  j["trials"] = config.trials;
  j["base_seed"] = config.base_seed;
  j["k_s"] = config.k_s;
  j["cutoffs"] = config.cutoffs;
  j["gamma_eval"] = config.gamma_eval;
  j["checkpoint_every"] = config.checkpoint_every;
  j["epsilon"] = config.epsilon;
  j["e0"] = config.e0;
  j["c0"] = config.c0;
  return j;
}

struct CurvePoint {
  double unfairness_mean = 0.0;
  double unfairness_std = 0.0;
  std::vector<double> cndcg_mean;
  std::vector<double> cndcg_std;
};

double sample_std(const std::vector<double>& values, double mean) {
  if (values.size() < 2) return 0.0;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

// Final-checkpoint mean/std over trials for one grid point.
CurvePoint curve_point(const ExperimentResult& result) {
  std::map<int, const MetricSnapshot*> final_by_trial;
  for (const SnapshotRow& row : result.rows) {
    final_by_trial[row.trial] = &row.metrics;  // rows are (trial, step)-sorted
  }
  std::vector<double> unf;
  std::vector<std::vector<double>> cndcg;
  for (const auto& [trial, snap] : final_by_trial) {
    (void)trial;
    unf.push_back(snap->unfairness);
    if (cndcg.empty()) cndcg.resize(snap->cndcg_at.size());
    for (std::size_t c = 0; c < snap->cndcg_at.size(); ++c) {
      cndcg[c].push_back(snap->cndcg_at[c]);
    }
  }
  CurvePoint point;
  for (double v : unf) point.unfairness_mean += v;
  point.unfairness_mean /= static_cast<double>(unf.size());
  point.unfairness_std = sample_std(unf, point.unfairness_mean);
  point.cndcg_mean.resize(cndcg.size(), 0.0);
  point.cndcg_std.resize(cndcg.size(), 0.0);
  for (std::size_t c = 0; c < cndcg.size(); ++c) {
    for (double v : cndcg[c]) point.cndcg_mean[c] += v;
    point.cndcg_mean[c] /= static_cast<double>(cndcg[c].size());
    point.cndcg_std[c] = sample_std(cndcg[c], point.cndcg_mean[c]);
  }
  return point;
}

std::string render_curve_csv(const SweepResult& results) {
  const std::vector<int>& cutoffs = results.experiments.front().config.cutoffs;
  std::ostringstream out;
  out << "policy,alpha,beta,setting,unfairness_mean,unfairness_std";
  for (int k : cutoffs) out << ",cndcg@" << k << "_mean,cndcg@" << k << "_std";
  out << '\n';
  for (const ExperimentResult& result : results.experiments) {
    if (result.failed || result.rows.empty()) continue;
    const CurvePoint point = curve_point(result);
    out << to_string(result.config.policy.kind) << ',' << format_g9(result.config.policy.alpha)
        << ',' << format_g9(result.config.policy.beta) << ','
        << to_string(result.config.setting) << ',' << format_g9(point.unfairness_mean) << ','
        << format_g9(point.unfairness_std);
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      out << ',' << format_g9(point.cndcg_mean[c]) << ',' << format_g9(point.cndcg_std[c]);
    }
    out << '\n';
  }
  return out.str();
}

std::string render_series_csv(const SweepResult& results) {
  const std::vector<int>& cutoffs = results.experiments.front().config.cutoffs;
  std::ostringstream out;
  out << "policy,alpha,beta,setting,trial,step,unfairness";
  for (int k : cutoffs) out << ",cndcg@" << k;
  out << '\n';
  for (const ExperimentResult& result : results.experiments) {
    if (result.failed) continue;
    for (const SnapshotRow& row : result.rows) {
      out << to_string(result.config.policy.kind) << ','
          << format_g9(result.config.policy.alpha) << ',' << format_g9(result.config.policy.beta)
          << ',' << to_string(result.config.setting) << ',' << row.trial << ','
          << row.metrics.step << ',' << format_g9(row.metrics.unfairness);
      for (double v : row.metrics.cndcg_at) out << ',' << format_g9(v);
      out << '\n';
    }
  }
  return out.str();
}

// Minimal self-contained SVG: cNDCG at the deepest cutoff vs unfairness, one
// polyline per (policy, beta, setting) series, points ordered by alpha.
std::string render_curve_svg(const SweepResult& results) {
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  const std::vector<int>& cutoffs = results.experiments.front().config.cutoffs;
  const std::size_t metric_index = cutoffs.size() - 1;

  struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (unfairness, cndcg)
  };
  std::vector<Series> series;
  const auto series_for = [&series](const std::string& label) -> Series& {
    for (Series& s : series) {
      if (s.label == label) return s;
    }
    series.push_back(Series{label, {}});
    return series.back();
  };
  for (const ExperimentResult& result : results.experiments) {
    if (result.failed || result.rows.empty()) continue;
    const CurvePoint point = curve_point(result);
    std::string label = std::string(to_string(result.config.policy.kind)) +
                        " beta=" + format_g6(result.config.policy.beta) + " " +
                        to_string(result.config.setting);
    series_for(label).points.emplace_back(point.unfairness_mean,
                                          point.cndcg_mean[metric_index]);
  }

  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const Series& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_max <= x_min) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (y_max <= y_min) {
    y_min -= 1.0;
    y_max += 1.0;
  }
  const double x_pad = 0.05 * (x_max - x_min);
  const double y_pad = 0.05 * (y_max - y_min);
  x_min -= x_pad;
  x_max += x_pad;
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 720, height = 520;
  const double left = 80, right = 20, top = 20, bottom = 60;
  const auto sx = [&](double x) {
    return left + (x - x_min) / (x_max - x_min) * (width - left - right);
  };
  const auto sy = [&](double y) {
    return height - bottom - (y - y_min) / (y_max - y_min) * (height - top - bottom);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << height - bottom << "\" x2=\"" << width - right
      << "\" y2=\"" << height - bottom << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
      << height - bottom << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double fx = x_min + (x_max - x_min) * tick / 4.0;
    const double fy = y_min + (y_max - y_min) * tick / 4.0;
    svg << "<text x=\"" << format_g6(sx(fx)) << "\" y=\"" << height - bottom + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << format_g6(fx) << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << format_g6(sy(fy) + 4)
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_g6(fy) << "</text>\n";
  }
  svg << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 16
      << "\" font-size=\"13\" text-anchor=\"middle\">unfairness (final, mean over trials)"
      << "</text>\n";
  svg << "<text x=\"18\" y=\"" << (top + height - bottom) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (top + height - bottom) / 2 << ")\">cNDCG@" << cutoffs[metric_index]
      << " (final, mean over trials)</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kColors[si % (sizeof(kColors) / sizeof(kColors[0]))];
    const Series& s = series[si];
    if (s.points.size() > 1) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : s.points) svg << format_g6(sx(x)) << ',' << format_g6(sy(y)) << ' ';
      svg << "\"/>\n";
    }
    for (const auto& [x, y] : s.points) {
      svg << "<circle cx=\"" << format_g6(sx(x)) << "\" cy=\"" << format_g6(sy(y))
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    svg << "<rect x=\"" << width - right - 210 << "\" y=\"" << top + 8 + 16 * si
        << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << width - right - 196 << "\" y=\"" << top + 17 + 16 * si
        << "\" font-size=\"11\">" << s.label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

// ---------------------------------------------------------------------------

void ExperimentConfig::resolve() {
  if (steps == 0) {
    steps = setting == Setting::PostProcessing ? kDefaultStepsPostProcessing
                                               : kDefaultStepsOnline;
  }
  policy.setting = setting;
}

void ExperimentConfig::validate() const {
  if (steps < 1) throw std::invalid_argument("config: steps must be >= 1");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (k_s < 1) throw std::invalid_argument("config: k_s must be >= 1");
  if (cutoffs.empty()) throw std::invalid_argument("config: cutoffs must be non-empty");
  for (int k : cutoffs) {
    if (k < 1 || k > k_s) throw std::invalid_argument("config: cutoffs must lie in [1, k_s]");
  }
  if (gamma_eval < 0.0 || gamma_eval > 1.0) {
    throw std::invalid_argument("config: gamma_eval must be in [0,1]");
  }
  if (checkpoint_every < 1) {
    throw std::invalid_argument("config: checkpoint_every must be >= 1");
  }
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("config: epsilon must be in [0,1]");
  }
  if (dataset.y_max < 1) throw std::invalid_argument("config: y_max must be >= 1");
  EstimatorConfig{e0, c0}.validate();
  policy.validate();
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  return experiment_config_from_json(json::parse(json_text));
}

std::string experiment_config_json(const ExperimentConfig& config) {
  return experiment_config_to_json(config).dump(2);
}

Dataset load_dataset(const DatasetConfig& config) {
  std::vector<Query> queries;
  if (!config.path.empty()) {
    queries = load_letor_file(config.path, config.y_max);
  } else {
    queries = generate_synthetic(config.synthetic.n_queries, config.synthetic.n_items,
                                 config.y_max, config.synthetic.seed);
  }
  queries = filter_max_candidates(std::move(queries), config.max_candidates);
  return split_partitions(std::move(queries), config.y_max, config.fractions,
                          config.split_seed);
}

TrialOutput run_trial(const ExperimentConfig& config, const Dataset& dataset,
                      int trial_index) {
  ExperimentConfig resolved = config;
  resolved.resolve();
  resolved.validate();
  const SimContext ctx = build_context(resolved, dataset);
  return run_trial_impl(resolved, ctx, trial_index);
}

ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& dataset,
                                bool keep_ledgers) {
  ExperimentConfig resolved = config;
  resolved.resolve();
  resolved.validate();
  const SimContext ctx = build_context(resolved, dataset);

  std::vector<ExperimentResult> experiments(1);
  experiments[0].config = resolved;
  experiments[0].dataset_hash = dataset_content_hash(dataset);
  run_jobs(experiments, ctx, keep_ledgers);
  return std::move(experiments[0]);
}

SweepResult run_sweep(const ExperimentConfig& base, const std::vector<double>& alphas,
                      const std::vector<double>& betas) {
  if (alphas.empty() || betas.empty()) {
    throw std::invalid_argument("run_sweep: alpha/beta grids must be non-empty");
  }
  ExperimentConfig resolved = base;
  resolved.resolve();

  const Dataset dataset = load_dataset(resolved.dataset);
  const std::string hash = dataset_content_hash(dataset);
  const SimContext ctx = build_context(resolved, dataset);

  SweepResult sweep;
  for (double alpha : alphas) {
    for (double beta : betas) {
      ExperimentResult result;
      result.config = resolved;
      result.config.policy.alpha = alpha;
      result.config.policy.beta = beta;
      result.config.validate();
      result.dataset_hash = hash;
      sweep.experiments.push_back(std::move(result));
    }
  }
  run_jobs(sweep.experiments, ctx, /*keep_ledgers=*/false);
  return sweep;
}

void write_report(const SweepResult& results, const std::string& out_dir) {
  std::size_t total_rows = 0;
  for (const ExperimentResult& r : results.experiments) total_rows += r.rows.size();
  if (results.experiments.empty() || total_rows == 0) {
    throw std::invalid_argument("write_report: no results to report");
  }

  // Render everything first so a formatting failure leaves no partial files.
  const std::string curve = render_curve_csv(results);
  const std::string series = render_series_csv(results);
  const std::string svg = render_curve_svg(results);

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / "curve.csv", curve);
  write_file(dir / "series.csv", series);
  write_file(dir / "curve.svg", svg);
}

void write_results_json(const SweepResult& results, const std::string& path) {
  json experiments = json::array();
  for (const ExperimentResult& result : results.experiments) {
    json rows = json::array();
    for (const SnapshotRow& row : result.rows) {
      rows.push_back(json{{"trial", row.trial},
                          {"step", row.metrics.step},
                          {"unfairness", row.metrics.unfairness},
                          {"cndcg", row.metrics.cndcg_at}});
    }
    experiments.push_back(json{{"config", experiment_config_to_json(result.config)},
                               {"dataset_hash", result.dataset_hash},
                               {"status", result.failed ? "failed" : "ok"},
                               {"error", result.error},
                               {"rows", std::move(rows)}});
  }
  const json root{{"experiments", std::move(experiments)}};

  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  write_file(p, root.dump(2) + "\n");
}

SweepResult read_results_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json root = json::parse(in);

  SweepResult results;
  for (const json& e : root.at("experiments")) {
    ExperimentResult result;
    result.config = experiment_config_from_json(e.at("config"));
    result.dataset_hash = e.at("dataset_hash").get<std::string>();
    result.failed = e.at("status").get<std::string>() == "failed";
    result.error = e.at("error").get<std::string>();
    for (const json& r : e.at("rows")) {
      SnapshotRow row;
      row.trial = r.at("trial").get<int>();
      row.metrics.step = r.at("step").get<std::int64_t>();
      row.metrics.unfairness = r.at("unfairness").get<double>();
      row.metrics.cndcg_at = r.at("cndcg").get<std::vector<double>>();
      result.rows.push_back(std::move(row));
    }
    results.experiments.push_back(std::move(result));
  }
  return results;
}

}  // namespace fairsim
