// Timing harness comparing the serial reference kernels against the factored
// and OpenMP-parallel production paths. Each row also cross-checks that the
// two routes agree, so a speedup never comes from computing something else.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "fairsim/harness.hpp"
#include "fairsim/metrics.hpp"
#include "fairsim/policies.hpp"
#include "fairsim/reference.hpp"
#include "fairsim/rng.hpp"

namespace {

using namespace fairsim;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
double time_best_of(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto start = Clock::now();
    body();
    best = std::min(best, seconds_since(start));
  }
  return best;
}

volatile double g_sink = 0.0;

void bench_unfairness() {
  std::printf("\nunfairness: literal O(n^2) double sum vs factored O(n)\n");
  std::printf("%8s %14s %14s %10s %12s\n", "n", "pairwise_ms", "factored_ms", "speedup",
              "rel_diff");
  for (int n : {64, 256, 1024, 4096}) {
    SeededRng rng(7, static_cast<std::uint64_t>(n));
    std::vector<double> exposure(n), relevance(n);
    for (int i = 0; i < n; ++i) {
      exposure[i] = rng.next_double() * 100.0;
      relevance[i] = 0.05 + 0.95 * rng.next_double();
    }
    double a = 0.0, b = 0.0;
    const double t_ref =
        time_best_of(5, [&] { g_sink = a = reference::unfairness_pairwise(exposure, relevance); });
    const double t_fast =
        time_best_of(5, [&] { g_sink = b = unfairness(exposure, relevance); });
    std::printf("%8d %14.3f %14.3f %9.1fx %12.2e\n", n, t_ref * 1e3, t_fast * 1e3,
                t_ref / t_fast, std::abs(a - b) / std::abs(a));
  }
}

void bench_gradient() {
  std::printf("\nfairness gradient: pairwise O(n^2) vs factored O(n)\n");
  std::printf("%8s %14s %14s %10s %12s\n", "n", "pairwise_ms", "factored_ms", "speedup",
              "max_abs_diff");
  for (int n : {64, 256, 1024, 4096}) {
    SeededRng rng(11, static_cast<std::uint64_t>(n));
    std::vector<double> exposure(n), relevance(n);
    for (int i = 0; i < n; ++i) {
      exposure[i] = rng.next_double() * 100.0;
      relevance[i] = 0.05 + 0.95 * rng.next_double();
    }
    std::vector<double> a, b;
    const double t_ref = time_best_of(
        5, [&] { a = reference::fairness_gradient_pairwise(relevance, exposure); });
    const double t_fast = time_best_of(5, [&] { b = fairness_gradient(relevance, exposure); });
    double diff = 0.0;
    for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
    g_sink = a[0] + b[0];
    std::printf("%8d %14.3f %14.3f %9.1fx %12.2e\n", n, t_ref * 1e3, t_fast * 1e3,
                t_ref / t_fast, diff);
  }
}

void bench_query_batch() {
  std::printf("\nper-query unfairness over a corpus: serial loop vs OpenMP loop\n");
  const int n_queries = 4000;
  const int n_items = 100;
  std::vector<std::vector<double>> exposure(n_queries), relevance(n_queries);
  for (int q = 0; q < n_queries; ++q) {
    SeededRng rng(13, static_cast<std::uint64_t>(q));
    exposure[q].resize(n_items);
    relevance[q].resize(n_items);
    for (int i = 0; i < n_items; ++i) {
      exposure[q][i] = rng.next_double() * 50.0;
      relevance[q][i] = 0.05 + 0.95 * rng.next_double();
    }
  }
  std::vector<double> values(n_queries);

  const double t_serial = time_best_of(5, [&] {
    for (int q = 0; q < n_queries; ++q) values[q] = unfairness(exposure[q], relevance[q]);
  });
  double serial_sum = 0.0;
  for (double v : values) serial_sum += v;

  const double t_parallel = time_best_of(5, [&] {
#pragma omp parallel for schedule(static)
    for (int q = 0; q < n_queries; ++q) values[q] = unfairness(exposure[q], relevance[q]);
  });
  double parallel_sum = 0.0;
  for (double v : values) parallel_sum += v;
  g_sink = parallel_sum;

  std::printf("%8d queries x %d items: serial %.3f ms, parallel %.3f ms, %.1fx, rel_diff %.2e\n",
              n_queries, n_items, t_serial * 1e3, t_parallel * 1e3, t_serial / t_parallel,
              std::abs(serial_sum - parallel_sum) / std::abs(serial_sum));
}

void bench_sweep() {
#ifdef _OPENMP
  const int hw_threads = omp_get_max_threads();
#else
  const int hw_threads = 1;
#endif
  std::printf("\nsweep job pool: 1 thread vs %d threads (12 jobs, T=10000)\n", hw_threads);

  ExperimentConfig base;
  base.setting = Setting::PostProcessing;
  base.policy.kind = PolicyKind::MCFair;
  base.steps = 10000;
  base.trials = 3;
  base.checkpoint_every = 500;
  base.resolve();
  const std::vector<double> alphas{0, 1, 10, 1000};
  const std::vector<double> betas{0};

  double unfairness_single = 0.0, unfairness_multi = 0.0;
#ifdef _OPENMP
  omp_set_num_threads(1);
#endif
  const double t_single = time_best_of(2, [&] {
    const SweepResult r = run_sweep(base, alphas, betas);
    unfairness_single = r.experiments.back().rows.back().metrics.unfairness;
  });
#ifdef _OPENMP
  omp_set_num_threads(hw_threads);
#endif
  const double t_multi = time_best_of(2, [&] {
    const SweepResult r = run_sweep(base, alphas, betas);
    unfairness_multi = r.experiments.back().rows.back().metrics.unfairness;
  });
  std::printf("serial %.1f ms, parallel %.1f ms, %.1fx, results identical: %s\n",
              t_single * 1e3, t_multi * 1e3, t_single / t_multi,
              unfairness_single == unfairness_multi ? "yes" : "NO");
}

}  // namespace

int main() {
  bench_unfairness();
  bench_gradient();
  bench_query_batch();
  bench_sweep();
  return 0;
}
