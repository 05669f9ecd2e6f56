#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fairsim {

/// Metrics recorded at one checkpoint: cNDCG per configured cutoff plus the
/// mean pairwise unfairness over the evaluated queries.
struct MetricSnapshot {
  std::int64_t step = 0;
  std::vector<double> cndcg_at;
  double unfairness = 0.0;
};

/// DCG@k_c with the examination probabilities as rank weights:
/// sum_{i<=k_c} R(order[i]) / log2(i + 1), zero weight past k_s.
double dcg_at(std::span<const int> order, std::span<const double> relevance, int k_c,
              int k_s);

/// DCG of the ideal ordering (relevance descending, ties by item id).
double ideal_dcg_at(std::span<const double> relevance, int k_c, int k_s);

/// DCG normalized by the ideal list's DCG; 1.0 when the ideal DCG is zero
/// (an all-irrelevant query is trivially solved).
double ndcg_at(std::span<const int> order, std::span<const double> relevance, int k_c,
               int k_s);
double ndcg_at(std::span<const int> order, std::span<const double> relevance, int k_c,
               int k_s, double ideal);

/// Recursive step of the discounted cumulative NDCG: gamma * previous + now.
double update_cndcg(double previous, double ndcg_now, double gamma);

/// Mean squared pairwise exposure disparity
///   1/(n(n-1)) * sum_{x,y} (E(x)R(y) - E(y)R(x))^2,
/// zero iff exposure is proportional to relevance; 0 by convention for n <= 1.
/// Uses the O(n) expansion 2[(sum E^2)(sum R^2) - (sum ER)^2]; equality with
/// the literal double sum is enforced by a property test against
/// reference::unfairness_pairwise.
double unfairness(std::span<const double> exposure, std::span<const double> relevance);

struct FairShare {
  std::vector<double> exposure;      // per-item exposure proportional to relevance
  double predicted_effectiveness{};  // sum R^2 / sum R * E_total
};

/// Exposure split that zeroes the unfairness measure for a given total, and
/// the un-normalized effectiveness sum R(d)E(d) it pins. Throws
/// std::invalid_argument when all relevances are zero.
FairShare fair_share_prediction(double exposure_total, std::span<const double> relevance);

}  // namespace fairsim
