#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairsim/rng.hpp"

namespace fairsim {

enum class PolicyKind { TopK, ExploreK, FairK, FairCo, FairCoExplore, MCFair };
enum class Setting { PostProcessing, Online };

const char* to_string(PolicyKind kind);
const char* to_string(Setting setting);
PolicyKind policy_kind_from_string(const std::string& name);
Setting setting_from_string(const std::string& name);

/// One presented permutation of a query's candidates, best first.
struct RankedList {
  std::int64_t query_id = 0;
  std::vector<int> order;  // item ids, no duplicates
};

struct PolicyConfig {
  PolicyKind kind = PolicyKind::TopK;
  double alpha = 0.0;
  double beta = 0.0;
  Setting setting = Setting::PostProcessing;
  bool random_ties = false;

  /// In the post-processing setting MCFair pins beta to 0: relevance is known,
  /// so there is no estimation variance left to explore away.
  double effective_beta() const {
    if (kind == PolicyKind::MCFair && setting == Setting::PostProcessing) return 0.0;
    return beta;
  }

  void validate() const;
};

/// Gradient of fairness w.r.t. each item's exposure:
///   B(d) = 4/(n(n-1)) * (R(d) * sum_l E(l)R(l) - E(d) * sum_h R(h)^2)
/// computed in O(n) from the two shared sums. Returns {0} for n == 1.
std::vector<double> fairness_gradient(std::span<const double> relevance,
                                      std::span<const double> exposure);

/// Proportional-controller error term: the largest pairwise exposure
/// disparity against item d, clamped at 0 and normalized by (step + 1).
std::vector<double> fairco_error(std::span<const double> relevance,
                                 std::span<const double> exposure, std::int64_t step);

/// Linear combination backing each policy's ranking score.
double combined_score(PolicyKind kind, double relevance, double gradient,
                      double marginal_certainty, double fairco_err, double alpha,
                      double beta);

/// Per-item ranking scores. `relevance` is the active view (true probabilities
/// post-processing, ledger estimates online), `exposure` the raw accumulated
/// exposure, `marginal_certainty` the estimator's MC term. `step` is the
/// 0-based simulation step, used only by the FairCo variants.
std::vector<double> policy_scores(const PolicyConfig& config,
                                  std::span<const double> relevance,
                                  std::span<const double> exposure,
                                  std::span<const double> marginal_certainty,
                                  std::int64_t step);

/// Full permutation sorted by score descending, ties broken by ascending item
/// id. Throws std::logic_error on NaN scores (an upstream bug, not user input).
RankedList rank(std::int64_t query_id, std::span<const double> scores);

/// Same, but ties are broken by a seeded draw instead of item id.
RankedList rank(std::int64_t query_id, std::span<const double> scores, SeededRng& tie_rng);

}  // namespace fairsim
