#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <vector>

#include "fairsim/dataset.hpp"
#include "fairsim/user_model.hpp"

namespace fairsim {

/// Raw per-item running totals. Priors live in EstimatorConfig and are applied
/// at read time, so exposure here is exactly the accumulated examination mass.
struct ItemStats {
  double exposure = 0.0;
  double cum_clicks = 0.0;
};

/// Additive priors resolving the zero-exposure singularity of the estimator:
/// a fresh item reads as estimate c0/e0 with variance bound 1/e0.
struct EstimatorConfig {
  double e0 = 0.1;
  double c0 = 0.05;

  void validate() const;
};

/// (cum_clicks + c0) / (exposure + e0) : unbiased click-through-per-exposure
/// estimate of the relevance probability, pulled toward c0/e0 when unobserved.
double relevance_estimate(const ItemStats& stats, const EstimatorConfig& config);

/// Upper bound 1/(exposure + e0) on the estimate's variance.
double variance_bound(const ItemStats& stats, const EstimatorConfig& config);

/// Marginal certainty 1/(exposure + e0)^2 : how much one unit of additional
/// exposure shrinks the variance bound (its negative derivative).
double marginal_certainty(const ItemStats& stats, const EstimatorConfig& config);

/// Per-(query, item) exposure and click totals for one simulation trial.
class Ledger {
 public:
  Ledger() = default;
  Ledger(const Dataset& dataset, EstimatorConfig config);

  const EstimatorConfig& config() const { return config_; }

  const std::vector<ItemStats>& stats(std::int64_t query_id) const;

  std::vector<double> exposures(std::int64_t query_id) const;
  std::vector<double> estimates(std::int64_t query_id) const;
  std::vector<double> marginal_certainties(std::int64_t query_id) const;

  double total_exposure() const;

  /// CSV snapshot `query_id,item_id,exposure,cum_clicks`, rows sorted by key.
  void write_csv(std::ostream& out) const;

  friend void record_impression(Ledger& ledger, std::int64_t query_id,
                                const Impression& impression);

 private:
  std::vector<ItemStats>& stats_mutable(std::int64_t query_id);

  std::map<std::int64_t, std::vector<ItemStats>> stats_;
  EstimatorConfig config_;
};

/// Adds one impression: exposure += examination probability at the presented
/// rank, cum_clicks += 1 on click. Ranks beyond k_s were not presented and
/// receive nothing. Throws std::logic_error on unknown (query, item) keys.
void record_impression(Ledger& ledger, std::int64_t query_id, const Impression& impression);

}  // namespace fairsim
