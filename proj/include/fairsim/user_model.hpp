#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairsim/dataset.hpp"
#include "fairsim/policies.hpp"
#include "fairsim/rng.hpp"

namespace fairsim {

struct ClickModelConfig {
  double epsilon = 0.1;  // noise floor of the relevance probability
  int y_max = 2;
  int k_s = 5;  // selection-bias cutoff: ranks below are never examined

  void validate() const;
};

/// One served list plus the user's simulated reaction. clicks and
/// examination_probs cover the presented prefix min(n, k_s).
struct Impression {
  RankedList ranked;
  std::vector<std::uint8_t> clicks;
  std::vector<double> examination_probs;
};

/// P(r=1 | label) = epsilon + (1 - epsilon) * (2^y - 1) / (2^y_max - 1).
double relevance_probability(int label, const ClickModelConfig& config);

/// Position bias 1/log2(rank + 1) for 1-based rank <= k_s, else 0.
double examination_probability(int rank, int k_s);

/// True relevance probabilities for every candidate of a query.
std::vector<double> true_relevance(const Query& query, const ClickModelConfig& config);

/// Samples clicks independently per presented rank with
/// P(click) = P(r=1 | label) * P(e=1 | rank). Consumes one draw per presented
/// rank, in rank order.
Impression simulate_clicks(const RankedList& ranked, std::span<const int> labels,
                           const ClickModelConfig& config, SeededRng& rng);

}  // namespace fairsim
