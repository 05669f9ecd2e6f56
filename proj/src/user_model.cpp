#include "fairsim/user_model.hpp"

#include <cmath>
#include <stdexcept>

namespace fairsim {

void ClickModelConfig::validate() const {
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("ClickModelConfig: epsilon must be in [0,1]");
  }
  if (y_max < 1) throw std::invalid_argument("ClickModelConfig: y_max must be >= 1");
  if (k_s < 1) throw std::invalid_argument("ClickModelConfig: k_s must be >= 1");
}

double relevance_probability(int label, const ClickModelConfig& config) {
  if (label < 0 || label > config.y_max) {
    throw std::invalid_argument("relevance_probability: label out of [0, y_max]");
  }
  const double gain = std::exp2(static_cast<double>(label)) - 1.0;
  const double gain_max = std::exp2(static_cast<double>(config.y_max)) - 1.0;
  return config.epsilon + (1.0 - config.epsilon) * gain / gain_max;
}

double examination_probability(int rank, int k_s) {
  if (rank < 1) throw std::invalid_argument("examination_probability: rank must be >= 1");
  if (rank > k_s) return 0.0;
  return 1.0 / std::log2(static_cast<double>(rank) + 1.0);
}

std::vector<double> true_relevance(const Query& query, const ClickModelConfig& config) {
  std::vector<double> rel(query.items.size());
  for (std::size_t i = 0; i < query.items.size(); ++i) {
    rel[i] = relevance_probability(query.items[i].label, config);
  }
  return rel;
}

Impression simulate_clicks(const RankedList& ranked, std::span<const int> labels,
                           const ClickModelConfig& config, SeededRng& rng) {
  const std::size_t presented =
      std::min(ranked.order.size(), static_cast<std::size_t>(config.k_s));
  Impression imp;
  imp.ranked = ranked;
  imp.clicks.resize(presented);
  imp.examination_probs.resize(presented);
  for (std::size_t i = 0; i < presented; ++i) {
    const int item = ranked.order[i];
    const double p_rel =
        relevance_probability(labels[static_cast<std::size_t>(item)], config);
    const double p_exam = examination_probability(static_cast<int>(i) + 1, config.k_s);
    imp.examination_probs[i] = p_exam;
    imp.clicks[i] = rng.bernoulli(p_rel * p_exam) ? 1 : 0;
  }
  return imp;
}

}  // namespace fairsim
