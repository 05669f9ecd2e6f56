#include "fairsim/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "fairsim/user_model.hpp"

namespace fairsim {

double dcg_at(std::span<const int> order, std::span<const double> relevance, int k_c,
              int k_s) {
  if (k_c < 1) throw std::invalid_argument("dcg_at: k_c must be >= 1");
  if (k_c > k_s) throw std::invalid_argument("dcg_at: k_c must be <= k_s");
  const std::size_t depth = std::min(order.size(), static_cast<std::size_t>(k_c));
  double dcg = 0.0;
  for (std::size_t i = 0; i < depth; ++i) {
    dcg += relevance[static_cast<std::size_t>(order[i])] *
           examination_probability(static_cast<int>(i) + 1, k_s);
  }
  return dcg;
}

double ideal_dcg_at(std::span<const double> relevance, int k_c, int k_s) {
  std::vector<int> ideal(relevance.size());
  std::iota(ideal.begin(), ideal.end(), 0);
  std::sort(ideal.begin(), ideal.end(), [&relevance](int a, int b) {
    const double ra = relevance[static_cast<std::size_t>(a)];
    const double rb = relevance[static_cast<std::size_t>(b)];
    if (ra != rb) return ra > rb;
    return a < b;
  });
  return dcg_at(ideal, relevance, k_c, k_s);
}

double ndcg_at(std::span<const int> order, std::span<const double> relevance, int k_c,
               int k_s, double ideal) {
  if (ideal == 0.0) return 1.0;
  return dcg_at(order, relevance, k_c, k_s) / ideal;
}

double ndcg_at(std::span<const int> order, std::span<const double> relevance, int k_c,
               int k_s) {
  return ndcg_at(order, relevance, k_c, k_s, ideal_dcg_at(relevance, k_c, k_s));
}

double update_cndcg(double previous, double ndcg_now, double gamma) {
  if (gamma < 0.0 || gamma > 1.0) throw std::invalid_argument("update_cndcg: gamma in [0,1]");
  return gamma * previous + ndcg_now;
}

double unfairness(std::span<const double> exposure, std::span<const double> relevance) {
  const std::size_t n = exposure.size();
  if (relevance.size() != n) throw std::invalid_argument("unfairness: length mismatch");
  if (n <= 1) return 0.0;
  double sum_e2 = 0.0;
  double sum_r2 = 0.0;
  double sum_er = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_e2 += exposure[i] * exposure[i];
    sum_r2 += relevance[i] * relevance[i];
    sum_er += exposure[i] * relevance[i];
  }
  const double pair_sum = 2.0 * (sum_e2 * sum_r2 - sum_er * sum_er);
  // The expansion can go a hair negative at exact proportionality; clamp.
  const double clamped = std::max(pair_sum, 0.0);
  return clamped / (static_cast<double>(n) * static_cast<double>(n - 1));
}

FairShare fair_share_prediction(double exposure_total, std::span<const double> relevance) {
  double sum_r = 0.0;
  double sum_r2 = 0.0;
  for (double r : relevance) {
    sum_r += r;
    sum_r2 += r * r;
  }
  if (!(sum_r > 0.0)) {
    throw std::invalid_argument("fair_share_prediction: all-zero relevance");
  }
  FairShare out;
  out.exposure.resize(relevance.size());
  for (std::size_t i = 0; i < relevance.size(); ++i) {
    out.exposure[i] = relevance[i] / sum_r * exposure_total;
  }
  out.predicted_effectiveness = sum_r2 / sum_r * exposure_total;
  return out;
}

}  // namespace fairsim
