#include "fairsim/reference.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fairsim::reference {

double unfairness_pairwise(std::span<const double> exposure,
                           std::span<const double> relevance) {
  const std::size_t n = exposure.size();
  if (relevance.size() != n) {
    throw std::invalid_argument("unfairness_pairwise: length mismatch");
  }
  if (n <= 1) return 0.0;
  double sum = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      const double disparity = exposure[x] * relevance[y] - exposure[y] * relevance[x];
      sum += disparity * disparity;
    }
  }
  return sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

std::vector<double> fairness_gradient_pairwise(std::span<const double> relevance,
                                               std::span<const double> exposure) {
  const std::size_t n = relevance.size();
  if (exposure.size() != n) {
    throw std::invalid_argument("fairness_gradient_pairwise: length mismatch");
  }
  if (n <= 1) return std::vector<double>(n, 0.0);
  const double scale = 4.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  std::vector<double> grad(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    double sum = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
      sum += relevance[d] * exposure[l] * relevance[l] - exposure[d] * relevance[l] * relevance[l];
    }
    grad[d] = scale * sum;
  }
  return grad;
}

double best_permutation_value(std::span<const double> scores,
                              std::span<const double> weights) {
  if (scores.size() != weights.size()) {
    throw std::invalid_argument("best_permutation_value: length mismatch");
  }
  std::vector<int> perm(scores.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = -1e300;
  do {
    double value = 0.0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      value += scores[static_cast<std::size_t>(perm[i])] * weights[i];
    }
    best = std::max(best, value);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace fairsim::reference
