#pragma once

#include <span>
#include <vector>

// Serial reference kernels. These keep the literal quadratic forms that the
// production O(n) kernels factor away, so tests can assert the two routes
// agree and the bench target can time them side by side. Nothing here is
// called from the simulation path.

namespace fairsim::reference {

/// Literal double-sum unfairness, O(n^2).
double unfairness_pairwise(std::span<const double> exposure,
                           std::span<const double> relevance);

/// Fairness gradient from the pairwise sum, O(n^2):
///   B(d) = 4/(n(n-1)) * sum_l (R(d)E(l)R(l) - E(d)R(l)^2).
std::vector<double> fairness_gradient_pairwise(std::span<const double> relevance,
                                               std::span<const double> exposure);

/// Brute-force maximum of sum_i scores[perm[i]] * weights[i] over all
/// permutations. Feasible for n <= ~9; the oracle behind the sort-by-score
/// optimality check.
double best_permutation_value(std::span<const double> scores,
                              std::span<const double> weights);

}  // namespace fairsim::reference
