#include "fairsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fairsim {

const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::TopK: return "topk";
    case PolicyKind::ExploreK: return "explorek";
    case PolicyKind::FairK: return "fairk";
    case PolicyKind::FairCo: return "fairco";
    case PolicyKind::FairCoExplore: return "fairco-explore";
    case PolicyKind::MCFair: return "mcfair";
  }
  throw std::invalid_argument("to_string: unknown policy kind");
}

const char* to_string(Setting setting) {
  return setting == Setting::PostProcessing ? "post_processing" : "online";
}

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "topk") return PolicyKind::TopK;
  if (name == "explorek") return PolicyKind::ExploreK;
  if (name == "fairk") return PolicyKind::FairK;
  if (name == "fairco") return PolicyKind::FairCo;
  if (name == "fairco-explore") return PolicyKind::FairCoExplore;
  if (name == "mcfair") return PolicyKind::MCFair;
  throw std::invalid_argument("unknown policy '" + name + "'");
}

Setting setting_from_string(const std::string& name) {
  if (name == "post_processing") return Setting::PostProcessing;
  if (name == "online") return Setting::Online;
  throw std::invalid_argument("unknown setting '" + name + "'");
}

void PolicyConfig::validate() const {
  if (alpha < 0.0 || alpha > 1000.0) {
    throw std::invalid_argument("PolicyConfig: alpha must be in [0, 1000]");
  }
  if (beta < 0.0) throw std::invalid_argument("PolicyConfig: beta must be >= 0");
}

std::vector<double> fairness_gradient(std::span<const double> relevance,
                                      std::span<const double> exposure) {
  const std::size_t n = relevance.size();
  if (exposure.size() != n) {
    throw std::invalid_argument("fairness_gradient: length mismatch");
  }
  if (n <= 1) return std::vector<double>(n, 0.0);

  double sum_er = 0.0;
  double sum_r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum_er += exposure[i] * relevance[i];
    sum_r2 += relevance[i] * relevance[i];
  }
  const double scale = 4.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  std::vector<double> grad(n);
  for (std::size_t i = 0; i < n; ++i) {
    grad[i] = scale * (relevance[i] * sum_er - exposure[i] * sum_r2);
  }
  return grad;
}

std::vector<double> fairco_error(std::span<const double> relevance,
                                 std::span<const double> exposure, std::int64_t step) {
  const std::size_t n = relevance.size();
  if (exposure.size() != n) throw std::invalid_argument("fairco_error: length mismatch");
  const double norm = static_cast<double>(step) + 1.0;
  std::vector<double> err(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    double worst = 0.0;
    for (std::size_t o = 0; o < n; ++o) {
      worst = std::max(worst, exposure[o] * relevance[d] - exposure[d] * relevance[o]);
    }
    err[d] = worst / norm;
  }
  return err;
}

double combined_score(PolicyKind kind, double relevance, double gradient,
                      double marginal_certainty, double fairco_err, double alpha,
                      double beta) {
  switch (kind) {
    case PolicyKind::TopK: return relevance;
    case PolicyKind::ExploreK: return marginal_certainty;
    case PolicyKind::FairK: return gradient;
    case PolicyKind::MCFair: return relevance + alpha * gradient + beta * marginal_certainty;
    case PolicyKind::FairCo: return relevance + alpha * fairco_err;
    case PolicyKind::FairCoExplore:
      return relevance + alpha * fairco_err + beta * marginal_certainty;
  }
  throw std::invalid_argument("combined_score: unknown policy kind");
}

std::vector<double> policy_scores(const PolicyConfig& config,
                                  std::span<const double> relevance,
                                  std::span<const double> exposure,
                                  std::span<const double> marginal_certainty,
                                  std::int64_t step) {
  const std::size_t n = relevance.size();
  if (exposure.size() != n || marginal_certainty.size() != n) {
    throw std::invalid_argument("policy_scores: length mismatch");
  }
  const double beta = config.effective_beta();

  std::vector<double> gradient;
  if (config.kind == PolicyKind::FairK || config.kind == PolicyKind::MCFair) {
    gradient = fairness_gradient(relevance, exposure);
  }
  std::vector<double> err;
  if (config.kind == PolicyKind::FairCo || config.kind == PolicyKind::FairCoExplore) {
    err = fairco_error(relevance, exposure, step);
  }

  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = combined_score(config.kind, relevance[i],
                               gradient.empty() ? 0.0 : gradient[i], marginal_certainty[i],
                               err.empty() ? 0.0 : err[i], config.alpha, beta);
  }
  return scores;
}

namespace {

void check_finite_scores(std::span<const double> scores) {
  for (double s : scores) {
    if (std::isnan(s)) throw std::logic_error("rank: NaN score");
  }
}

}  // namespace

RankedList rank(std::int64_t query_id, std::span<const double> scores) {
  check_finite_scores(scores);
  RankedList out;
  out.query_id = query_id;
  out.order.resize(scores.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::sort(out.order.begin(), out.order.end(), [&scores](int a, int b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return out;
}

RankedList rank(std::int64_t query_id, std::span<const double> scores, SeededRng& tie_rng) {
  check_finite_scores(scores);
  std::vector<std::uint64_t> tie_key(scores.size());
  for (auto& k : tie_key) k = tie_rng.next_u64();
  RankedList out;
  out.query_id = query_id;
  out.order.resize(scores.size());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    const auto ka = tie_key[static_cast<std::size_t>(a)];
    const auto kb = tie_key[static_cast<std::size_t>(b)];
    if (ka != kb) return ka < kb;
    return a < b;
  });
  return out;
}

}  // namespace fairsim
