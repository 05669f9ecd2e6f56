#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fairsim/rng.hpp"
#include "fairsim/user_model.hpp"

using namespace fairsim;

namespace {

const ClickModelConfig kConfig{0.1, 2, 5};

RankedList identity_list(std::int64_t qid, int n) {
  RankedList list;
  list.query_id = qid;
  for (int i = 0; i < n; ++i) list.order.push_back(i);
  return list;
}

}  // namespace

TEST_CASE("relevance_probability spans the noise floor to saturation") {
  CHECK(relevance_probability(0, kConfig) == doctest::Approx(0.1));
  CHECK(relevance_probability(2, kConfig) == doctest::Approx(1.0));
  CHECK(relevance_probability(1, kConfig) == doctest::Approx(0.1 + 0.9 / 3.0));
  CHECK_THROWS_AS(relevance_probability(3, kConfig), std::invalid_argument);
  CHECK_THROWS_AS(relevance_probability(-1, kConfig), std::invalid_argument);
}

TEST_CASE("relevance_probability strictly increases in the grade for epsilon < 1") {
  ClickModelConfig config{0.3, 4, 5};
  double prev = -1.0;
  for (int y = 0; y <= 4; ++y) {
    const double p = relevance_probability(y, config);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("examination_probability follows the log2 curve with a hard cutoff") {
  CHECK(examination_probability(1, 5) == doctest::Approx(1.0));
  CHECK(examination_probability(3, 5) == doctest::Approx(0.5));
  CHECK(examination_probability(6, 5) == 0.0);
  CHECK_THROWS_AS(examination_probability(0, 5), std::invalid_argument);
}

TEST_CASE("examination_probability is non-increasing in rank") {
  double prev = 2.0;
  for (int rank = 1; rank <= 12; ++rank) {
    const double p = examination_probability(rank, 5);
    CHECK(p <= prev);
    prev = p;
  }
}

TEST_CASE("zero-grade items with epsilon = 0 never click") {
  ClickModelConfig config{0.0, 2, 5};
  const std::vector<int> labels{0, 0, 0};
  SeededRng rng(1, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const Impression imp = simulate_clicks(identity_list(0, 3), labels, config, rng);
    for (auto c : imp.clicks) CHECK(c == 0);
  }
}

TEST_CASE("ranks past k_s are not presented at all") {
  const std::vector<int> labels{2, 2, 2, 2, 2, 2, 2};
  SeededRng rng(2, 0);
  const Impression imp = simulate_clicks(identity_list(0, 7), labels, kConfig, rng);
  CHECK(imp.clicks.size() == 5);
  CHECK(imp.examination_probs.size() == 5);
}

TEST_CASE("top-grade item at rank 1 always clicks") {
  // P(click) = 1 * 1 at rank 1 for label y_max, any epsilon.
  const std::vector<int> labels{2};
  SeededRng rng(3, 0);
  for (int rep = 0; rep < 100000; ++rep) {
    const Impression imp = simulate_clicks(identity_list(0, 1), labels, kConfig, rng);
    if (imp.clicks[0] != 1) {
      FAIL("top-grade rank-1 item failed to click");
    }
  }
}

TEST_CASE("empirical click rate matches relevance x examination per cell") {
  const std::vector<int> labels{0, 1, 2, 1, 0};
  const int n_impressions = 100000;
  SeededRng rng(4, 0);
  std::vector<int> clicks(labels.size(), 0);
  const RankedList list = identity_list(0, static_cast<int>(labels.size()));
  for (int rep = 0; rep < n_impressions; ++rep) {
    const Impression imp = simulate_clicks(list, labels, kConfig, rng);
    for (std::size_t i = 0; i < imp.clicks.size(); ++i) clicks[i] += imp.clicks[i];
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = relevance_probability(labels[i], kConfig) *
                     examination_probability(static_cast<int>(i) + 1, kConfig.k_s);
    const double sigma = std::sqrt(n_impressions * p * (1.0 - p));
    CHECK(std::abs(clicks[i] - n_impressions * p) <= 3.0 * sigma + 1e-9);
  }
}

TEST_CASE("click draws are deterministic given the stream state") {
  const std::vector<int> labels{1, 2, 0, 1};
  SeededRng a(9, 3);
  SeededRng b(9, 3);
  const RankedList list = identity_list(5, 4);
  for (int rep = 0; rep < 50; ++rep) {
    const Impression ia = simulate_clicks(list, labels, kConfig, a);
    const Impression ib = simulate_clicks(list, labels, kConfig, b);
    for (std::size_t i = 0; i < ia.clicks.size(); ++i) CHECK(ia.clicks[i] == ib.clicks[i]);
  }
}
