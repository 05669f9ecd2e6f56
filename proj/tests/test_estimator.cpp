#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <sstream>

#include "fairsim/estimator.hpp"
#include "fairsim/rng.hpp"
#include "fairsim/user_model.hpp"

using namespace fairsim;

namespace {

Dataset single_query_dataset(const std::vector<int>& labels, int y_max = 2) {
  Dataset ds;
  ds.y_max = y_max;
  Query q;
  q.query_id = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    q.items.push_back(JudgedItem{static_cast<int>(i), labels[i]});
  }
  ds.train.push_back(std::move(q));
  return ds;
}

RankedList identity_list(int n) {
  RankedList list;
  list.query_id = 0;
  for (int i = 0; i < n; ++i) list.order.push_back(i);
  return list;
}

Impression manual_impression(const std::vector<int>& order, const std::vector<char>& clicks,
                             int k_s) {
  Impression imp;
  imp.ranked.query_id = 0;
  imp.ranked.order = order;
  const std::size_t presented = std::min(order.size(), static_cast<std::size_t>(k_s));
  for (std::size_t i = 0; i < presented; ++i) {
    imp.clicks.push_back(clicks[i]);
    imp.examination_probs.push_back(examination_probability(static_cast<int>(i) + 1, k_s));
  }
  return imp;
}

constexpr EstimatorConfig kTinyPrior{1e-9, 0.0};

}  // namespace

TEST_CASE("estimator config invariants") {
  CHECK_THROWS_AS((EstimatorConfig{0.0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EstimatorConfig{0.1, -0.1}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EstimatorConfig{0.1, 0.2}.validate()), std::invalid_argument);
  EstimatorConfig ok{0.1, 0.05};
  ok.validate();
}

TEST_CASE("record_impression adds the examined mass, clicks only on click") {
  Ledger ledger(single_query_dataset({1, 1}), EstimatorConfig{0.1, 0.05});
  record_impression(ledger, 0, manual_impression({0, 1}, {0, 1}, 5));
  const auto& stats = ledger.stats(0);
  CHECK(stats[0].exposure == doctest::Approx(1.0));  // rank 1: 1/log2(2)
  CHECK(stats[0].cum_clicks == 0.0);
  CHECK(stats[1].exposure == doctest::Approx(1.0 / std::log2(3.0)));
  CHECK(stats[1].cum_clicks == 1.0);
}

TEST_CASE("items past k_s receive nothing") {
  Ledger ledger(single_query_dataset({1, 1, 1, 1, 1, 1, 1}), EstimatorConfig{0.1, 0.05});
  record_impression(ledger, 0, manual_impression({0, 1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0}, 5));
  CHECK(ledger.stats(0)[5].exposure == 0.0);
  CHECK(ledger.stats(0)[6].exposure == 0.0);
  CHECK(ledger.stats(0)[4].exposure > 0.0);
}

TEST_CASE("recording the same impression twice exactly doubles exposure") {
  Ledger ledger(single_query_dataset({1, 1, 1}), EstimatorConfig{0.1, 0.05});
  const Impression imp = manual_impression({2, 0, 1}, {1, 0, 0}, 5);
  record_impression(ledger, 0, imp);
  const double once = ledger.stats(0)[2].exposure;
  record_impression(ledger, 0, imp);
  CHECK(ledger.stats(0)[2].exposure == doctest::Approx(2.0 * once));
  CHECK(ledger.stats(0)[2].cum_clicks == 2.0);
}

TEST_CASE("unknown ledger keys are internal errors") {
  Ledger ledger(single_query_dataset({1}), EstimatorConfig{0.1, 0.05});
  CHECK_THROWS_AS(ledger.stats(42), std::logic_error);
  CHECK_THROWS_AS(record_impression(ledger, 42, manual_impression({0}, {0}, 5)),
                  std::logic_error);
}

TEST_CASE("relevance_estimate is the prior-smoothed click/exposure ratio") {
  CHECK(relevance_estimate(ItemStats{6.0, 3.0}, kTinyPrior) == doctest::Approx(0.5));
  CHECK(relevance_estimate(ItemStats{0.0, 0.0}, EstimatorConfig{0.1, 0.05}) ==
        doctest::Approx(0.5));
}

TEST_CASE("variance_bound values and consistency limit") {
  CHECK(variance_bound(ItemStats{4.0, 0.0}, kTinyPrior) == doctest::Approx(0.25));
  CHECK(variance_bound(ItemStats{1e12, 0.0}, kTinyPrior) == doctest::Approx(0.0).epsilon(1e-9));
  double prev = variance_bound(ItemStats{0.0, 0.0}, EstimatorConfig{0.1, 0.0});
  for (double e : {0.5, 1.0, 2.0, 8.0, 64.0}) {
    const double v = variance_bound(ItemStats{e, 0.0}, EstimatorConfig{0.1, 0.0});
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("marginal_certainty values and inverse-square law") {
  CHECK(marginal_certainty(ItemStats{2.0, 0.0}, kTinyPrior) == doctest::Approx(0.25));
  const double at_ten = marginal_certainty(ItemStats{10.0, 0.0}, kTinyPrior);
  const double at_one = marginal_certainty(ItemStats{1.0, 0.0}, kTinyPrior);
  CHECK(at_one / at_ten == doctest::Approx(100.0));
}

TEST_CASE("marginal_certainty equals the negative derivative of the variance bound") {
  const EstimatorConfig config{0.1, 0.0};
  for (double exposure : {1.0, 2.0, 5.0, 10.0, 100.0}) {
    const double h = 1e-4 * exposure;
    const double lo = variance_bound(ItemStats{exposure - h, 0.0}, config);
    const double hi = variance_bound(ItemStats{exposure + h, 0.0}, config);
    const double finite_difference = (lo - hi) / (2.0 * h);
    const double mc = marginal_certainty(ItemStats{exposure, 0.0}, config);
    CHECK(std::abs(finite_difference - mc) / mc <= 1e-6);
  }
}

TEST_CASE("replayed clicks give an unbiased relevance estimate") {
  // All labels 1 -> true R = 0.4 with epsilon=0.1, y_max=2. One run of 1e4
  // identical impressions; the estimate must land within 3*sqrt(1/E) of R.
  const ClickModelConfig click{0.1, 2, 5};
  const std::vector<int> labels{1, 1, 1, 1, 1};
  Ledger ledger(single_query_dataset(labels), kTinyPrior);
  SeededRng rng(1234, 0);
  const RankedList list = identity_list(5);
  for (int t = 0; t < 10000; ++t) {
    record_impression(ledger, 0, simulate_clicks(list, labels, click, rng));
  }
  for (const ItemStats& stats : ledger.stats(0)) {
    const double estimate = relevance_estimate(stats, kTinyPrior);
    const double tolerance = 3.0 * std::sqrt(1.0 / stats.exposure);
    CHECK(std::abs(estimate - 0.4) <= tolerance);
  }
}

TEST_CASE("empirical estimator variance stays under the bound") {
  const ClickModelConfig click{0.1, 2, 5};
  const std::vector<int> labels{2, 1, 0, 1, 2};
  const int n_replays = 500;
  const int n_impressions = 20;
  const RankedList list = identity_list(5);

  std::vector<std::vector<double>> estimates(labels.size());
  std::vector<double> bound(labels.size(), 0.0);
  for (int replay = 0; replay < n_replays; ++replay) {
    Ledger ledger(single_query_dataset(labels), kTinyPrior);
    SeededRng rng(777, static_cast<std::uint64_t>(replay));
    for (int t = 0; t < n_impressions; ++t) {
      record_impression(ledger, 0, simulate_clicks(list, labels, click, rng));
    }
    const auto& stats = ledger.stats(0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      estimates[i].push_back(relevance_estimate(stats[i], kTinyPrior));
      bound[i] = variance_bound(stats[i], kTinyPrior);
    }
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    double mean = 0.0;
    for (double e : estimates[i]) mean += e;
    mean /= n_replays;
    double var = 0.0;
    for (double e : estimates[i]) var += (e - mean) * (e - mean);
    var /= (n_replays - 1);
    CHECK(var <= bound[i]);
  }
}

TEST_CASE("replaying a click log in any batch grouping gives identical ledgers") {
  const ClickModelConfig click{0.1, 2, 5};
  const std::vector<int> labels{2, 0, 1, 1};
  const RankedList list = identity_list(4);
  std::vector<Impression> log;
  SeededRng rng(42, 5);
  for (int t = 0; t < 100; ++t) log.push_back(simulate_clicks(list, labels, click, rng));

  Ledger one_by_one(single_query_dataset(labels), kTinyPrior);
  for (const Impression& imp : log) record_impression(one_by_one, 0, imp);

  Ledger batched(single_query_dataset(labels), kTinyPrior);
  std::size_t pos = 0;
  for (std::size_t batch : {7, 23, 41, 29}) {
    for (std::size_t i = 0; i < batch; ++i) record_impression(batched, 0, log[pos++]);
  }
  REQUIRE(pos == log.size());

  for (std::size_t i = 0; i < labels.size(); ++i) {
    CHECK(one_by_one.stats(0)[i].exposure == batched.stats(0)[i].exposure);
    CHECK(one_by_one.stats(0)[i].cum_clicks == batched.stats(0)[i].cum_clicks);
  }
}

TEST_CASE("ledger csv snapshot") {
  Ledger ledger(single_query_dataset({1, 1}), EstimatorConfig{0.1, 0.05});
  record_impression(ledger, 0, manual_impression({0, 1}, {1, 0}, 5));
  std::ostringstream out;
  ledger.write_csv(out);
  CHECK(out.str().rfind("query_id,item_id,exposure,cum_clicks\n0,0,1,1\n", 0) == 0);
}
