#include "fairsim/estimator.hpp"

#include <ostream>
#include <stdexcept>

#include "fairsim/io_format.hpp"

namespace fairsim {

void EstimatorConfig::validate() const {
  if (!(e0 > 0.0)) throw std::invalid_argument("EstimatorConfig: e0 must be > 0");
  if (c0 < 0.0) throw std::invalid_argument("EstimatorConfig: c0 must be >= 0");
  if (c0 / e0 > 1.0) {
    throw std::invalid_argument("EstimatorConfig: prior ratio c0/e0 must be <= 1");
  }
}

double relevance_estimate(const ItemStats& stats, const EstimatorConfig& config) {
  return (stats.cum_clicks + config.c0) / (stats.exposure + config.e0);
}

double variance_bound(const ItemStats& stats, const EstimatorConfig& config) {
  return 1.0 / (stats.exposure + config.e0);
}

double marginal_certainty(const ItemStats& stats, const EstimatorConfig& config) {
  const double denom = stats.exposure + config.e0;
  return 1.0 / (denom * denom);
}

Ledger::Ledger(const Dataset& dataset, EstimatorConfig config) : config_(config) {
  config_.validate();
  for (const auto* part : {&dataset.train, &dataset.validation, &dataset.test}) {
    for (const Query& q : *part) {
      stats_.emplace(q.query_id, std::vector<ItemStats>(q.items.size()));
    }
  }
}

const std::vector<ItemStats>& Ledger::stats(std::int64_t query_id) const {
  auto it = stats_.find(query_id);
  if (it == stats_.end()) {
    throw std::logic_error("Ledger: unknown query_id " + std::to_string(query_id));
  }
  return it->second;
}

std::vector<ItemStats>& Ledger::stats_mutable(std::int64_t query_id) {
  auto it = stats_.find(query_id);
  if (it == stats_.end()) {
    throw std::logic_error("Ledger: unknown query_id " + std::to_string(query_id));
  }
  return it->second;
}

std::vector<double> Ledger::exposures(std::int64_t query_id) const {
  const auto& s = stats(query_id);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i].exposure;
  return out;
}

std::vector<double> Ledger::estimates(std::int64_t query_id) const {
  const auto& s = stats(query_id);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = relevance_estimate(s[i], config_);
  return out;
}

std::vector<double> Ledger::marginal_certainties(std::int64_t query_id) const {
  const auto& s = stats(query_id);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = marginal_certainty(s[i], config_);
  return out;
}

double Ledger::total_exposure() const {
  double sum = 0.0;
  for (const auto& [qid, items] : stats_) {
    for (const ItemStats& s : items) sum += s.exposure;
  }
  return sum;
}

void Ledger::write_csv(std::ostream& out) const {
  out << "query_id,item_id,exposure,cum_clicks\n";
  for (const auto& [qid, items] : stats_) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      out << qid << ',' << i << ',' << format_g9(items[i].exposure) << ','
          << format_g9(items[i].cum_clicks) << '\n';
    }
  }
}

void record_impression(Ledger& ledger, std::int64_t query_id, const Impression& impression) {
  auto& items = ledger.stats_mutable(query_id);
  for (std::size_t i = 0; i < impression.clicks.size(); ++i) {
    const int item = impression.ranked.order[i];
    if (item < 0 || static_cast<std::size_t>(item) >= items.size()) {
      throw std::logic_error("record_impression: item " + std::to_string(item) +
                             " not a candidate of query " + std::to_string(query_id));
    }
    ItemStats& s = items[static_cast<std::size_t>(item)];
    s.exposure += impression.examination_probs[i];
    if (impression.clicks[i]) s.cum_clicks += 1.0;
  }
}

}  // namespace fairsim
