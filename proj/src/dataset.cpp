#include "fairsim/dataset.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fairsim/rng.hpp"

namespace fairsim {

namespace {

// Strict non-negative integer parse; rejects empty, sign and trailing junk.
bool parse_uint(const std::string& token, std::int64_t& out) {
  if (token.empty()) return false;
  std::int64_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
    if (value < 0) return false;  // overflow
  }
  out = value;
  return true;
}

}  // namespace

std::vector<Query> parse_letor(std::istream& in, int y_max) {
  if (y_max < 1) throw std::invalid_argument("parse_letor: y_max must be >= 1");

  std::vector<Query> queries;
  std::string line;
  std::size_t line_no = 0;
  bool have_current = false;
  std::int64_t current_qid = -1;

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);

    std::istringstream tokens(line);
    std::string label_token;
    if (!(tokens >> label_token)) continue;  // blank line

    std::int64_t label = 0;
    if (!parse_uint(label_token, label)) {
      throw std::runtime_error("parse_letor: line " + std::to_string(line_no) +
                               ": expected integer label, got '" + label_token + "'");
    }

    std::string qid_token;
    if (!(tokens >> qid_token) || qid_token.rfind("qid:", 0) != 0) {
      throw std::runtime_error("parse_letor: line " + std::to_string(line_no) +
                               ": missing qid token");
    }
    std::int64_t qid = 0;
    if (!parse_uint(qid_token.substr(4), qid)) {
      throw std::runtime_error("parse_letor: line " + std::to_string(line_no) +
                               ": malformed qid '" + qid_token + "'");
    }

    if (label > y_max) {
      throw std::invalid_argument("parse_letor: line " + std::to_string(line_no) +
                                  ": label " + std::to_string(label) + " exceeds y_max " +
                                  std::to_string(y_max));
    }

    // Remaining feature tokens and the comment are intentionally not stored;
    // nothing downstream consumes feature vectors, and skipping them keeps
    // memory at O(items) for large corpora.
    if (!have_current || qid != current_qid) {
      queries.push_back(Query{qid, {}});
      current_qid = qid;
      have_current = true;
    }
    Query& q = queries.back();
    q.items.push_back(JudgedItem{static_cast<int>(q.items.size()), static_cast<int>(label)});
  }
  return queries;
}

std::vector<Query> load_letor_file(const std::string& path, int y_max) {
  // zlib's gz layer probes the magic bytes itself and reads plain text as-is.
  gzFile file = gzopen(path.c_str(), "rb");
  if (file == nullptr) {
    throw std::runtime_error("load_letor_file: cannot open '" + path + "'");
  }
  std::string text;
  char buffer[1 << 16];
  int n = 0;
  while ((n = gzread(file, buffer, sizeof(buffer))) > 0) {
    text.append(buffer, static_cast<std::size_t>(n));
  }
  const bool read_error = n < 0;
  gzclose(file);
  if (read_error) {
    throw std::runtime_error("load_letor_file: read error in '" + path + "'");
  }
  std::istringstream in(text);
  return parse_letor(in, y_max);
}

void write_letor(std::ostream& out, const std::vector<Query>& queries) {
  for (const Query& q : queries) {
    for (const JudgedItem& item : q.items) {
      out << item.label << " qid:" << q.query_id << '\n';
    }
  }
}

std::vector<Query> generate_synthetic(int n_queries, int n_items, int y_max,
                                      std::uint64_t seed) {
  if (n_queries < 1) throw std::invalid_argument("generate_synthetic: n_queries must be >= 1");
  if (n_items < 1) throw std::invalid_argument("generate_synthetic: n_items must be >= 1");
  if (y_max < 1) throw std::invalid_argument("generate_synthetic: y_max must be >= 1");

  std::vector<Query> queries(static_cast<std::size_t>(n_queries));
  for (int qi = 0; qi < n_queries; ++qi) {
    Query& q = queries[static_cast<std::size_t>(qi)];
    q.query_id = qi;
    q.items.resize(static_cast<std::size_t>(n_items));
    SeededRng rng(seed, static_cast<std::uint64_t>(qi));
    for (int i = 0; i < n_items; ++i) {
      q.items[static_cast<std::size_t>(i)] =
          JudgedItem{i, static_cast<int>(rng.next_below(static_cast<std::uint64_t>(y_max) + 1))};
    }
  }
  return queries;
}

std::vector<Query> filter_max_candidates(std::vector<Query> queries,
                                         std::size_t max_candidates) {
  if (max_candidates == 0) return queries;
  std::erase_if(queries,
                [max_candidates](const Query& q) { return q.items.size() > max_candidates; });
  return queries;
}

Dataset split_partitions(std::vector<Query> queries, int y_max,
                         const std::array<double, 3>& fractions, std::uint64_t seed) {
  double sum = 0.0;
  for (double f : fractions) {
    if (f < 0.0) throw std::invalid_argument("split_partitions: negative fraction");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split_partitions: fractions must sum to 1");
  }
  for (const Query& q : queries) {
    if (q.items.empty()) throw std::invalid_argument("split_partitions: empty query");
    for (const JudgedItem& item : q.items) {
      if (item.label > y_max) {
        throw std::invalid_argument("split_partitions: label exceeds y_max");
      }
    }
  }

  const std::size_t n = queries.size();
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  // Hand-rolled Fisher-Yates: std::shuffle's draw sequence is unspecified.
  SeededRng rng(seed, /*stream=*/0, /*tag=*/1);
  for (std::size_t i = n; i > 1; --i) {
    std::size_t j = rng.next_below(i);
    std::swap(index[i - 1], index[j]);
  }

  const auto floor_of = [n](double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-12));
  };
  std::size_t n_train = floor_of(fractions[0]);
  const std::size_t n_valid = floor_of(fractions[1]);
  const std::size_t n_test = floor_of(fractions[2]);
  n_train += n - (n_train + n_valid + n_test);  // remainder to train

  Dataset out;
  out.y_max = y_max;
  out.train.reserve(n_train);
  out.validation.reserve(n_valid);
  out.test.reserve(n_test);
  for (std::size_t pos = 0; pos < n; ++pos) {
    Query& q = queries[index[pos]];
    if (pos < n_train) {
      out.train.push_back(std::move(q));
    } else if (pos < n_train + n_valid) {
      out.validation.push_back(std::move(q));
    } else {
      out.test.push_back(std::move(q));
    }
  }
  return out;
}

std::string dataset_content_hash(const Dataset& dataset) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
  const auto mix = [&h](std::uint64_t v) {
    for (int byte = 0; byte < 8; ++byte) {
      h ^= (v >> (8 * byte)) & 0xffULL;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(dataset.y_max));
  for (const auto* part : {&dataset.train, &dataset.validation, &dataset.test}) {
    mix(part->size());
    for (const Query& q : *part) {
      mix(static_cast<std::uint64_t>(q.query_id));
      mix(q.items.size());
      for (const JudgedItem& item : q.items) {
        mix(static_cast<std::uint64_t>(item.label));
      }
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace fairsim
