#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fairsim {

struct JudgedItem {
  int item_id = 0;  // unique within its query, assigned as 0-based position
  int label = 0;    // graded judgment, 0 <= label <= dataset y_max
};

struct Query {
  std::int64_t query_id = 0;
  std::vector<JudgedItem> items;  // file/generation order
};

/// Judged queries split into the three usual partitions. Immutable once
/// built; safe to share read-only across simulation workers.
struct Dataset {
  int y_max = 1;
  std::vector<Query> train;
  std::vector<Query> validation;
  std::vector<Query> test;

  std::size_t total_queries() const { return train.size() + validation.size() + test.size(); }
};

/// Parses LETOR/SVMlight-style lines: `<label> qid:<qid> <feat>:<val>... [# comment]`.
/// Consecutive lines with the same qid form one query; item ids are 0-based
/// positions. Feature pairs and comments are skipped, never stored.
/// Throws std::runtime_error (with line number) on malformed lines and
/// std::invalid_argument when a label exceeds y_max.
std::vector<Query> parse_letor(std::istream& in, int y_max);

/// Reads a LETOR file, transparently inflating gzip input (magic-byte probe).
std::vector<Query> load_letor_file(const std::string& path, int y_max);

/// Writes `<label> qid:<qid>` lines; parse_letor of the output reproduces the
/// (label, qid) content exactly.
void write_letor(std::ostream& out, const std::vector<Query>& queries);

/// Deterministic synthetic corpus: each query draws n_items labels i.i.d.
/// uniform over {0..y_max} from a stream seeded by (seed, query_id).
std::vector<Query> generate_synthetic(int n_queries, int n_items, int y_max,
                                      std::uint64_t seed);

/// Drops queries with more than max_candidates items (0 keeps everything).
std::vector<Query> filter_max_candidates(std::vector<Query> queries,
                                         std::size_t max_candidates);

/// Seeded shuffle then contiguous split. Partition sizes are the floors of
/// n * fraction; the remainder goes to train.
Dataset split_partitions(std::vector<Query> queries, int y_max,
                         const std::array<double, 3>& fractions, std::uint64_t seed);

/// FNV-1a content hash over (qid, labels) of every partition, hex-encoded.
/// Recorded in result metadata so runs pin the exact corpus they used.
std::string dataset_content_hash(const Dataset& dataset);

}  // namespace fairsim
