#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qae/eval/dataset.hpp"
#include "qae/index/flat_index.hpp"

namespace qae::eval {

/// Ranked results per query id.
using RunResults = std::map<std::string, index::SearchResult>;

struct QueryMetrics {
  std::string query_id;
  std::optional<std::size_t> first_relevant_rank;  // 1-based, within top-k
  double reciprocal_rank = 0.0;
  double dcg = 0.0;
  double idcg = 0.0;
  double ndcg = 0.0;
};

/// MRR@k and NDCG@k over the judged queries.
///
/// A query is evaluated when it has results and at least one positive judgment.
/// Queries with results but no qrels entry are excluded (`unjudged_queries`);
/// queries whose judgments are all zero are skipped (`zero_relevance_queries`).
/// Gain is 2^rel - 1, discount log2(rank + 1), and the ideal DCG is truncated at
/// k. Throws NoJudgedQueries when nothing is left to evaluate.
struct MetricSummary {
  std::size_t k = 10;
  std::vector<QueryMetrics> per_query;  // sorted by query id
  double mrr = 0.0;
  double ndcg = 0.0;
  std::size_t num_queries = 0;
  std::size_t unjudged_queries = 0;
  std::size_t zero_relevance_queries = 0;
};

MetricSummary evaluate(const RunResults& results, const Qrels& qrels, std::size_t k);

double mrr_at_k(const RunResults& results, const Qrels& qrels, std::size_t k);
double ndcg_at_k(const RunResults& results, const Qrels& qrels, std::size_t k);

}  // namespace qae::eval
