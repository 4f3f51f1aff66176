#include "qae/eval/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "qae/core/error.hpp"

namespace qae::eval {
namespace {

double gain(int rel) { return std::exp2(static_cast<double>(rel)) - 1.0; }
double discount(std::size_t rank) { return std::log2(static_cast<double>(rank) + 1.0); }

}  // namespace

MetricSummary evaluate(const RunResults& results, const Qrels& qrels, std::size_t k) {
  if (k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  MetricSummary out;
  out.k = k;
  double rr_sum = 0.0, ndcg_sum = 0.0;

  for (const auto& [qid, ranked] : results) {
    auto judged = qrels.find(qid);
    if (judged == qrels.end()) {
      ++out.unjudged_queries;
      continue;
    }
    std::vector<int> grades;
    for (const auto& [doc, rel] : judged->second) {
      if (rel > 0) grades.push_back(rel);
    }
    if (grades.empty()) {
      ++out.zero_relevance_queries;
      continue;
    }

    QueryMetrics m;
    m.query_id = qid;
    const std::size_t depth = std::min(k, ranked.size());
    for (std::size_t i = 0; i < depth; ++i) {
      auto it = judged->second.find(ranked[i].document_id);
      const int rel = it == judged->second.end() ? 0 : it->second;
      if (rel <= 0) continue;
      if (!m.first_relevant_rank) m.first_relevant_rank = i + 1;
      m.dcg += gain(rel) / discount(i + 1);
    }
    if (m.first_relevant_rank) m.reciprocal_rank = 1.0 / static_cast<double>(*m.first_relevant_rank);

    std::sort(grades.begin(), grades.end(), std::greater<>());
    for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) m.idcg += gain(grades[i]) / discount(i + 1);
    m.ndcg = m.dcg / m.idcg;

    rr_sum += m.reciprocal_rank;
    ndcg_sum += m.ndcg;
    out.per_query.push_back(std::move(m));
  }

  out.num_queries = out.per_query.size();
  if (out.num_queries == 0) throw Error(Errc::NoJudgedQueries, "no query has a positive judgment");
  out.mrr = rr_sum / static_cast<double>(out.num_queries);
  out.ndcg = ndcg_sum / static_cast<double>(out.num_queries);
  return out;
}

double mrr_at_k(const RunResults& results, const Qrels& qrels, std::size_t k) {
  return evaluate(results, qrels, k).mrr;
}

double ndcg_at_k(const RunResults& results, const Qrels& qrels, std::size_t k) {
  return evaluate(results, qrels, k).ndcg;
}

}  // namespace qae::eval
