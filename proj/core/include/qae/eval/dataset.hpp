#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "qae/core/document.hpp"

namespace qae::eval {

struct Query {
  std::string id;
  std::string text;
};

/// Graded judgments: query id -> document id -> relevance (>= 0).
using Qrels = std::map<std::string, std::map<std::string, int>>;

/// BEIR corpus: one JSON object per line with `_id`, `title`, `text`.
/// Errors: ParseError (with line number), DuplicateId, IoError.
std::vector<DocumentRecord> load_corpus(const std::filesystem::path& path);

/// BEIR queries: one JSON object per line with `_id`, `text`.
std::vector<Query> load_queries(const std::filesystem::path& path);

/// TSV `query-id <TAB> corpus-id <TAB> score`. A first line whose score column
/// is not an integer is treated as a header. Negative scores are a ParseError.
Qrels load_qrels(const std::filesystem::path& path);

/// Removes judgments naming unknown query or document ids; returns how many
/// were dropped. Queries left without judgments are removed too.
std::size_t drop_unknown(Qrels& qrels, const std::set<std::string>& document_ids,
                         const std::set<std::string>& query_ids);

struct Dataset {
  std::vector<DocumentRecord> corpus;
  std::vector<Query> queries;
  Qrels qrels;
  std::size_t dropped_judgments = 0;
};

/// Loads all three files and applies drop_unknown().
Dataset load_dataset(const std::filesystem::path& corpus, const std::filesystem::path& queries,
                     const std::filesystem::path& qrels);

void write_corpus(const std::filesystem::path& path, const std::vector<DocumentRecord>& corpus);
void write_queries(const std::filesystem::path& path, const std::vector<Query>& queries);
void write_qrels(const std::filesystem::path& path, const Qrels& qrels);

}  // namespace qae::eval
