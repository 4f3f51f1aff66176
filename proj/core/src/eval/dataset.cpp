#include "qae/eval/dataset.hpp"

#include <charconv>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qae/core/error.hpp"

namespace qae::eval {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return in;
}

Error parse_error(const std::filesystem::path& path, std::size_t line, const std::string& why) {
  return Error(Errc::ParseError, path.string() + ":" + std::to_string(line) + ": " + why);
}

std::string string_field(const nlohmann::json& obj, const char* name, bool required,
                         const std::filesystem::path& path, std::size_t line) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) {
    if (required) throw parse_error(path, line, std::string("missing field \"") + name + "\"");
    return {};
  }
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw parse_error(path, line, std::string("field \"") + name + "\" is not a string");
}

template <typename Fn>
void for_each_json_line(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_input(path);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto obj = nlohmann::json::parse(line, nullptr, false);
    if (obj.is_discarded() || !obj.is_object()) {
      throw parse_error(path, number, "not a JSON object");
    }
    fn(obj, number);
  }
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

bool parse_int(const std::string& s, int& value) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  return ec == std::errc() && ptr == s.data() + s.size();
}

}  // namespace

std::vector<DocumentRecord> load_corpus(const std::filesystem::path& path) {
  std::vector<DocumentRecord> docs;
  std::unordered_set<std::string> ids;
  for_each_json_line(path, [&](const nlohmann::json& obj, std::size_t line) {
    DocumentRecord d;
    d.id = string_field(obj, "_id", true, path, line);
    d.title = string_field(obj, "title", false, path, line);
    d.text = string_field(obj, "text", true, path, line);
    d.provenance = path.filename().string() + ":" + std::to_string(line);
    if (d.id.empty()) throw parse_error(path, line, "empty _id");
    if (!ids.insert(d.id).second) {
      throw Error(Errc::DuplicateId, path.string() + ":" + std::to_string(line) +
                                         ": duplicate document id '" + d.id + "'");
    }
    docs.push_back(std::move(d));
  });
  return docs;
}

std::vector<Query> load_queries(const std::filesystem::path& path) {
  std::vector<Query> queries;
  std::unordered_set<std::string> ids;
  for_each_json_line(path, [&](const nlohmann::json& obj, std::size_t line) {
    Query q{string_field(obj, "_id", true, path, line), string_field(obj, "text", true, path, line)};
    if (q.id.empty()) throw parse_error(path, line, "empty _id");
    if (!ids.insert(q.id).second) {
      throw Error(Errc::DuplicateId, path.string() + ":" + std::to_string(line) +
                                         ": duplicate query id '" + q.id + "'");
    }
    queries.push_back(std::move(q));
  });
  return queries;
}

Qrels load_qrels(const std::filesystem::path& path) {
  auto in = open_input(path);
  Qrels qrels;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cols = split_tabs(line);
    if (cols.size() < 3) throw parse_error(path, number, "expected 3 tab-separated columns");
    int rel = 0;
    if (!parse_int(cols[2], rel)) {
      if (number == 1) continue;  // header
      throw parse_error(path, number, "score '" + cols[2] + "' is not an integer");
    }
    if (rel < 0) throw parse_error(path, number, "negative relevance");
    if (cols[0].empty() || cols[1].empty()) throw parse_error(path, number, "empty id");
    qrels[cols[0]][cols[1]] = rel;
  }
  return qrels;
}

std::size_t drop_unknown(Qrels& qrels, const std::set<std::string>& document_ids,
                         const std::set<std::string>& query_ids) {
  std::size_t dropped = 0;
  for (auto q = qrels.begin(); q != qrels.end();) {
    if (!query_ids.contains(q->first)) {
      dropped += q->second.size();
      q = qrels.erase(q);
      continue;
    }
    for (auto d = q->second.begin(); d != q->second.end();) {
      if (!document_ids.contains(d->first)) {
        ++dropped;
        d = q->second.erase(d);
      } else {
        ++d;
      }
    }
    q = q->second.empty() ? qrels.erase(q) : std::next(q);
  }
  return dropped;
}

Dataset load_dataset(const std::filesystem::path& corpus, const std::filesystem::path& queries,
                     const std::filesystem::path& qrels) {
  Dataset ds;
  ds.corpus = load_corpus(corpus);
  ds.queries = load_queries(queries);
  ds.qrels = load_qrels(qrels);
  std::set<std::string> doc_ids, query_ids;
  for (const auto& d : ds.corpus) doc_ids.insert(d.id);
  for (const auto& q : ds.queries) query_ids.insert(q.id);
  ds.dropped_judgments = drop_unknown(ds.qrels, doc_ids, query_ids);
  return ds;
}

void write_corpus(const std::filesystem::path& path, const std::vector<DocumentRecord>& corpus) {
  std::ofstream out(path);
  for (const auto& d : corpus) {
    out << nlohmann::json{{"_id", d.id}, {"title", d.title}, {"text", d.text}}.dump() << '\n';
  }
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

void write_queries(const std::filesystem::path& path, const std::vector<Query>& queries) {
  std::ofstream out(path);
  for (const auto& q : queries) out << nlohmann::json{{"_id", q.id}, {"text", q.text}}.dump() << '\n';
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

void write_qrels(const std::filesystem::path& path, const Qrels& qrels) {
  std::ofstream out(path);
  out << "query-id\tcorpus-id\tscore\n";
  for (const auto& [q, docs] : qrels) {
    for (const auto& [d, rel] : docs) out << q << '\t' << d << '\t' << rel << '\n';
  }
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
}

}  // namespace qae::eval
