#include "qae/providers/query_generation.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <unordered_set>

#include "qae/core/error.hpp"

namespace qae::providers {
namespace {

constexpr std::string_view kQuestionPrompt =
    "Context information is below. \n"
    "---------------------\n"
    "[Document]\n"
    "---------------------\n"
    "Given the context information and not prior knowledge, generate only questions based on "
    "the below query.\n"
    "You are a Teacher/Professor. Your task is to setup [Number of Questions] questions for an "
    "upcoming quiz/examination. The questions should be diverse in nature across the document. "
    "Restrict the questions to the information provided, and avoid ambiguous references. \n"
    "\n"
    "Output Format:\n"
    "```json\n"
    "[\n"
    "    \"1. question\",\n"
    "    \"2. question\",\n"
    "    ...\n"
    "]\n"
    "```";

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string trim(std::string_view s) {
  auto b = s.begin(), e = s.end();
  while (b != e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e != b && std::isspace(static_cast<unsigned char>(*(e - 1)))) --e;
  return std::string(b, e);
}

std::string strip_enumeration(std::string_view s) {
  static const std::regex kEnum(R"(^\s*\(?\d+\s*[\.\):]\s*)");
  return trim(std::regex_replace(std::string(s), kEnum, "", std::regex_constants::format_first_only));
}

// Finds the first balanced top-level [...] span, honoring JSON string escapes.
std::optional<std::string_view> find_json_array(std::string_view text) {
  std::size_t start = text.find('[');
  while (start != std::string_view::npos) {
    int depth = 0;
    bool in_string = false, escaped = false;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '[') ++depth;
      else if (c == ']' && --depth == 0) {
        auto candidate = text.substr(start, i - start + 1);
        if (nlohmann::json::accept(candidate)) return candidate;
        break;
      }
    }
    start = text.find('[', start + 1);
  }
  return std::nullopt;
}

}  // namespace

std::string render_question_prompt(std::string_view document_text, int num_questions) {
  std::string prompt(kQuestionPrompt);
  replace_all(prompt, "[Number of Questions]", std::to_string(num_questions));
  replace_all(prompt, "[Document]", document_text);
  return prompt;
}

ParsedQuestions parse_question_list(std::string_view reply) {
  std::string_view body = reply;
  if (auto fence = reply.find("```json"); fence != std::string_view::npos) {
    body = reply.substr(fence + 7);
  }
  auto array = find_json_array(body);
  if (!array && body.size() != reply.size()) array = find_json_array(reply);
  if (!array) throw Error(Errc::UnparseableOutput, "no JSON array in generator output");

  const auto parsed = nlohmann::json::parse(*array);
  ParsedQuestions out;
  std::unordered_set<std::string> seen;
  for (const auto& item : parsed) {
    if (!item.is_string()) {
      throw Error(Errc::UnparseableOutput, "generator output array holds a non-string element");
    }
    std::string q = strip_enumeration(item.get<std::string>());
    if (q.empty()) continue;
    if (!seen.insert(q).second) {
      ++out.duplicates_removed;
      continue;
    }
    out.questions.push_back(std::move(q));
  }
  return out;
}

PredictedQueries generate_queries(QueryGenerator& generator, const QueryGenRequest& request,
                                  std::string document_id, const RetryPolicy& retry) {
  if (trim(request.document_text).empty()) {
    throw Error(Errc::InvalidArgument, "document text is empty");
  }
  if (request.num_questions < 1) {
    throw Error(Errc::InvalidArgument, "num_questions must be >= 1");
  }
  const std::string prompt = render_question_prompt(request.document_text, request.num_questions);

  auto complete = [&] {
    try {
      return with_retry(retry, [&] { return generator.complete(prompt, request); });
    } catch (const Error& e) {
      if (e.code() == Errc::ProviderUnavailable) throw Error(Errc::GenerationFailed, e.what());
      throw;
    }
  };

  ParsedQuestions parsed;
  try {
    parsed = parse_question_list(complete());
  } catch (const Error& e) {
    if (e.code() != Errc::UnparseableOutput) throw;
    parsed = parse_question_list(complete());
  }
  if (parsed.questions.empty()) {
    throw Error(Errc::TooFewQueries, "generator returned no usable questions for " + document_id);
  }

  PredictedQueries out;
  out.document_id = std::move(document_id);
  out.generator_id = generator.generator_id();
  out.duplicates_removed = parsed.duplicates_removed;
  const auto wanted = static_cast<std::size_t>(request.num_questions);
  if (parsed.questions.size() > wanted) parsed.questions.resize(wanted);
  out.shortfall = wanted - parsed.questions.size();
  out.queries = std::move(parsed.questions);
  return out;
}

namespace {

// Counts complete() calls that reach the wrapped generator.
class CountingGenerator final : public QueryGenerator {
 public:
  CountingGenerator(QueryGenerator& inner, std::atomic<std::size_t>& counter,
                    std::counting_semaphore<>& in_flight)
      : inner_(inner), counter_(counter), in_flight_(in_flight) {}
  std::string generator_id() const override { return inner_.generator_id(); }
  std::string model_id() const override { return inner_.model_id(); }
  std::string complete(const std::string& prompt, const QueryGenRequest& request) override {
    in_flight_.acquire();
    struct Release {
      std::counting_semaphore<>& s;
      ~Release() { s.release(); }
    } release{in_flight_};
    ++counter_;
    return inner_.complete(prompt, request);
  }

 private:
  QueryGenerator& inner_;
  std::atomic<std::size_t>& counter_;
  std::counting_semaphore<>& in_flight_;
};

}  // namespace

QueryService::QueryService(std::shared_ptr<QueryGenerator> generator,
                           std::shared_ptr<JsonlCache> cache)
    : QueryService(std::move(generator), std::move(cache), Options{}) {}

QueryService::QueryService(std::shared_ptr<QueryGenerator> generator,
                           std::shared_ptr<JsonlCache> cache, Options options)
    : generator_(std::move(generator)),
      cache_(std::move(cache)),
      options_(std::move(options)),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(options_.max_in_flight, 1))) {
  if (!generator_) throw Error(Errc::InvalidArgument, "query generator is null");
}

QueryGenRequest QueryService::make_request(const std::string& document_text,
                                           int num_questions) const {
  QueryGenRequest req;
  req.document_text = document_text;
  req.num_questions = num_questions;
  req.temperature = options_.temperature;
  req.frequency_penalty = options_.frequency_penalty;
  req.seed = options_.seed;
  return req;
}

std::string QueryService::key_for(const QueryGenRequest& r) const {
  nlohmann::json request = {{"kind", "queries"},
                            {"generator", generator_->generator_id()},
                            {"model", generator_->model_id()},
                            {"document", r.document_text},
                            {"n", r.num_questions},
                            {"temperature", r.temperature},
                            {"frequency_penalty", r.frequency_penalty}};
  request["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
  return cache_key(request);
}

bool QueryService::is_cached(const std::string& document_text, int num_questions) const {
  return cache_ && cache_->get(key_for(make_request(document_text, num_questions))).has_value();
}

PredictedQueries QueryService::generate(const std::string& document_id,
                                        const std::string& document_text, int num_questions) {
  const QueryGenRequest req = make_request(document_text, num_questions);
  const std::string key = cache_ ? key_for(req) : std::string();
  if (cache_) {
    if (auto hit = cache_->get(key)) {
      PredictedQueries out;
      out.document_id = document_id;
      out.generator_id = hit->at("generator_id").get<std::string>();
      out.queries = hit->at("queries").get<std::vector<std::string>>();
      const auto wanted = static_cast<std::size_t>(num_questions);
      out.shortfall = out.queries.size() < wanted ? wanted - out.queries.size() : 0;
      return out;
    }
  }
  CountingGenerator counted(*generator_, generator_calls_, in_flight_);
  PredictedQueries out = generate_queries(counted, req, document_id, options_.retry);
  if (cache_) {
    cache_->put(key, {{"document_id", out.document_id},
                      {"generator_id", out.generator_id},
                      {"queries", out.queries}});
  }
  return out;
}

}  // namespace qae::providers
