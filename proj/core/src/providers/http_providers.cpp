#include "qae/providers/http_providers.hpp"

#include <cstdlib>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "qae/core/error.hpp"

namespace qae::providers {
namespace {

struct SplitUrl {
  std::string scheme_host_port;
  std::string path_prefix;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::InvalidArgument, "endpoint must be an http(s) URL: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  out.scheme_host_port = url.substr(0, path_start);
  out.path_prefix = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!out.path_prefix.empty() && out.path_prefix.back() == '/') out.path_prefix.pop_back();
  return out;
}

nlohmann::json post_json(const std::string& endpoint, const std::string& path,
                         const nlohmann::json& body, const httplib::Headers& headers,
                         std::chrono::seconds timeout) {
  const SplitUrl url = split_url(endpoint);
  httplib::Client client(url.scheme_host_port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  auto res = client.Post(url.path_prefix + path, headers, body.dump(), "application/json");
  if (!res) {
    throw Error(Errc::ProviderUnavailable,
                endpoint + path + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 429 || res->status >= 500) {
    throw Error(Errc::ProviderUnavailable,
                endpoint + path + ": HTTP " + std::to_string(res->status));
  }
  if (res->status < 200 || res->status >= 300) {
    throw Error(Errc::MalformedResponse, endpoint + path + ": HTTP " +
                                             std::to_string(res->status) + " " + res->body);
  }
  auto parsed = nlohmann::json::parse(res->body, nullptr, false);
  if (parsed.is_discarded()) {
    throw Error(Errc::MalformedResponse, endpoint + path + ": response is not JSON");
  }
  return parsed;
}

}  // namespace

HttpEmbeddingProvider::HttpEmbeddingProvider(std::string endpoint, std::string model,
                                             std::chrono::seconds timeout)
    : endpoint_(std::move(endpoint)), model_(std::move(model)), timeout_(timeout) {
  split_url(endpoint_);
}

std::vector<Embedding> HttpEmbeddingProvider::embed_batch(std::span<const std::string> texts) {
  nlohmann::json body = {{"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  if (!model_.empty()) body["model"] = model_;
  const auto reply = post_json(endpoint_, "/embed", body, {}, timeout_);
  if (!reply.is_object() || !reply.contains("embeddings") || !reply["embeddings"].is_array()) {
    throw Error(Errc::MalformedResponse, "response lacks an \"embeddings\" array");
  }
  std::vector<Embedding> out;
  try {
    for (const auto& row : reply["embeddings"]) out.emplace_back(row.get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedResponse, std::string("bad embedding row: ") + e.what());
  } catch (const Error& e) {
    throw Error(Errc::MalformedResponse, e.what());
  }
  return out;
}

HttpChatQueryGenerator::HttpChatQueryGenerator(std::string endpoint, std::string model,
                                               std::string api_key_env,
                                               std::chrono::seconds timeout)
    : endpoint_(std::move(endpoint)),
      model_(std::move(model)),
      api_key_env_(std::move(api_key_env)),
      timeout_(timeout) {
  split_url(endpoint_);
}

std::string HttpChatQueryGenerator::complete(const std::string& prompt,
                                             const QueryGenRequest& request) {
  nlohmann::json body = {
      {"model", model_},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"temperature", request.temperature},
      {"frequency_penalty", request.frequency_penalty},
  };
  if (request.seed) body["seed"] = *request.seed;

  httplib::Headers headers;
  if (!api_key_env_.empty()) {
    if (const char* key = std::getenv(api_key_env_.c_str()); key && *key) {
      headers.emplace("Authorization", std::string("Bearer ") + key);
    }
  }
  const auto reply = post_json(endpoint_, "/chat/completions", body, headers, timeout_);
  try {
    return reply.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedResponse, std::string("chat completion reply: ") + e.what());
  }
}

}  // namespace qae::providers
