#include <array>
#include <cctype>
#include <string>
#include <unordered_set>
#include <vector>

#include "qae/core/rng.hpp"
#include "qae/providers/query_generation.hpp"
#include "qae/providers/stub_embedder.hpp"

namespace qae::providers {
namespace {

constexpr std::array<std::string_view, 6> kTemplates = {
    "Who is associated with {a} and {b}?",
    "What does the text say about {a}?",
    "When does {a} come up in connection with {b}?",
    "Where is {a} discussed?",
    "Why is {a} important for {b}?",
    "How does {a} relate to {b}?",
};

std::vector<std::string> content_words(std::string_view text) {
  std::vector<std::string> words;
  std::unordered_set<std::string> seen;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 3 && seen.insert(current).second) words.push_back(current);
    current.clear();
  };
  for (unsigned char c : text) {
    if (std::isalnum(c)) current.push_back(static_cast<char>(std::tolower(c)));
    else flush();
  }
  flush();
  if (words.empty()) words.push_back(std::string(text.substr(0, 32)));
  return words;
}

std::string fill(std::string_view tmpl, const std::string& a, const std::string& b) {
  std::string out(tmpl);
  if (auto p = out.find("{a}"); p != std::string::npos) out.replace(p, 3, a);
  if (auto p = out.find("{b}"); p != std::string::npos) out.replace(p, 3, b);
  return out;
}

}  // namespace

std::string StubQueryGenerator::complete(const std::string& /*prompt*/,
                                         const QueryGenRequest& request) {
  ++calls_;
  const std::string_view doc = request.document_text;
  std::vector<std::string> questions;

  if (doc.starts_with("doc:") && doc.size() > 4 &&
      doc.find_first_of(" \n\t") == std::string_view::npos) {
    const auto id = doc.substr(4);
    for (int j = 0; j < request.num_questions; ++j) {
      questions.push_back(StubEmbedder::query_text(id, static_cast<std::uint64_t>(j)));
    }
  } else {
    Rng rng(derive_seed(derive_seed(seed_, "stub/generator"), fnv1a64(doc)));
    const auto words = content_words(doc);
    std::unordered_set<std::string> used;
    for (int i = 0; i < request.num_questions; ++i) {
      const auto tmpl = kTemplates[static_cast<std::size_t>(i) % kTemplates.size()];
      std::string q;
      for (int attempt = 0; attempt < 8; ++attempt) {
        q = fill(tmpl, words[rng.below(words.size())], words[rng.below(words.size())]);
        if (!used.contains(q)) break;
      }
      if (used.contains(q)) q += " (" + std::to_string(i + 1) + ")";
      used.insert(q);
      questions.push_back(std::move(q));
    }
  }

  nlohmann::json array = nlohmann::json::array();
  for (std::size_t i = 0; i < questions.size(); ++i) {
    array.push_back(std::to_string(i + 1) + ". " + questions[i]);
  }
  return "```json\n" + array.dump(4) + "\n```";
}

}  // namespace qae::providers
