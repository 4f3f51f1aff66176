#include "qae/eval/synthetic.hpp"

#include <array>
#include <cstdio>
#include <string>

#include "qae/core/error.hpp"
#include "qae/providers/stub_embedder.hpp"

namespace qae::eval {
namespace {

std::string padded(char prefix, std::size_t i, std::size_t total) {
  const int width = static_cast<int>(std::to_string(total > 0 ? total - 1 : 0).size());
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

Dataset make_geometric_dataset(std::size_t num_documents, std::size_t heldout_per_doc) {
  if (num_documents == 0) throw Error(Errc::InvalidArgument, "need at least one document");
  if (heldout_per_doc == 0) throw Error(Errc::InvalidArgument, "need at least one query per document");
  Dataset ds;
  for (std::size_t i = 0; i < num_documents; ++i) {
    const std::string id = padded('d', i, num_documents);
    ds.corpus.push_back({id, "", providers::StubEmbedder::document_text(id), "synthetic:geometric"});
    for (std::size_t h = 0; h < heldout_per_doc; ++h) {
      const std::string qid = "q" + id.substr(1) + "_" + std::to_string(h);
      ds.queries.push_back({qid, providers::StubEmbedder::query_text(id, kHeldOutQueryOffset + h)});
      ds.qrels[qid][id] = 1;
    }
  }
  return ds;
}

Dataset make_identity_dataset(std::size_t num_documents) {
  static constexpr std::array<const char*, 8> kTopics = {
      "solar panels convert sunlight into electricity using photovoltaic cells",
      "the mitochondria produces most of the chemical energy in a cell",
      "glaciers carve valleys as they slowly move downhill under gravity",
      "compilers translate source code into machine instructions",
      "bees communicate the location of flowers through a waggle dance",
      "tides are caused by the gravitational pull of the moon and sun",
      "vaccines train the immune system to recognize specific pathogens",
      "volcanic eruptions release ash and gases into the atmosphere"};
  if (num_documents == 0) throw Error(Errc::InvalidArgument, "need at least one document");
  Dataset ds;
  for (std::size_t i = 0; i < num_documents; ++i) {
    const std::string id = padded('d', i, num_documents);
    std::string text = kTopics[i % kTopics.size()];
    if (i >= kTopics.size()) text += " (variant " + std::to_string(i / kTopics.size()) + ")";
    ds.corpus.push_back({id, "", text, "synthetic:identity"});
    const std::string qid = "q" + id.substr(1);
    ds.queries.push_back({qid, text});
    ds.qrels[qid][id] = 1;
  }
  return ds;
}

}  // namespace qae::eval
