#pragma once

#include <cstddef>
#include <cstdint>

#include "qae/eval/dataset.hpp"

namespace qae::eval {

/// Query indices at or above this offset are never produced by the stub query
/// generator, so they serve as held-out user queries.
inline constexpr std::uint64_t kHeldOutQueryOffset = 1'000'000;

/// Corpus for the stub embedder's geometric mode: documents `d<i>` with text
/// `doc:d<i>`, and per document `heldout_per_doc` queries drawn from the same
/// cluster as its predicted queries, each judged relevant (1) to that document
/// only.
Dataset make_geometric_dataset(std::size_t num_documents, std::size_t heldout_per_doc = 1);

/// Small text corpus where every query repeats its document's text verbatim,
/// so any deterministic embedder ranks the right document first under Vanilla.
Dataset make_identity_dataset(std::size_t num_documents = 5);

}  // namespace qae::eval
