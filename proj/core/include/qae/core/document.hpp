#pragma once

#include <string>

namespace qae {

/// One corpus document, the unit of indexing.
struct DocumentRecord {
  std::string id;
  std::string title;
  std::string text;
  std::string provenance;

  /// Text handed to the embedder and the query generator: the title, a newline,
  /// then the body; just the body when there is no title.
  std::string full_text() const { return title.empty() ? text : title + "\n" + text; }

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

}  // namespace qae
