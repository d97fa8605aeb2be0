#pragma once

#include "dbtrail/index_store.hpp"
#include "dbtrail/node_id.hpp"
#include "dbtrail/query.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace dbtrail {

struct Summary {
    std::string title;
    std::string snippet;
};

/// Per-table list of columns to try, in order, for a node's display title.
using TitleColumns = std::map<std::string, std::vector<std::string>>;

inline constexpr std::size_t kSnippetTokens = 24;

/// Builds a title and a query-biased snippet from the index-side document
/// copy. The snippet is a window of up to 24 items (attribute markers such as
/// "TITLE:" plus the words of each value) centred on the earliest item that
/// matches a non-excluded query term; matching items are wrapped in ** **.
/// Without a match the window starts at the first item.
Summary summarize_node(NodeId node, const Query& query, const IndexBundle& bundle, const TitleColumns& titles);

} // namespace dbtrail
