#pragma once

#include "dbtrail/engine.hpp"

#include <json.hpp>

#include <string>

namespace dbtrail {

/// "/row/<table>/<pk...>" for a row key.
std::string row_url(const RowKey& key);

/// SearchResponse wire form:
/// {"query", "normalized_query", "trails": [{"nodes": [{node_id, table, key, title, snippet,
///  matched_terms, score, link}], "trail_score", "terms_matched"}], "total_trails",
///  "timings": {score, trail, filter, summarize}, "total_ms"}
nlohmann::ordered_json search_response_json(const SearchResult& result, bool include_timings = true);

/// One line per trail: rank, score, term count, then titles joined by " → ".
std::string render_search_text(const SearchResult& result);

} // namespace dbtrail
