#pragma once

#include "dbtrail/index_store.hpp"
#include "dbtrail/node_id.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail {

struct QueryTerm {
    enum class Kind { Keyword, Pair, Link };
    enum class Modifier { Default, Required, Excluded };

    Kind kind = Kind::Keyword;
    Modifier modifier = Modifier::Default;
    std::string attribute; ///< pair only, lowercased
    std::string text;      ///< keyword token, pair value token, or link target path

    bool operator==(const QueryTerm&) const = default;

    /// Normalized clause form, e.g. "+computers", "-type=phdthesis", "link:author/7".
    std::string to_string() const;
};

/// Parsed query. Terms are deduplicated and capped at 64 so that a set of
/// matched terms fits in a bitmask.
struct Query {
    std::vector<QueryTerm> terms;
    std::string raw;

    static constexpr std::size_t kMaxTerms = 64;

    std::uint64_t required_mask() const;
    std::uint64_t excluded_mask() const;
    /// Normalized terms joined by single spaces; parse_query(to_string()) yields the same terms.
    std::string to_string() const;
};

/// Grammar (whitespace-separated clauses):
///   query  := clause+
///   clause := ["+" | "-"] (pair | link | word)
///   pair   := word "=" word
///   link   := "link:" noderef        noderef = table/pk[/pk...], percent-encoded
/// Words and pair values go through the index tokenizer, so "b-tree" becomes
/// the two keywords "b" and "tree". Throws ParseError on an empty query, a
/// malformed pair ("=v", "a="), an excluded link, or a query whose terms are
/// all excluded.
Query parse_query(std::string_view text);

struct MatchInfo {
    std::uint64_t matched_terms = 0; ///< bit i set when non-excluded term i matches
    bool admissible = true;          ///< false when any excluded term matches

    bool operator==(const MatchInfo&) const = default;
};

/// Nodes a link term matches: the rows that reference its target. Empty when
/// the target row is unknown.
std::vector<NodeId> link_term_nodes(const QueryTerm& term, const IndexBundle& bundle);

/// Posting list behind a keyword or pair term (empty span for link terms).
std::span<const Posting> term_postings(const QueryTerm& term, const InvertedIndex& index);

/// Per-node evaluation by direct posting lookups. Throws NotFoundError for an unknown node.
MatchInfo node_matches(const Query& query, NodeId node, const IndexBundle& bundle);

} // namespace dbtrail
