#include "dbtrail/query.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"
#include "dbtrail/vdoc.hpp"

#include <algorithm>
#include <cctype>

namespace dbtrail {

std::string QueryTerm::to_string() const {
    std::string out;
    if (modifier == Modifier::Required) out.push_back('+');
    if (modifier == Modifier::Excluded) out.push_back('-');
    switch (kind) {
    case Kind::Keyword: out += text; break;
    case Kind::Pair: out += attribute + "=" + text; break;
    case Kind::Link: out += "link:" + text; break;
    }
    return out;
}

std::uint64_t Query::required_mask() const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].modifier == QueryTerm::Modifier::Required) m |= std::uint64_t{1} << i;
    }
    return m;
}

std::uint64_t Query::excluded_mask() const {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (terms[i].modifier == QueryTerm::Modifier::Excluded) m |= std::uint64_t{1} << i;
    }
    return m;
}

std::string Query::to_string() const {
    std::string out;
    for (const auto& t : terms) {
        if (!out.empty()) out.push_back(' ');
        out += t.to_string();
    }
    return out;
}

Query parse_query(std::string_view text) {
    Query q;
    q.raw = std::string(text);
    auto add = [&q](QueryTerm term) {
        if (std::find(q.terms.begin(), q.terms.end(), term) == q.terms.end()) q.terms.push_back(std::move(term));
    };

    std::size_t i = 0;
    bool any_clause = false;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::string_view clause = text.substr(start, i - start);
        if (clause.empty()) continue;
        any_clause = true;

        QueryTerm::Modifier mod = QueryTerm::Modifier::Default;
        if (clause.front() == '+' || clause.front() == '-') {
            mod = clause.front() == '+' ? QueryTerm::Modifier::Required : QueryTerm::Modifier::Excluded;
            clause.remove_prefix(1);
            if (clause.empty()) throw ParseError("query: dangling '" + std::string(1, text[start]) + "'");
        }

        if (clause.size() >= 5 && iequals(clause.substr(0, 5), "link:")) {
            std::string_view target = clause.substr(5);
            if (target.starts_with("/row/")) target.remove_prefix(5);
            while (target.starts_with("/")) target.remove_prefix(1);
            if (target.empty()) throw ParseError("query: link: needs a row reference");
            if (mod == QueryTerm::Modifier::Excluded) throw ParseError("query: link terms cannot be excluded");
            RowKey::from_path(target); // validates escapes
            add(QueryTerm{QueryTerm::Kind::Link, mod, "", std::string(target)});
            continue;
        }

        if (auto eq = clause.find('='); eq != std::string_view::npos) {
            std::string_view attr = clause.substr(0, eq);
            std::string_view value = clause.substr(eq + 1);
            if (attr.empty() || value.empty()) {
                throw ParseError("query: malformed pair '" + std::string(clause) + "'");
            }
            auto tokens = tokenize_words(value);
            if (tokens.empty()) throw ParseError("query: malformed pair '" + std::string(clause) + "'");
            std::string attribute = to_lower(attr);
            for (auto& tok : tokens) add(QueryTerm{QueryTerm::Kind::Pair, mod, attribute, std::move(tok)});
            continue;
        }

        for (auto& tok : tokenize_words(clause)) add(QueryTerm{QueryTerm::Kind::Keyword, mod, "", std::move(tok)});
    }

    if (!any_clause || q.terms.empty()) throw ParseError("query: empty query");
    if (q.terms.size() > Query::kMaxTerms) throw ParseError("query: too many terms");
    bool searchable = std::any_of(q.terms.begin(), q.terms.end(), [](const QueryTerm& t) {
        return t.modifier != QueryTerm::Modifier::Excluded;
    });
    if (!searchable) throw ParseError("query: at least one term must not be excluded");
    return q;
}

std::vector<NodeId> link_term_nodes(const QueryTerm& term, const IndexBundle& bundle) {
    if (term.kind != QueryTerm::Kind::Link) return {};
    RowKey key = RowKey::from_path(term.text);
    auto target = bundle.registry.find(key);
    if (!target && key.pk_values.size() > 1) {
        // Single-column keys may contain unescaped '/' (DBLP keys do).
        std::string joined;
        for (const auto& v : key.pk_values) joined += (joined.empty() ? "" : "/") + v;
        target = bundle.registry.find(RowKey{key.table, {joined}});
    }
    if (!target) return {};
    auto refs = bundle.graph.backlinks(*target);
    return {refs.begin(), refs.end()};
}

std::span<const Posting> term_postings(const QueryTerm& term, const InvertedIndex& index) {
    switch (term.kind) {
    case QueryTerm::Kind::Keyword: return index.postings_for_term(term.text);
    case QueryTerm::Kind::Pair: return index.postings_for_pair(term.attribute, term.text);
    case QueryTerm::Kind::Link: break;
    }
    return {};
}

MatchInfo node_matches(const Query& query, NodeId node, const IndexBundle& bundle) {
    if (!bundle.registry.contains(node)) throw NotFoundError("unknown node " + std::to_string(node.value));
    MatchInfo info;
    for (std::size_t i = 0; i < query.terms.size(); ++i) {
        const QueryTerm& t = query.terms[i];
        bool hit;
        if (t.kind == QueryTerm::Kind::Link) {
            auto nodes = link_term_nodes(t, bundle);
            hit = std::binary_search(nodes.begin(), nodes.end(), node);
        } else {
            hit = InvertedIndex::find(term_postings(t, bundle.index), node).has_value();
        }
        if (!hit) continue;
        if (t.modifier == QueryTerm::Modifier::Excluded) info.admissible = false;
        else info.matched_terms |= std::uint64_t{1} << i;
    }
    return info;
}

} // namespace dbtrail
