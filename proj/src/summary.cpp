#include "dbtrail/summary.hpp"

#include "dbtrail/util.hpp"
#include "dbtrail/vdoc.hpp"

#include <algorithm>

namespace dbtrail {

namespace {

struct Item {
    std::string text;
    bool hit = false;
};

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\n' && s[i] != '\r') ++i;
        if (i > start) words.emplace_back(s.substr(start, i - start));
    }
    return words;
}

} // namespace

Summary summarize_node(NodeId node, const Query& query, const IndexBundle& bundle, const TitleColumns& titles) {
    const RowKey& key = bundle.registry.resolve_node(node);
    const auto& entry = bundle.docs.get(node);
    const std::string table = to_lower(key.table);

    Summary s;
    if (auto it = titles.find(key.table); it != titles.end()) {
        for (const auto& col : it->second) {
            std::string attr = to_upper(col);
            auto el = std::find_if(entry.elements.begin(), entry.elements.end(),
                                   [&](const auto& e) { return e.attribute == attr; });
            if (el != entry.elements.end()) {
                s.title = el->text;
                break;
            }
        }
    }
    if (s.title.empty()) s.title = key.to_path();

    auto word_hits = [&](const std::string& attr_lower, const std::string& word) {
        auto toks = tokenize_words(word);
        for (const auto& t : query.terms) {
            if (t.modifier == QueryTerm::Modifier::Excluded) continue;
            if (t.kind == QueryTerm::Kind::Keyword &&
                std::find(toks.begin(), toks.end(), t.text) != toks.end()) {
                return true;
            }
            if (t.kind == QueryTerm::Kind::Pair && (t.attribute == attr_lower || t.attribute == table) &&
                std::find(toks.begin(), toks.end(), t.text) != toks.end()) {
                return true;
            }
        }
        return false;
    };

    std::vector<Item> items;
    for (const auto& el : entry.elements) {
        std::string attr_lower = to_lower(el.attribute);
        bool marker_hit = false;
        for (const auto& tok : tokenize_words(el.attribute)) {
            for (const auto& t : query.terms) {
                if (t.modifier != QueryTerm::Modifier::Excluded && t.kind == QueryTerm::Kind::Keyword &&
                    t.text == tok) {
                    marker_hit = true;
                }
            }
        }
        items.push_back({el.attribute + ":", marker_hit});
        for (auto& w : split_words(el.text)) {
            bool hit = word_hits(attr_lower, w);
            items.push_back({std::move(w), hit});
        }
    }
    if (items.empty()) return s;

    std::size_t first_hit = 0;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].hit) {
            first_hit = i;
            break;
        }
    }
    std::size_t start = first_hit > kSnippetTokens / 2 ? first_hit - kSnippetTokens / 2 : 0;
    if (start + kSnippetTokens > items.size()) start = items.size() > kSnippetTokens ? items.size() - kSnippetTokens : 0;
    std::size_t end = std::min(items.size(), start + kSnippetTokens);

    for (std::size_t i = start; i < end; ++i) {
        if (i > start) s.snippet.push_back(' ');
        if (items[i].hit) s.snippet += "**" + items[i].text + "**";
        else s.snippet += items[i].text;
    }
    return s;
}

} // namespace dbtrail
