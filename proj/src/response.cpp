#include "dbtrail/response.hpp"

#include <cstdio>

namespace dbtrail {

std::string row_url(const RowKey& key) { return "/row/" + key.to_path(); }

nlohmann::ordered_json search_response_json(const SearchResult& result, bool include_timings) {
    using json = nlohmann::ordered_json;
    json out;
    out["query"] = result.query.raw;
    out["normalized_query"] = result.query.to_string();
    json trails = json::array();
    for (const auto& rt : result.trails) {
        json nodes = json::array();
        for (const auto& n : rt.nodes) {
            json jn;
            jn["node_id"] = n.node.value;
            jn["table"] = n.key.table;
            jn["key"] = n.key.pk_values;
            jn["title"] = n.summary.title;
            jn["snippet"] = n.summary.snippet;
            jn["matched_terms"] = n.matched_terms;
            jn["score"] = n.score;
            jn["link"] = row_url(n.key);
            nodes.push_back(std::move(jn));
        }
        json jt;
        jt["nodes"] = std::move(nodes);
        jt["trail_score"] = rt.trail.score;
        jt["terms_matched"] = rt.trail.terms_matched();
        trails.push_back(std::move(jt));
    }
    out["trails"] = std::move(trails);
    out["total_trails"] = result.total_trails;
    if (include_timings) {
        out["timings"] = json{{"score", result.timings.score_ms},
                              {"trail", result.timings.trail_ms},
                              {"filter", result.timings.filter_ms},
                              {"summarize", result.timings.summarize_ms}};
        out["total_ms"] = result.total_ms;
    }
    return out;
}

std::string render_search_text(const SearchResult& result) {
    std::string out;
    if (result.trails.empty()) return "0 trails\n";
    for (std::size_t i = 0; i < result.trails.size(); ++i) {
        const auto& rt = result.trails[i];
        char head[96];
        std::snprintf(head, sizeof head, "%2zu. [%.4f, %d term%s] ", i + 1, rt.trail.score,
                      rt.trail.terms_matched(), rt.trail.terms_matched() == 1 ? "" : "s");
        out += head;
        for (std::size_t j = 0; j < rt.nodes.size(); ++j) {
            const auto& n = rt.nodes[j];
            if (j) out += " → ";
            out += n.key.table + ":" + n.summary.title;
            if (!n.matched_terms.empty()) {
                out += " {";
                for (std::size_t k = 0; k < n.matched_terms.size(); ++k) {
                    if (k) out += ",";
                    out += n.matched_terms[k];
                }
                out += "}";
            }
        }
        out += "\n";
    }
    return out;
}

} // namespace dbtrail
