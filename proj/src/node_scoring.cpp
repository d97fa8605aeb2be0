#include "dbtrail/node_scoring.hpp"

#include <algorithm>

namespace dbtrail {

NodeScores score_nodes(const Query& query, const IndexBundle& bundle) {
    std::unordered_map<NodeId, NodeHit> hits;
    for (std::size_t i = 0; i < query.terms.size(); ++i) {
        const QueryTerm& t = query.terms[i];
        const bool excluded = t.modifier == QueryTerm::Modifier::Excluded;
        const std::uint64_t bit = std::uint64_t{1} << i;
        auto apply = [&](NodeId node, double weight) {
            NodeHit& h = hits[node];
            if (excluded) {
                h.admissible = false;
            } else {
                h.score += weight;
                h.terms |= bit;
            }
        };
        if (t.kind == QueryTerm::Kind::Link) {
            for (NodeId n : link_term_nodes(t, bundle)) apply(n, 1.0);
        } else {
            for (const Posting& p : term_postings(t, bundle.index)) apply(p.node, p.weight);
        }
    }
    NodeScores scores;
    for (auto& [node, h] : hits) {
        if (!h.admissible) h = NodeHit{0.0, 0, false};
        scores.set(node, h);
    }
    return scores;
}

std::vector<NodeId> select_starting_points(const NodeScores& scores,
                                           const std::vector<double>& potential_gain,
                                           std::size_t k) {
    std::vector<std::pair<double, NodeId>> ranked;
    for (const auto& [node, h] : scores.entries()) {
        if (!h.admissible || h.score <= 0.0) continue;
        double pg = node.index() < potential_gain.size() ? potential_gain[node.index()] : 0.0;
        ranked.emplace_back(h.score * (1.0 + pg), node);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) out.push_back(ranked[i].second);
    return out;
}

} // namespace dbtrail
