#include "dbtrail/trail.hpp"

#include "dbtrail/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace dbtrail {

std::uint64_t Trail::terms_union() const {
    std::uint64_t u = 0;
    for (auto t : node_terms) u |= t;
    return u;
}

int Trail::terms_matched() const { return std::popcount(terms_union()); }

int Trail::max_node_terms() const {
    int best = 0;
    for (auto t : node_terms) best = std::max(best, std::popcount(t));
    return best;
}

Trail make_trail(std::vector<NodeId> nodes, const NodeScores& scores) {
    Trail t;
    t.nodes = std::move(nodes);
    for (NodeId n : t.nodes) {
        NodeHit h = scores.hit(n);
        t.node_scores.push_back(h.score);
        t.node_terms.push_back(h.terms);
    }
    return t;
}

void TrailScoreParams::validate() const {
    if (!(length_constant > 0.0)) throw ValidationError("trail score: length constant must be > 0");
    if (!(position_discount > 0.0 && position_discount <= 1.0)) {
        throw ValidationError("trail score: position discount must lie in (0,1]");
    }
    if (!(repetition_discount > 0.0 && repetition_discount < 1.0)) {
        throw ValidationError("trail score: repetition discount must lie in (0,1)");
    }
}

double score_trail_mu1(const Trail& trail, const TrailScoreParams& params) {
    std::unordered_set<NodeId> seen;
    double sum = 0.0;
    for (std::size_t i = 0; i < trail.nodes.size(); ++i) {
        if (seen.insert(trail.nodes[i]).second) sum += trail.node_scores[i];
    }
    return sum / (static_cast<double>(trail.nodes.size()) + params.length_constant);
}

double score_trail_mu2(const Trail& trail, const TrailScoreParams& params) {
    std::unordered_map<NodeId, int> occurrences;
    double sum = 0.0;
    double position_weight = 1.0;
    for (std::size_t i = 0; i < trail.nodes.size(); ++i) {
        int& seen = occurrences[trail.nodes[i]];
        sum += position_weight * std::pow(params.repetition_discount, seen) * trail.node_scores[i];
        ++seen;
        position_weight *= params.position_discount;
    }
    return sum;
}

bool ranks_before(const Trail& a, const Trail& b) {
    int ta = a.terms_matched(), tb = b.terms_matched();
    if (ta != tb) return ta > tb;
    int ma = a.max_node_terms(), mb = b.max_node_terms();
    if (ma != mb) return ma > mb;
    return a.score > b.score;
}

void rank_trails(std::vector<Trail>& trails) {
    std::stable_sort(trails.begin(), trails.end(), ranks_before);
}

namespace {

void erase_at(Trail& t, std::size_t first, std::size_t last) {
    auto f = static_cast<std::ptrdiff_t>(first), l = static_cast<std::ptrdiff_t>(last);
    t.nodes.erase(t.nodes.begin() + f, t.nodes.begin() + l);
    t.node_scores.erase(t.node_scores.begin() + f, t.node_scores.begin() + l);
    t.node_terms.erase(t.node_terms.begin() + f, t.node_terms.begin() + l);
}

void trim_zero_ends(Trail& t) {
    std::size_t lead = 0;
    while (lead < t.size() && t.node_scores[lead] <= 0.0) ++lead;
    erase_at(t, 0, lead);
    std::size_t keep = t.size();
    while (keep > 0 && t.node_scores[keep - 1] <= 0.0) --keep;
    erase_at(t, keep, t.size());
}

bool adjacent(const LinkGraph& graph, NodeId a, NodeId b) {
    auto nb = graph.neighbors(a);
    return std::binary_search(nb.begin(), nb.end(), b);
}

void drop_duplicate_content(Trail& t, const LinkGraph& graph, const DocStore& docs) {
    std::size_t i = 1;
    while (i < t.size()) {
        std::uint64_t digest = docs.get(t.nodes[i]).digest;
        bool duplicate = false;
        for (std::size_t j = 0; j < i && !duplicate; ++j) duplicate = docs.get(t.nodes[j]).digest == digest;
        if (!duplicate) {
            ++i;
            continue;
        }
        Trail edited = t;
        if (i + 1 < t.size() && adjacent(graph, t.nodes[i - 1], t.nodes[i + 1])) {
            erase_at(edited, i, i + 1);
        } else {
            erase_at(edited, i, t.size());
        }
        if (edited.terms_matched() < t.terms_matched() || edited.max_node_terms() < t.max_node_terms()) {
            ++i;
            continue;
        }
        t = std::move(edited);
    }
}

bool contains_contiguous(const std::vector<NodeId>& haystack, const std::vector<NodeId>& needle) {
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end() ||
           std::search(haystack.begin(), haystack.end(), needle.rbegin(), needle.rend()) != haystack.end();
}

} // namespace

std::vector<Trail> filter_trails(std::vector<Trail> trails, const LinkGraph& graph, const DocStore& docs,
                                 const TrailScoreParams& params) {
    std::vector<Trail> cleaned;
    cleaned.reserve(trails.size());
    for (auto& t : trails) {
        trim_zero_ends(t);
        drop_duplicate_content(t, graph, docs);
        trim_zero_ends(t);
        if (t.nodes.empty()) continue;
        t.score = score_trail_mu1(t, params);
        cleaned.push_back(std::move(t));
    }
    rank_trails(cleaned);
    std::vector<Trail> kept;
    for (auto& t : cleaned) {
        bool redundant = std::any_of(kept.begin(), kept.end(),
                                     [&](const Trail& k) { return contains_contiguous(k.nodes, t.nodes); });
        if (!redundant) kept.push_back(std::move(t));
    }
    return kept;
}

} // namespace dbtrail
