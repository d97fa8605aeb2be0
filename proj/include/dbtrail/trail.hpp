#pragma once

#include "dbtrail/doc_store.hpp"
#include "dbtrail/link_graph.hpp"
#include "dbtrail/node_id.hpp"
#include "dbtrail/node_scoring.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dbtrail {

/// A sequence of linked nodes plus the query view of each node.
struct Trail {
    std::vector<NodeId> nodes;
    std::vector<double> node_scores;
    std::vector<std::uint64_t> node_terms;
    double score = 0.0; ///< ranking score (see rank_trails)

    std::size_t size() const { return nodes.size(); }
    std::uint64_t terms_union() const;
    /// Number of distinct query terms matched anywhere in the trail.
    int terms_matched() const;
    /// Largest number of query terms matched by a single node.
    int max_node_terms() const;
};

/// Materializes per-node scores and terms for `nodes` from `scores`.
Trail make_trail(std::vector<NodeId> nodes, const NodeScores& scores);

struct TrailScoreParams {
    double length_constant = 1.0;     ///< c in sum / (len + c); > 0
    double position_discount = 0.75; ///< in (0, 1]
    double repetition_discount = 0.25; ///< in (0, 1)

    void validate() const;
};

/// Sum of the scores of distinct nodes divided by (length + c).
double score_trail_mu1(const Trail& trail, const TrailScoreParams& params);

/// sum_i position_discount^i * repetition_discount^(earlier occurrences of node i) * score_i
double score_trail_mu2(const Trail& trail, const TrailScoreParams& params);

/// Lexicographic descending order on (terms matched, max node terms, score).
/// Returns true when `a` ranks strictly ahead of `b`.
bool ranks_before(const Trail& a, const Trail& b);

/// Stable sort by ranks_before.
void rank_trails(std::vector<Trail>& trails);

/// Redundancy filter over a set of candidate trails.
///
/// Per trail: leading and trailing zero-score nodes are trimmed; a node whose
/// virtual document is byte-identical to an earlier node in the same trail is
/// removed, splicing its neighbours together when they are graph-adjacent and
/// truncating otherwise (an edit that would lose query-term coverage is not
/// applied); then ends are trimmed again. Trails are rescored with mu1 and
/// ranked, and any trail whose node sequence occurs contiguously (forwards or
/// reversed) inside a higher-ranked trail is dropped. Empty trails are removed.
std::vector<Trail> filter_trails(std::vector<Trail> trails, const LinkGraph& graph, const DocStore& docs,
                                 const TrailScoreParams& params);

} // namespace dbtrail
