#pragma once

#include "dbtrail/index_store.hpp"
#include "dbtrail/node_id.hpp"
#include "dbtrail/query.hpp"

#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace dbtrail {

/// Query-specific view of one node.
struct NodeHit {
    double score = 0.0;         ///< sum of matched term weights; 0 when inadmissible
    std::uint64_t terms = 0;    ///< matched non-excluded terms
    bool admissible = true;     ///< false if the node matches an excluded term

    bool operator==(const NodeHit&) const = default;
};

/// Sparse node -> NodeHit map; nodes not present score 0 and are admissible.
class NodeScores {
public:
    NodeHit hit(NodeId node) const {
        auto it = hits_.find(node);
        return it == hits_.end() ? NodeHit{} : it->second;
    }
    void set(NodeId node, NodeHit h) { hits_[node] = h; }
    const std::unordered_map<NodeId, NodeHit>& entries() const { return hits_; }

private:
    std::unordered_map<NodeId, NodeHit> hits_;
};

/// Scores every node that appears in a term's postings. Keyword and pair
/// terms contribute their posting weight, link terms contribute 1.0.
NodeScores score_nodes(const Query& query, const IndexBundle& bundle);

/// Top-K admissible nodes with a positive score, by score * (1 + potential
/// gain), ties broken by smaller NodeId.
std::vector<NodeId> select_starting_points(const NodeScores& scores,
                                           const std::vector<double>& potential_gain,
                                           std::size_t k);

} // namespace dbtrail
