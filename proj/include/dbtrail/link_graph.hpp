#pragma once

#include "dbtrail/dataset.hpp"
#include "dbtrail/index.hpp"
#include "dbtrail/node_id.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail {

/// One matched foreign-key value: the row at `from` references the row at `to`.
struct FkEdge {
    NodeId from;
    NodeId to;

    auto operator<=>(const FkEdge&) const = default;
};

/// Undirected navigation graph over rows, with FK direction kept for backlinks.
class LinkGraph {
public:
    LinkGraph() = default;
    /// Self-loops and duplicate edges are dropped. Throws ValidationError for
    /// an endpoint >= node_count.
    LinkGraph(std::size_t node_count, std::vector<FkEdge> edges);

    std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    /// Total adjacency entries; every edge is counted once from each side.
    std::size_t directed_entry_count() const { return adjacency_.size(); }
    const std::vector<FkEdge>& fk_edges() const { return edges_; }

    /// Sorted, deduplicated. Throws NotFoundError for an unknown node.
    std::span<const NodeId> neighbors(NodeId node) const;
    /// Nodes whose rows hold a foreign key pointing at `node`'s row.
    std::span<const NodeId> backlinks(NodeId node) const;
    /// Nodes that `node`'s row references through its own foreign keys.
    std::span<const NodeId> outlinks(NodeId node) const;

    std::string serialize() const;
    static LinkGraph deserialize(std::string_view bytes);

private:
    void check(NodeId node) const;

    std::vector<FkEdge> edges_;
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> adjacency_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeId> incoming_;
    std::vector<std::size_t> out_offsets_;
    std::vector<NodeId> outgoing_;
};

/// Adds an edge for every non-null FK value that matches a registered target row.
/// Dangling values produce no edge.
LinkGraph build_link_graph(const Dataset& dataset, const NodeRegistry& registry);

struct PotentialGainParams {
    double gamma = 0.5; ///< discount per step, in (0, 1)
    int max_length = 3; ///< longest walk counted, >= 1

    void validate() const;
};

/// PG(u) = sum_{i=1..m} gamma^i * (number of length-i walks starting at u), for all nodes.
std::vector<double> potential_gains(const LinkGraph& graph, const PotentialGainParams& params);

double potential_gain(const LinkGraph& graph, NodeId node, const PotentialGainParams& params);

} // namespace dbtrail
