#include "dbtrail/link_graph.hpp"

#include "dbtrail/binio.hpp"
#include "dbtrail/error.hpp"

#include <algorithm>
#include <cmath>

namespace dbtrail {

namespace {

constexpr std::string_view kGraphMagic = "DBTGRPH1";

void build_csr(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& arcs,
               std::vector<std::size_t>& offsets, std::vector<NodeId>& targets) {
    offsets.assign(n + 1, 0);
    for (const auto& [a, b] : arcs) ++offsets[a.index() + 1];
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];
    targets.assign(arcs.size(), NodeId{});
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const auto& [a, b] : arcs) targets[fill[a.index()]++] = b;
    for (std::size_t i = 0; i < n; ++i) {
        auto first = targets.begin() + static_cast<std::ptrdiff_t>(offsets[i]);
        auto last = targets.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]);
        std::sort(first, last);
    }
}

} // namespace

LinkGraph::LinkGraph(std::size_t node_count, std::vector<FkEdge> edges) {
    std::erase_if(edges, [](const FkEdge& e) { return e.from == e.to; });
    for (const auto& e : edges) {
        if (e.from.index() >= node_count || e.to.index() >= node_count) {
            throw ValidationError("link graph edge references node outside 0.." +
                                  std::to_string(node_count));
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    edges_ = std::move(edges);

    std::vector<std::pair<NodeId, NodeId>> undirected, incoming, outgoing;
    for (const auto& e : edges_) {
        undirected.emplace_back(e.from, e.to);
        undirected.emplace_back(e.to, e.from);
        incoming.emplace_back(e.to, e.from);
        outgoing.emplace_back(e.from, e.to);
    }
    // a->b and b->a as separate FK edges collapse to one undirected neighbor
    std::sort(undirected.begin(), undirected.end());
    undirected.erase(std::unique(undirected.begin(), undirected.end()), undirected.end());

    build_csr(node_count, undirected, offsets_, adjacency_);
    build_csr(node_count, incoming, in_offsets_, incoming_);
    build_csr(node_count, outgoing, out_offsets_, outgoing_);
}

void LinkGraph::check(NodeId node) const {
    if (node.index() >= node_count()) throw NotFoundError("unknown node " + std::to_string(node.value));
}

std::span<const NodeId> LinkGraph::neighbors(NodeId node) const {
    check(node);
    return {adjacency_.data() + offsets_[node.index()], offsets_[node.index() + 1] - offsets_[node.index()]};
}

std::span<const NodeId> LinkGraph::backlinks(NodeId node) const {
    check(node);
    return {incoming_.data() + in_offsets_[node.index()],
            in_offsets_[node.index() + 1] - in_offsets_[node.index()]};
}

std::span<const NodeId> LinkGraph::outlinks(NodeId node) const {
    check(node);
    return {outgoing_.data() + out_offsets_[node.index()],
            out_offsets_[node.index() + 1] - out_offsets_[node.index()]};
}

std::string LinkGraph::serialize() const {
    binio::Writer w;
    w.bytes(kGraphMagic);
    w.u32(static_cast<std::uint32_t>(node_count()));
    w.u64(static_cast<std::uint64_t>(edges_.size() * 2));
    for (const auto& e : edges_) {
        w.u32(e.from.value);
        w.u32(e.to.value);
        w.u8(1);
        w.u32(e.to.value);
        w.u32(e.from.value);
        w.u8(0);
    }
    return w.take();
}

LinkGraph LinkGraph::deserialize(std::string_view bytes) {
    binio::Reader r(bytes, "graph.bin");
    r.expect_magic(kGraphMagic);
    std::size_t n = r.u32();
    std::uint64_t entries = r.u64();
    std::vector<FkEdge> edges;
    std::size_t reverse = 0;
    for (std::uint64_t i = 0; i < entries; ++i) {
        NodeId a(r.u32());
        NodeId b(r.u32());
        std::uint8_t forward = r.u8();
        if (forward > 1) throw ParseError("graph.bin: bad direction flag");
        if (forward) edges.push_back({a, b});
        else ++reverse;
    }
    r.expect_end();
    if (reverse != edges.size()) throw ParseError("graph.bin: forward and reverse entries disagree");
    return LinkGraph(n, std::move(edges));
}

LinkGraph build_link_graph(const Dataset& dataset, const NodeRegistry& registry) {
    const SchemaDescriptor& schema = dataset.schema();
    std::vector<FkEdge> edges;
    dataset.for_each_row([&](const Row& row) {
        const TableDef& t = schema.table(row.table);
        if (t.foreign_keys.empty()) return;
        auto self = registry.find(dataset.key_of(row));
        if (!self) return;
        for (const auto& fk : t.foreign_keys) {
            const auto& value = row.values[*t.column_index(fk.source_columns[0])];
            if (!value) continue;
            RowKey target{schema.table(fk.target_table).name, {*value}};
            if (auto other = registry.find(target)) edges.push_back({*self, *other});
        }
    });
    return LinkGraph(registry.size(), std::move(edges));
}

void PotentialGainParams::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("potential gain: gamma must lie in (0,1)");
    if (max_length < 1) throw ValidationError("potential gain: max walk length must be >= 1");
}

std::vector<double> potential_gains(const LinkGraph& graph, const PotentialGainParams& params) {
    params.validate();
    const std::size_t n = graph.node_count();
    std::vector<double> walks(n, 1.0), next(n), gain(n, 0.0);
    double discount = 1.0;
    for (int step = 1; step <= params.max_length; ++step) {
        discount *= params.gamma;
        for (std::size_t u = 0; u < n; ++u) {
            double total = 0.0;
            for (NodeId v : graph.neighbors(NodeId(static_cast<std::uint32_t>(u)))) total += walks[v.index()];
            next[u] = total;
        }
        walks.swap(next);
        for (std::size_t u = 0; u < n; ++u) gain[u] += discount * walks[u];
    }
    return gain;
}

double potential_gain(const LinkGraph& graph, NodeId node, const PotentialGainParams& params) {
    params.validate();
    graph.neighbors(node);
    // Walk counts only depend on the radius-(m-1) ball; expanding from `node`
    // by frontier keeps this proportional to the neighbourhood, not the graph.
    std::vector<std::pair<NodeId, double>> frontier{{node, 1.0}};
    double gain = 0.0, discount = 1.0;
    for (int step = 1; step <= params.max_length; ++step) {
        discount *= params.gamma;
        std::vector<std::pair<NodeId, double>> next;
        double total = 0.0;
        for (const auto& [u, count] : frontier) {
            for (NodeId v : graph.neighbors(u)) {
                next.emplace_back(v, count);
                total += count;
            }
        }
        gain += discount * total;
        std::sort(next.begin(), next.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        frontier.clear();
        for (const auto& [v, c] : next) {
            if (!frontier.empty() && frontier.back().first == v) frontier.back().second += c;
            else frontier.emplace_back(v, c);
        }
    }
    return gain;
}

} // namespace dbtrail
