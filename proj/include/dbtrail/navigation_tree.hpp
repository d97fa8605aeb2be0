#pragma once

#include "dbtrail/link_graph.hpp"
#include "dbtrail/node_id.hpp"
#include "dbtrail/node_scoring.hpp"
#include "dbtrail/trail.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace dbtrail {

/// Which trail function scores the tips of a tree.
enum class TrailMetric { SumOverLength, PositionWeighted };

/// Fenwick tree over non-negative weights with O(log n) prefix-sum sampling.
class WeightedSampler {
public:
    explicit WeightedSampler(std::size_t capacity = 0);

    void resize(std::size_t capacity);
    void set(std::size_t slot, double weight);
    double weight(std::size_t slot) const { return weights_.at(slot); }
    double total() const { return total_; }
    /// Rebuilds from `weights` in O(n).
    void assign(const std::vector<double>& weights);
    /// Slot whose cumulative range contains `u` (u in [0, total)); skips zero-weight slots.
    std::size_t find(double u) const;

private:
    std::vector<double> tree_;
    std::vector<double> weights_;
    double total_ = 0.0;
};

/// Navigation tree D grown from one starting node.
///
/// Every tree node stands for the trail from the root to itself. Tips are
/// unexpanded leaves that may still be expanded; their selection weight is the
/// trail score under the tree's metric.
class NavigationTree {
public:
    static constexpr double kEpsilon = 1e-9;

    struct Node {
        NodeId node;
        std::int32_t parent = -1;
        std::uint32_t depth = 0;    ///< trail length - 1
        double distinct_sum = 0.0;  ///< sum of distinct node scores on the path
        double weighted_sum = 0.0;  ///< position/repetition weighted sum on the path
        double rho = 0.0;           ///< trail score under the tree's metric
        std::uint64_t terms = 0;    ///< union of matched terms along the path
        int max_node_terms = 0;
        bool tip = true;
    };

    NavigationTree(NodeId root, TrailMetric metric, const NodeScores& scores, const TrailScoreParams& params,
                   std::size_t max_size);

    std::size_t size() const { return nodes_.size(); }
    std::size_t max_size() const { return max_size_; }
    const Node& at(std::size_t slot) const { return nodes_.at(slot); }
    std::size_t tip_count() const { return by_score_.size(); }
    bool has_tips() const { return !by_score_.empty(); }

    /// Exploration selection: probability proportional to rho + epsilon.
    std::optional<std::size_t> select_explore(std::mt19937_64& rng);
    /// Convergence selection for iteration j of `iterations`: probability
    /// proportional to (rho + eps)^(1 + j / (df * iterations + eps)); df == 0
    /// selects the highest-scoring tip deterministically.
    std::optional<std::size_t> select_converge(std::mt19937_64& rng, double df, std::size_t j,
                                               std::size_t iterations);
    /// Highest rho, then smaller NodeId, then earlier slot.
    std::optional<std::size_t> best_tip() const;

    /// Appends every admissible neighbour of the tip as a new tip. When the
    /// tree cannot hold all of them, or there are none, the tip is retired
    /// without growing D. Returns the number of children added.
    std::size_t expand(std::size_t slot, const LinkGraph& graph);

    /// Best trail over every root-to-node path in D: (terms, max node terms, rho), earliest slot on ties.
    std::size_t best_slot() const;
    std::vector<NodeId> path_to(std::size_t slot) const;
    Trail trail_to(std::size_t slot) const;

private:
    using TipKey = std::tuple<double, std::uint32_t, std::size_t>; // (-rho, node, slot)

    void add_tip(std::size_t slot);
    void retire_tip(std::size_t slot);

    TrailMetric metric_;
    const NodeScores& scores_;
    TrailScoreParams params_;
    std::size_t max_size_;
    std::vector<Node> nodes_;
    std::set<TipKey> by_score_;
    WeightedSampler sampler_;
};

/// Uniform double in [0, 1) from the top 53 bits; identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace dbtrail
