#pragma once

#include "dbtrail/link_graph.hpp"
#include "dbtrail/navigation_tree.hpp"
#include "dbtrail/node_scoring.hpp"
#include "dbtrail/trail.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dbtrail {

struct BestTrailParams {
    std::size_t repetitions = 3;         ///< M
    std::size_t explore_iterations = 40; ///< I_explore
    std::size_t converge_iterations = 40;
    double discrimination = 0.5;         ///< df; 0 makes convergence greedy
    std::size_t start_points = 10;       ///< K
    std::size_t max_tree = 2000;         ///< cap on |D|
    std::uint64_t seed = 0;

    void validate() const;
};

/// Grows one navigation tree: I_explore proportional selections, then
/// I_converge sharpened selections, each followed by an expansion. Stops early
/// when no tip can be expanded. Returns best(D).
Trail grow_best_trail(NodeId start, TrailMetric metric, const LinkGraph& graph, const NodeScores& scores,
                      const BestTrailParams& params, const TrailScoreParams& score_params,
                      std::uint64_t tree_seed);

/// For every start node, M trees per trail metric (sum-over-length and
/// position-weighted); the best trail of each tree joins the candidate set.
/// Candidates keep first-seen order and duplicate node sequences are dropped.
/// Each tree draws from its own RNG seeded from (seed, start, metric, repetition).
std::vector<Trail> run_best_trail(std::span<const NodeId> starts, const LinkGraph& graph,
                                  const NodeScores& scores, const BestTrailParams& params,
                                  const TrailScoreParams& score_params);

} // namespace dbtrail
