#include "dbtrail/best_trail.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"

#include <limits>
#include <set>

namespace dbtrail {

void BestTrailParams::validate() const {
    if (repetitions < 1) throw ValidationError("best trail: repetitions must be >= 1");
    if (start_points < 1) throw ValidationError("best trail: start points must be >= 1");
    if (max_tree < 1) throw ValidationError("best trail: max tree size must be >= 1");
    if (!(discrimination >= 0.0) || discrimination == std::numeric_limits<double>::infinity()) {
        throw ValidationError("best trail: discrimination factor must be finite and >= 0");
    }
}

Trail grow_best_trail(NodeId start, TrailMetric metric, const LinkGraph& graph, const NodeScores& scores,
                      const BestTrailParams& params, const TrailScoreParams& score_params,
                      std::uint64_t tree_seed) {
    std::mt19937_64 rng(tree_seed);
    NavigationTree tree(start, metric, scores, score_params, params.max_tree);
    for (std::size_t j = 0; j < params.explore_iterations; ++j) {
        auto tip = tree.select_explore(rng);
        if (!tip) break;
        tree.expand(*tip, graph);
    }
    for (std::size_t j = 0; j < params.converge_iterations; ++j) {
        auto tip = tree.select_converge(rng, params.discrimination, j, params.converge_iterations);
        if (!tip) break;
        tree.expand(*tip, graph);
    }
    return tree.trail_to(tree.best_slot());
}

std::vector<Trail> run_best_trail(std::span<const NodeId> starts, const LinkGraph& graph,
                                  const NodeScores& scores, const BestTrailParams& params,
                                  const TrailScoreParams& score_params) {
    params.validate();
    score_params.validate();
    std::vector<Trail> out;
    std::set<std::vector<NodeId>> seen;
    for (NodeId start : starts) {
        for (TrailMetric metric : {TrailMetric::SumOverLength, TrailMetric::PositionWeighted}) {
            for (std::size_t rep = 0; rep < params.repetitions; ++rep) {
                std::uint64_t tree_seed = mix64(params.seed ^ mix64(start.value)) ^
                                          mix64((static_cast<std::uint64_t>(metric) << 32) | rep);
                Trail t = grow_best_trail(start, metric, graph, scores, params, score_params, tree_seed);
                if (seen.insert(t.nodes).second) out.push_back(std::move(t));
            }
        }
    }
    return out;
}

} // namespace dbtrail
