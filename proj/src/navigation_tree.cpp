#include "dbtrail/navigation_tree.hpp"

#include "dbtrail/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace dbtrail {

WeightedSampler::WeightedSampler(std::size_t capacity) { resize(capacity); }

void WeightedSampler::resize(std::size_t capacity) {
    tree_.assign(capacity + 1, 0.0);
    weights_.assign(capacity, 0.0);
    total_ = 0.0;
}

void WeightedSampler::set(std::size_t slot, double weight) {
    double delta = weight - weights_.at(slot);
    weights_[slot] = weight;
    total_ += delta;
    for (std::size_t i = slot + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
}

void WeightedSampler::assign(const std::vector<double>& weights) {
    weights_ = weights;
    tree_.assign(weights.size() + 1, 0.0);
    total_ = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        tree_[i + 1] += weights[i];
        total_ += weights[i];
        std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
        if (parent < tree_.size()) tree_[parent] += tree_[i + 1];
    }
}

std::size_t WeightedSampler::find(double u) const {
    const std::size_t n = tree_.size() - 1;
    std::size_t pos = 0;
    std::size_t step = n == 0 ? 0 : std::bit_floor(n);
    for (; step > 0; step >>= 1) {
        std::size_t next = pos + step;
        if (next <= n && tree_[next] <= u) {
            pos = next;
            u -= tree_[next];
        }
    }
    // pos is the count of slots whose cumulative weight is <= u; rounding can
    // land on a zero-weight slot or run past the end, so settle on a live one.
    std::size_t slot = std::min(pos, n - 1);
    if (weights_[slot] > 0.0) return slot;
    for (std::size_t s = slot; s-- > 0;) {
        if (weights_[s] > 0.0) return s;
    }
    for (std::size_t s = slot + 1; s < n; ++s) {
        if (weights_[s] > 0.0) return s;
    }
    return slot;
}

NavigationTree::NavigationTree(NodeId root, TrailMetric metric, const NodeScores& scores,
                               const TrailScoreParams& params, std::size_t max_size)
    : metric_(metric), scores_(scores), params_(params), max_size_(std::max<std::size_t>(max_size, 1)),
      sampler_(max_size_) {
    NodeHit h = scores_.hit(root);
    Node n;
    n.node = root;
    n.distinct_sum = h.score;
    n.weighted_sum = h.score;
    n.terms = h.terms;
    n.max_node_terms = std::popcount(h.terms);
    n.rho = metric_ == TrailMetric::SumOverLength ? h.score / (1.0 + params_.length_constant) : h.score;
    nodes_.push_back(n);
    add_tip(0);
}

void NavigationTree::add_tip(std::size_t slot) {
    const Node& n = nodes_[slot];
    by_score_.emplace(-n.rho, n.node.value, slot);
    sampler_.set(slot, n.rho + kEpsilon);
}

void NavigationTree::retire_tip(std::size_t slot) {
    Node& n = nodes_[slot];
    if (!n.tip) return;
    n.tip = false;
    by_score_.erase({-n.rho, n.node.value, slot});
    sampler_.set(slot, 0.0);
}

std::optional<std::size_t> NavigationTree::best_tip() const {
    if (by_score_.empty()) return std::nullopt;
    return std::get<2>(*by_score_.begin());
}

std::optional<std::size_t> NavigationTree::select_explore(std::mt19937_64& rng) {
    if (by_score_.empty()) return std::nullopt;
    return sampler_.find(uniform01(rng) * sampler_.total());
}

std::optional<std::size_t> NavigationTree::select_converge(std::mt19937_64& rng, double df, std::size_t j,
                                                           std::size_t iterations) {
    if (by_score_.empty()) return std::nullopt;
    if (df <= 0.0) return best_tip();
    const double exponent =
        1.0 + static_cast<double>(j) / (df * static_cast<double>(iterations) + kEpsilon);
    // Weights are scaled by the best tip before exponentiation so large
    // exponents cannot underflow every weight to zero.
    const double top = -std::get<0>(*by_score_.begin()) + kEpsilon;
    std::vector<double> sharpened(nodes_.size(), 0.0);
    for (const auto& [neg_rho, node, slot] : by_score_) {
        sharpened[slot] = std::pow((-neg_rho + kEpsilon) / top, exponent);
    }
    WeightedSampler sharp;
    sharp.assign(sharpened);
    if (!(sharp.total() > 0.0)) return best_tip();
    return sharp.find(uniform01(rng) * sharp.total());
}

std::size_t NavigationTree::expand(std::size_t slot, const LinkGraph& graph) {
    Node& tip = nodes_.at(slot);
    if (!tip.tip) throw ValidationError("navigation tree: slot is not an expandable tip");
    std::vector<NodeId> children;
    for (NodeId v : graph.neighbors(tip.node)) {
        if (scores_.hit(v).admissible) children.push_back(v);
    }
    if (children.empty() || nodes_.size() + children.size() > max_size_) {
        retire_tip(slot);
        return 0;
    }
    retire_tip(slot);
    const std::size_t parent_slot = slot;
    for (NodeId v : children) {
        const Node& parent = nodes_[parent_slot];
        NodeHit h = scores_.hit(v);
        int earlier = 0;
        for (std::int32_t a = static_cast<std::int32_t>(parent_slot); a >= 0; a = nodes_[static_cast<std::size_t>(a)].parent) {
            if (nodes_[static_cast<std::size_t>(a)].node == v) ++earlier;
        }
        Node child;
        child.node = v;
        child.parent = static_cast<std::int32_t>(parent_slot);
        child.depth = parent.depth + 1;
        child.distinct_sum = parent.distinct_sum + (earlier == 0 ? h.score : 0.0);
        child.weighted_sum = parent.weighted_sum + std::pow(params_.position_discount, child.depth) *
                                                       std::pow(params_.repetition_discount, earlier) * h.score;
        child.terms = parent.terms | h.terms;
        child.max_node_terms = std::max(parent.max_node_terms, std::popcount(h.terms));
        child.rho = metric_ == TrailMetric::SumOverLength
                        ? child.distinct_sum / (static_cast<double>(child.depth + 1) + params_.length_constant)
                        : child.weighted_sum;
        nodes_.push_back(child);
        add_tip(nodes_.size() - 1);
    }
    return children.size();
}

std::size_t NavigationTree::best_slot() const {
    std::size_t best = 0;
    for (std::size_t s = 1; s < nodes_.size(); ++s) {
        const Node& a = nodes_[s];
        const Node& b = nodes_[best];
        int ta = std::popcount(a.terms), tb = std::popcount(b.terms);
        if (ta != tb) {
            if (ta > tb) best = s;
            continue;
        }
        if (a.max_node_terms != b.max_node_terms) {
            if (a.max_node_terms > b.max_node_terms) best = s;
            continue;
        }
        if (a.rho > b.rho) best = s;
    }
    return best;
}

std::vector<NodeId> NavigationTree::path_to(std::size_t slot) const {
    std::vector<NodeId> path;
    for (std::int32_t s = static_cast<std::int32_t>(slot); s >= 0; s = nodes_.at(static_cast<std::size_t>(s)).parent) {
        path.push_back(nodes_[static_cast<std::size_t>(s)].node);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

Trail NavigationTree::trail_to(std::size_t slot) const {
    Trail t = make_trail(path_to(slot), scores_);
    t.score = nodes_.at(slot).rho;
    return t;
}

} // namespace dbtrail
