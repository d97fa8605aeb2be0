#include "dbtrail/best_trail.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/navigation_tree.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace dbtrail;

namespace {

std::vector<std::size_t> as_index(const std::vector<NodeId>& v) {
    std::vector<std::size_t> out;
    for (NodeId n : v) out.push_back(n.index());
    return out;
}

std::vector<double> random_scores(std::mt19937_64& rng, std::size_t n, double zero_share) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(n);
    for (auto& x : s) x = u(rng) < zero_share ? 0.0 : 0.05 + u(rng);
    return s;
}

} // namespace

TEST_CASE("weighted sampler") {
    WeightedSampler s(5);
    s.set(1, 2.0);
    s.set(3, 1.0);
    CHECK(s.total() == doctest::Approx(3.0));
    CHECK(s.find(0.0) == 1);
    CHECK(s.find(1.999) == 1);
    CHECK(s.find(2.0) == 3);
    CHECK(s.find(2.999) == 3);
    CHECK(s.find(3.0) == 3); // rounding past the end settles on a live slot
    s.set(1, 0.0);
    CHECK(s.find(0.0) == 3);
    s.assign({0.0, 1.0, 0.0, 1.0});
    CHECK(s.find(0.5) == 1);
    CHECK(s.find(1.5) == 3);
}

TEST_CASE("isolated start yields a singleton trail") {
    LinkGraph g(2, {});
    NodeScores s;
    s.set(NodeId(0), {0.5, 1, true});
    NodeId start(0);
    auto out = run_best_trail(std::span<const NodeId>(&start, 1), g, s, {}, {});
    REQUIRE(out.size() == 1);
    CHECK(out[0].nodes == std::vector<NodeId>{NodeId(0)});
}

TEST_CASE("tip selection") {
    LinkGraph g(3, {{NodeId(0), NodeId(1)}, {NodeId(0), NodeId(2)}});
    NodeScores s;
    s.set(NodeId(1), {0.9, 1, true});
    s.set(NodeId(2), {0.1, 1, true});
    TrailScoreParams p;

    SUBCASE("single tip") {
        NavigationTree t(NodeId(0), TrailMetric::PositionWeighted, s, p, 10);
        std::mt19937_64 rng(1);
        CHECK(t.select_explore(rng) == std::optional<std::size_t>(0));
        CHECK(t.select_converge(rng, 0.5, 3, 10) == std::optional<std::size_t>(0));
    }
    SUBCASE("exploration frequencies follow the scores") {
        // Root score 0; after expansion the two tips score 0.75*0.9 and 0.75*0.1.
        NavigationTree t(NodeId(0), TrailMetric::PositionWeighted, s, p, 10);
        CHECK(t.expand(0, g) == 2);
        std::mt19937_64 rng(12345);
        const int draws = 100000;
        int first = 0;
        for (int i = 0; i < draws; ++i) first += t.select_explore(rng) == std::optional<std::size_t>(1);
        CHECK(static_cast<double>(first) / draws == doctest::Approx(0.9).epsilon(0.02 / 0.9));
    }
    SUBCASE("df = 0 always picks the best tip") {
        NavigationTree t(NodeId(0), TrailMetric::PositionWeighted, s, p, 10);
        t.expand(0, g);
        std::mt19937_64 rng(5);
        for (int i = 0; i < 100; ++i) CHECK(t.select_converge(rng, 0.0, i % 10, 10) == std::optional<std::size_t>(1));
    }
    SUBCASE("sharpening concentrates on the best tip") {
        NavigationTree t(NodeId(0), TrailMetric::PositionWeighted, s, p, 10);
        t.expand(0, g);
        std::mt19937_64 rng(6);
        int early = 0, late = 0;
        for (int i = 0; i < 20000; ++i) {
            early += t.select_converge(rng, 0.5, 0, 40) == std::optional<std::size_t>(1);
            late += t.select_converge(rng, 0.5, 39, 40) == std::optional<std::size_t>(1);
        }
        CHECK(early < late);
        CHECK(late > 19900);
    }
    SUBCASE("no tips") {
        NavigationTree t(NodeId(2), TrailMetric::SumOverLength, s, p, 1);
        t.expand(0, g);
        std::mt19937_64 rng(1);
        CHECK_FALSE(t.select_explore(rng));
        CHECK_FALSE(t.select_converge(rng, 0.5, 0, 1));
    }
}

TEST_CASE("tip expansion") {
    LinkGraph g(4, {{NodeId(0), NodeId(1)}, {NodeId(0), NodeId(2)}, {NodeId(0), NodeId(3)}});
    NodeScores s;
    s.set(NodeId(3), {0.0, 0, false});
    TrailScoreParams p;

    NavigationTree t(NodeId(0), TrailMetric::SumOverLength, s, p, 10);
    CHECK(t.expand(0, g) == 2); // the excluded neighbour is skipped
    CHECK(t.size() == 3);
    CHECK(t.tip_count() == 2);
    CHECK(t.at(1).node == NodeId(1));
    CHECK(t.at(2).node == NodeId(2));
    CHECK_THROWS_AS(t.expand(0, g), ValidationError);

    NavigationTree full(NodeId(0), TrailMetric::SumOverLength, s, p, 2);
    CHECK(full.expand(0, g) == 0);
    CHECK(full.size() == 1);
    CHECK(full.tip_count() == 0);
}

TEST_CASE("best-first emulation with I_explore = 0 and df = 0") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 2 + rng() % 7;
        auto sg = oracle::random_graph(rng, n, 0.35, trial % 2 == 0);
        LinkGraph g = sg.build();
        auto score = random_scores(rng, n, 0.3);
        std::vector<std::uint64_t> terms(n);
        NodeScores s;
        for (std::size_t v = 0; v < n; ++v) {
            terms[v] = score[v] > 0.0 ? (std::uint64_t{1} << (rng() % 3)) : 0;
            if (score[v] > 0.0) s.set(NodeId(static_cast<std::uint32_t>(v)), {score[v], terms[v], true});
        }
        BestTrailParams params;
        params.explore_iterations = 0;
        params.discrimination = 0.0;
        params.converge_iterations = 1 + rng() % 12;
        params.repetitions = 2;
        params.max_tree = 5 + rng() % 40;
        params.seed = rng();

        std::vector<NodeId> starts;
        for (std::size_t v = 0; v < n; ++v) starts.push_back(NodeId(static_cast<std::uint32_t>(v)));
        auto got = run_best_trail(starts, g, s, params, {});

        std::vector<std::vector<std::size_t>> want;
        for (std::size_t v = 0; v < n; ++v) {
            for (bool mu1 : {true, false}) {
                auto path = oracle::best_first(sg, v, score, terms, mu1, params.converge_iterations, params.max_tree);
                if (std::find(want.begin(), want.end(), path) == want.end()) want.push_back(path);
            }
        }
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(as_index(got[i].nodes) == want[i]);
    }
}

TEST_CASE("generous iterations reach the mu1 optimum on small graphs") {
    std::mt19937_64 rng(77);
    int hits = 0;
    const int runs = 40;
    for (int run = 0; run < runs; ++run) {
        std::size_t n = 3 + rng() % 4;
        auto sg = oracle::random_graph(rng, n, 0.4, true);
        auto score = random_scores(rng, n, 0.3);
        NodeScores s = oracle::single_term_scores(score);
        BestTrailParams params;
        params.explore_iterations = 50;
        params.converge_iterations = 50;
        params.repetitions = 5;
        params.seed = static_cast<std::uint64_t>(run);
        std::vector<NodeId> starts;
        for (std::size_t v = 0; v < n; ++v) {
            if (score[v] > 0.0) starts.push_back(NodeId(static_cast<std::uint32_t>(v)));
        }
        if (starts.empty()) {
            ++hits;
            continue;
        }
        double best = 0.0;
        for (const Trail& t : run_best_trail(starts, sg.build(), s, params, {})) {
            best = std::max(best, score_trail_mu1(t, {}));
        }
        if (std::abs(best - oracle::optimal_mu1(sg, score, 1.0)) <= 1e-12) ++hits;
    }
    CHECK(hits >= runs * 95 / 100);
}

TEST_CASE("consecutive trail nodes are adjacent and runs are deterministic") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 4 + rng() % 10;
        auto sg = oracle::random_graph(rng, n, 0.3, true);
        LinkGraph g = sg.build();
        NodeScores s = oracle::single_term_scores(random_scores(rng, n, 0.4));
        std::vector<NodeId> starts = {NodeId(0), NodeId(static_cast<std::uint32_t>(n - 1))};
        BestTrailParams params;
        params.seed = 99;
        auto a = run_best_trail(starts, g, s, params, {});
        auto b = run_best_trail(starts, g, s, params, {});
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].nodes == b[i].nodes);
            CHECK(a[i].score == b[i].score);
            for (std::size_t k = 1; k < a[i].nodes.size(); ++k) CHECK(sg.adj[a[i].nodes[k - 1].index()][a[i].nodes[k].index()]);
        }
    }
}

TEST_CASE("best trail parameter validation") {
    BestTrailParams p;
    p.repetitions = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.discrimination = -1.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = {};
    p.start_points = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}
