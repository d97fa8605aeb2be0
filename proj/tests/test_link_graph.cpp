#include "dbtrail/error.hpp"
#include "dbtrail/link_graph.hpp"

#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace dbtrail;

namespace {

std::vector<NodeId> ids(std::span<const NodeId> s) { return {s.begin(), s.end()}; }

NodeId node(const IndexBundle& b, const RowKey& k) {
    auto n = b.registry.find(k);
    REQUIRE(n);
    return *n;
}

} // namespace

TEST_CASE("writes row links author and publication both ways") {
    const IndexBundle& b = support::fixture_bundle();
    NodeId w = node(b, {"writes", {"2", "journals/cn/BrinP98"}});
    NodeId a = node(b, {"author", {"2"}});
    NodeId p = node(b, {"publication", {"journals/cn/BrinP98"}});
    auto nw = ids(b.graph.neighbors(w));
    CHECK(nw.size() == 2);
    CHECK(std::find(nw.begin(), nw.end(), a) != nw.end());
    CHECK(std::find(nw.begin(), nw.end(), p) != nw.end());
    auto na = ids(b.graph.neighbors(a));
    CHECK(std::find(na.begin(), na.end(), w) != na.end());
    CHECK(ids(b.graph.outlinks(w)) == nw);
}

TEST_CASE("every writes row has exactly two neighbours") {
    const IndexBundle& b = support::fixture_bundle();
    for (std::uint32_t i = 0; i < b.registry.size(); ++i) {
        if (b.registry.resolve_node(NodeId(i)).table == "writes") CHECK(b.graph.neighbors(NodeId(i)).size() == 2);
    }
}

TEST_CASE("fixture graph: symmetry and edge count") {
    const IndexBundle& b = support::fixture_bundle();
    Dataset d = support::load_fixture();
    // Independent count of non-null FK values that resolve to an existing row.
    std::size_t resolvable = 0;
    d.for_each_row([&](const Row& r) {
        const TableDef& t = d.schema().table(r.table);
        for (const auto& fk : t.foreign_keys) {
            const auto& v = r.values[*t.column_index(fk.source_columns[0])];
            if (v && b.registry.find(RowKey{fk.target_table, {*v}})) ++resolvable;
        }
    });
    CHECK(resolvable == 200);
    CHECK(b.graph.directed_entry_count() == 2 * resolvable);

    for (std::uint32_t i = 0; i < b.graph.node_count(); ++i) {
        auto nu = ids(b.graph.neighbors(NodeId(i)));
        CHECK(std::is_sorted(nu.begin(), nu.end()));
        CHECK(std::adjacent_find(nu.begin(), nu.end()) == nu.end());
        for (NodeId v : nu) {
            CHECK(v != NodeId(i));
            auto nv = ids(b.graph.neighbors(v));
            CHECK(std::binary_search(nv.begin(), nv.end(), NodeId(i)));
        }
        for (NodeId v : b.graph.backlinks(NodeId(i))) CHECK(std::binary_search(nu.begin(), nu.end(), v));
    }
}

TEST_CASE("backlinks of the Anatomy publication") {
    const IndexBundle& b = support::fixture_bundle();
    NodeId p = node(b, {"publication", {"journals/cn/BrinP98"}});
    std::set<RowKey> got;
    for (NodeId n : b.graph.backlinks(p)) got.insert(b.registry.resolve_node(n));
    std::set<RowKey> want = {
        {"writes", {"2", "journals/cn/BrinP98"}},
        {"writes", {"3", "journals/cn/BrinP98"}},
        {"citation", {"journals/cn/BrinP98", "journals/jacm/Kleinberg99"}},
        {"citation", {"journals/cn/BrinP98", "journals/ipm/SaltonB88"}},
        {"citation", {"journals/nature/LawrenceG99", "journals/cn/BrinP98"}},
        {"citation", {"journals/cn/BroderKMRRSTW00", "journals/cn/BrinP98"}},
    };
    CHECK(got == want);
    NodeId unreferenced = node(b, {"writes", {"1", "journals/ac/Dam66"}});
    CHECK(b.graph.backlinks(unreferenced).empty());
}

TEST_CASE("graph construction edge cases") {
    LinkGraph empty(3, {});
    CHECK(empty.neighbors(NodeId(1)).empty());
    CHECK(empty.directed_entry_count() == 0);
    CHECK_THROWS_AS(empty.neighbors(NodeId(3)), NotFoundError);
    CHECK_THROWS_AS(LinkGraph(2, {{NodeId(0), NodeId(2)}}), ValidationError);

    LinkGraph g(3, {{NodeId(0), NodeId(1)}, {NodeId(0), NodeId(1)}, {NodeId(1), NodeId(0)}, {NodeId(2), NodeId(2)}});
    CHECK(ids(g.neighbors(NodeId(0))) == std::vector<NodeId>{NodeId(1)});
    CHECK(g.neighbors(NodeId(2)).empty());
    CHECK(ids(g.backlinks(NodeId(0))) == std::vector<NodeId>{NodeId(1)});
    CHECK(ids(g.backlinks(NodeId(1))) == std::vector<NodeId>{NodeId(0)});

    LinkGraph back = LinkGraph::deserialize(g.serialize());
    CHECK(back.fk_edges() == g.fk_edges());
    CHECK(ids(back.neighbors(NodeId(1))) == ids(g.neighbors(NodeId(1))));
}

TEST_CASE("potential gain: path graph A-B-C") {
    LinkGraph g(3, {{NodeId(0), NodeId(1)}, {NodeId(1), NodeId(2)}});
    PotentialGainParams p{0.5, 2};
    CHECK(potential_gain(g, NodeId(0), p) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(potential_gain(g, NodeId(1), p) == doctest::Approx(1.5).epsilon(1e-15));
    auto all = potential_gains(g, p);
    CHECK(all[0] == doctest::Approx(1.0));
    CHECK(all[1] == doctest::Approx(1.5));
    CHECK(all[2] == doctest::Approx(1.0));

    LinkGraph iso(1, {});
    CHECK(potential_gain(iso, NodeId(0), {}) == 0.0);
    CHECK_THROWS_AS((PotentialGainParams{1.5, 2}.validate()), ValidationError);
    CHECK_THROWS_AS((PotentialGainParams{0.5, 0}.validate()), ValidationError);
}

TEST_CASE("potential gain matches walk enumeration on small graphs") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 1 + rng() % 6;
        auto sg = oracle::random_graph(rng, n, 0.45, false);
        LinkGraph g = sg.build();
        PotentialGainParams p{0.1 + 0.8 * std::uniform_real_distribution<double>(0.0, 1.0)(rng), 1 + static_cast<int>(rng() % 4)};
        auto all = potential_gains(g, p);
        for (std::size_t u = 0; u < n; ++u) {
            double want = oracle::potential_gain(sg, u, p.gamma, p.max_length);
            CHECK(std::abs(all[u] - want) <= 1e-12);
            CHECK(std::abs(potential_gain(g, NodeId(static_cast<std::uint32_t>(u)), p) - want) <= 1e-12);
        }
    }
}

TEST_CASE("potential gain is monotone under edge addition") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t n = 2 + rng() % 6;
        auto sg = oracle::random_graph(rng, n, 0.3, false);
        PotentialGainParams p{0.5, 3};
        auto before = potential_gains(sg.build(), p);
        std::size_t a = rng() % n, c = rng() % n;
        if (a == c || sg.adj[a][c]) continue;
        sg.edges.push_back({NodeId(static_cast<std::uint32_t>(a)), NodeId(static_cast<std::uint32_t>(c))});
        auto after = potential_gains(sg.build(), p);
        CHECK(after[a] >= before[a]);
        CHECK(after[c] >= before[c]);
    }
}
