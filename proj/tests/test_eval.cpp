#include "dbtrail/error.hpp"
#include "dbtrail/eval.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace dbtrail;

namespace {

const SearchEngine& engine() {
    static const SearchEngine e(build_index(support::load_fixture()),
                                load_engine_config(support::fixture_data() / "engine.conf"));
    return e;
}

} // namespace

TEST_CASE("known-item file parsing") {
    auto items = parse_known_items("# comment\n\nsergey anatomy\tpublication\tjournals/cn/BrinP98\r\n"
                                   "brin page\twrites\t2\tjournals/cn/BrinP98\n");
    REQUIRE(items.size() == 2);
    CHECK(items[0].target == RowKey{"publication", {"journals/cn/BrinP98"}});
    CHECK(items[1].target.pk_values.size() == 2);
    CHECK_THROWS_AS(parse_known_items("only a query\n"), ParseError);
}

TEST_CASE("reciprocal rank") {
    std::vector<KnownItem> items = {
        {"vannevar bush", {"author", {"4"}}},
        {"xyzzy", {"author", {"4"}}},
        {"sergey anatomy", {"publication", {"journals/cn/BrinP98"}}},
    };
    EvalReport r = run_eval(engine(), items, 1);
    REQUIRE(r.entries.size() == 3);
    CHECK(r.entries[0].rank == 1);
    CHECK(r.entries[0].reciprocal_rank == 1.0);
    CHECK(r.entries[1].rank == 0);
    CHECK(r.entries[1].reciprocal_rank == 0.0);
    CHECK(r.entries[2].reciprocal_rank == 1.0);
    CHECK(r.mean_reciprocal_rank() == doctest::Approx(2.0 / 3.0));
    for (const auto& e : r.entries) {
        bool valid = e.reciprocal_rank == 0.0 || std::abs(1.0 / e.reciprocal_rank - std::round(1.0 / e.reciprocal_rank)) < 1e-12;
        CHECK(valid);
    }
    auto shares = r.stage_shares();
    CHECK(shares.sum() <= 100.0 + 1e-9);

    CHECK_THROWS_AS(run_eval(engine(), {{"web", {"author", {"999"}}}}), NotFoundError);
}

TEST_CASE("eval reports are reproducible") {
    auto items = load_known_items(std::filesystem::path(DBTRAIL_FIXTURES_DIR) / "known_items.tsv");
    REQUIRE(items.size() == 10);
    auto a = run_eval(engine(), items, 5);
    auto b = run_eval(engine(), items, 5);
    CHECK(eval_report_json(a).dump() == eval_report_json(b).dump());
    CHECK(render_eval_text(a) == render_eval_text(b));
    CHECK(eval_report_json(a, true)["aggregate"].contains("stage_share_percent"));
    CHECK(render_eval_text(a, true).find("stage share") != std::string::npos);
}
