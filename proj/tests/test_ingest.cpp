#include "dbtrail/dataset.hpp"
#include "dbtrail/dblp.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/schema.hpp"
#include "dbtrail/util.hpp"

#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace dbtrail;
namespace fs = std::filesystem;

namespace {

std::string schema_text(const std::string& tables) { return "{\"tables\":[" + tables + "]}"; }

const char* kPeople = R"({"name":"person","columns":[{"name":"id"},{"name":"name"},{"name":"boss"}],
                          "primary_key":["id"],
                          "foreign_keys":[{"columns":["boss"],"ref_table":"person","ref_columns":["id"]}]})";

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("load_schema: DBLP descriptor") {
    SchemaDescriptor s = load_schema(support::fixture_data() / "schema.json");
    REQUIRE(s.tables().size() == 4);
    CHECK(s.table(0).name == "publication");
    CHECK(s.table(1).name == "author");
    CHECK(s.table(2).name == "writes");
    CHECK(s.table(3).name == "citation");
    const TableDef& writes = s.table("WRITES");
    REQUIRE(writes.foreign_keys.size() == 2);
    CHECK(writes.foreign_keys[0].target_table == "author");
    CHECK(writes.foreign_keys[0].target_columns == std::vector<std::string>{"id"});
    CHECK(writes.foreign_keys[1].target_table == "publication");
    CHECK(writes.foreign_keys[1].target_columns == std::vector<std::string>{"key"});
    CHECK(parse_schema(s.to_json()).to_json() == s.to_json());
}

TEST_CASE("load_schema: empty and invalid descriptors") {
    CHECK(parse_schema(R"({"tables":[]})").tables().empty());
    CHECK_THROWS_AS(parse_schema("{"), ParseError);
    CHECK_THROWS_AS(parse_schema(R"({"tables":[{"name":"t"}]})"), ParseError);
    CHECK_THROWS_AS(parse_schema(schema_text(std::string(kPeople) + "," + kPeople)), ValidationError);
    CHECK_THROWS_AS(parse_schema(schema_text(
                        R"({"name":"t","columns":[{"name":"a"},{"name":"a"}],"primary_key":["a"],"foreign_keys":[]})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_schema(schema_text(
                        R"({"name":"t","columns":[{"name":"a"}],"primary_key":[],"foreign_keys":[]})")),
                    ValidationError);
    CHECK_THROWS_AS(parse_schema(schema_text(
                        R"({"name":"t","columns":[{"name":"a"}],"primary_key":["b"],"foreign_keys":[]})")),
                    ValidationError);
    // dangling reference
    CHECK_THROWS_AS(parse_schema(schema_text(R"({"name":"t","columns":[{"name":"a"}],"primary_key":["a"],
        "foreign_keys":[{"columns":["a"],"ref_table":"nosuch","ref_columns":["id"]}]})")),
                    ValidationError);
    std::string composite = message_of([] {
        parse_schema(schema_text(R"({"name":"p","columns":[{"name":"a"},{"name":"b"}],"primary_key":["a","b"],"foreign_keys":[]},
            {"name":"c","columns":[{"name":"x"},{"name":"y"}],"primary_key":["x"],
             "foreign_keys":[{"columns":["x","y"],"ref_table":"p","ref_columns":["a","b"]}]})"));
    });
    CHECK(composite.find("composite foreign key") != std::string::npos);
}

TEST_CASE("load_dataset: fixture counts") {
    Dataset d = support::load_fixture();
    CHECK(d.size() == 190);
    CHECK(d.table_size(0) == 50);
    CHECK(d.table_size(1) == 40);
    CHECK(d.table_size(2) == 80);
    CHECK(d.table_size(3) == 20);

    std::set<RowKey> keys;
    std::size_t sum = 0;
    d.for_each_row([&](const Row& r) {
        keys.insert(d.key_of(r));
        ++sum;
    });
    CHECK(keys.size() == 190);
    CHECK(sum == d.size());
}

TEST_CASE("load_dataset: empty files, duplicates and malformed files") {
    support::TempDir dir;
    SchemaDescriptor s = parse_schema(schema_text(kPeople));
    write_file(dir / "person.csv", "");
    CHECK(load_dataset(s, dir.path()).size() == 0);

    write_file(dir / "person.csv", "name,id,boss\nAda,1,\nBob,2,1\n");
    Dataset ok = load_dataset(s, dir.path());
    REQUIRE(ok.size() == 2);
    const Row* bob = ok.find(RowKey{"person", {"2"}});
    REQUIRE(bob);
    CHECK(bob->values[1] == std::optional<std::string>("Bob"));

    write_file(dir / "person.csv", "id,name,boss\n1,Ada,\n1,Other,\n");
    std::string msg = message_of([&] { load_dataset(s, dir.path()); });
    CHECK(msg.find("person") != std::string::npos);
    CHECK(msg.find("duplicate") != std::string::npos);

    write_file(dir / "person.csv", "id,name\n1,Ada\n");
    CHECK_THROWS_AS(load_dataset(s, dir.path()), Error);
    write_file(dir / "person.csv", "id,name,boss\n1,Ada\n");
    CHECK_THROWS_AS(load_dataset(s, dir.path()), Error);
    write_file(dir / "person.csv", "id,name,boss\n,Ada,\n");
    CHECK_THROWS_AS(load_dataset(s, dir.path()), ValidationError);
    fs::remove(dir / "person.csv");
    CHECK_THROWS_AS(load_dataset(s, dir.path()), Error);
}

TEST_CASE("dataset access counters") {
    Dataset d = support::load_fixture();
    d.reset_access_stats();
    CHECK(d.find(RowKey{"Publication", {"journals/ac/Dam66"}}) != nullptr);
    CHECK(d.find(RowKey{"publication", {"nosuch"}}) == nullptr);
    auto st = d.access_stats();
    CHECK(st.keyed_lookups == 2);
    CHECK(st.scans == 0);
}

TEST_CASE("row key paths") {
    RowKey k{"writes", {"2", "journals/cn/BrinP98"}};
    CHECK(k.to_path() == "writes/2/journals%2Fcn%2FBrinP98");
    CHECK(RowKey::from_path(k.to_path()) == k);
    CHECK_THROWS_AS(RowKey::from_path(""), ParseError);
}

TEST_CASE("convert_dblp_xml: Dam66 article") {
    auto result = dblp::convert(read_file(fs::path(DBTRAIL_FIXTURES_DIR) / "dblp50.xml"));
    const Dataset& d = result.dataset;
    const Row* row = d.find(RowKey{"publication", {"journals/ac/Dam66"}});
    REQUIRE(row);
    const TableDef& t = d.schema().table(row->table);
    auto value = [&](const char* col) { return row->values[*t.column_index(col)]; };
    CHECK(value("key") == std::optional<std::string>("journals/ac/Dam66"));
    CHECK(value("journal") == std::optional<std::string>("Advances in Computers"));
    CHECK(value("pages") == std::optional<std::string>("239-290"));
    CHECK(value("type") == std::optional<std::string>("article"));
    CHECK(value("volume") == std::optional<std::string>("7"));
    CHECK(value("year") == std::optional<std::string>("1966"));
    CHECK_FALSE(value("booktitle"));
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("www") != std::string::npos);
}

TEST_CASE("convert_dblp_xml: small documents") {
    auto two = dblp::convert(R"(<dblp><article key="a/1"><author>X Y</author><author>Z  W</author>
        <title>T <i>it</i>.</title><cite>a/2</cite><cite>...</cite></article>
        <book key="a/2"><author>X Y</author><title>B</title></book>
        <article key="a/1"><title>dup</title></article><phdthesis key="t/1"><title>Th</title></phdthesis></dblp>)");
    const Dataset& d = two.dataset;
    CHECK(d.table_size(0) == 3);
    CHECK(d.table_size(1) == 2);
    CHECK(d.table_size(2) == 3);
    CHECK(d.table_size(3) == 1);
    CHECK(d.find(RowKey{"author", {"2"}})->values[1] == std::optional<std::string>("Z W"));
    CHECK(d.find(RowKey{"publication", {"a/1"}})->values[7] == std::optional<std::string>("T it."));
    CHECK(d.find(RowKey{"citation", {"a/1", "a/2"}}));
    CHECK(two.warnings.size() == 1);

    CHECK_THROWS_AS(dblp::convert("<dblp><article key='x'></dblp>"), ParseError);
}

TEST_CASE("convert_dblp_xml: fixture reproduces committed files byte for byte") {
    support::TempDir out;
    auto first = dblp::convert_file(fs::path(DBTRAIL_FIXTURES_DIR) / "dblp50.xml", out.path());
    for (const char* f : {"schema.json", "publication.csv", "author.csv", "writes.csv", "citation.csv"}) {
        CAPTURE(f);
        CHECK(read_file(out / f) == read_file(support::fixture_data() / f));
    }
    support::TempDir again;
    dblp::convert_file(fs::path(DBTRAIL_FIXTURES_DIR) / "dblp50.xml", again.path());
    for (const char* f : {"schema.json", "publication.csv", "author.csv", "writes.csv", "citation.csv"}) {
        CHECK(read_file(out / f) == read_file(again / f));
    }

    // no dangling writes references
    Dataset d = load_dataset(load_schema(out / "schema.json"), out.path());
    d.for_each_row([&](const Row& r) {
        if (d.schema().table(r.table).name != "writes") return;
        CHECK(d.find(RowKey{"author", {*r.values[0]}}));
        CHECK(d.find(RowKey{"publication", {*r.values[1]}}));
    });
}
