#include "dbtrail/index_store.hpp"
#include "dbtrail/service.hpp"
#include "dbtrail/vdoc.hpp"

#include "support.hpp"

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <chrono>
#include <thread>

using namespace dbtrail;
using nlohmann::json;

namespace {

struct Fixture {
    support::TempDir dir;
    std::unique_ptr<Service> service;

    Fixture() {
        build_index_directory(support::fixture_data(), dir / "idx");
        service = open_service(dir / "idx");
    }
};

Fixture& fixture() {
    static Fixture f;
    return f;
}

json body(const HttpReply& r) { return json::parse(r.body); }

} // namespace

TEST_CASE("GET /search") {
    Service& s = *fixture().service;
    HttpReply ok = s.search({{"q", "sergey anatomy"}, {"seed", "3"}});
    CHECK(ok.status == 200);
    json j = body(ok);
    REQUIRE(j["trails"].size() >= 1);
    std::set<std::string> top;
    for (const auto& n : j["trails"][0]["nodes"]) top.insert(n["link"].get<std::string>());
    CHECK(top.count("/row/author/2"));
    CHECK(top.count("/row/publication/journals%2Fcn%2FBrinP98"));

    json bush = body(s.search({{"q", "vannevar bush"}}));
    REQUIRE(bush["trails"][0]["nodes"].size() == 1);
    CHECK(bush["trails"][0]["nodes"][0]["link"] == "/row/author/4");

    CHECK(s.search({{"q", ""}}).status == 400);
    CHECK(s.search({}).status == 400);
    CHECK(s.search({{"q", "a="}}).status == 400);
    CHECK(s.search({{"q", "web"}, {"k", "0"}}).status == 400);
    CHECK(s.search({{"q", "web"}, {"seed", "x"}}).status == 400);
    json none = body(s.search({{"q", "xyzzy"}}));
    CHECK(none["trails"].empty());
    CHECK(body(s.search({{"q", "web"}, {"k", "2"}}))["trails"].size() <= 2);
}

TEST_CASE("GET /row") {
    Service& s = *fixture().service;
    HttpReply dam = s.row("publication/journals%2Fac%2FDam66", false);
    REQUIRE(dam.status == 200);
    json j = body(dam);
    CHECK(j["table"] == "publication");
    std::map<std::string, json> cols;
    for (const auto& c : j["columns"]) cols[c["name"]] = c["value"];
    CHECK(cols["journal"] == "Advances in Computers");
    CHECK(cols["pages"] == "239-290");
    CHECK(cols["booktitle"].is_null());
    CHECK(j["outlinks"].empty());

    HttpReply xml = s.row("publication/journals%2Fac%2FDam66", true);
    CHECK(xml.status == 200);
    CHECK(xml.content_type.rfind("application/xml", 0) == 0);
    CHECK(xml.body.rfind("<PUBLICATION>\n  <row>\n    <JOURNAL>Advances in Computers</JOURNAL>", 0) == 0);
    CHECK(xml.body.find("<URL>http://dblp.uni-trier.de/db/journals/ac/ac7.html#Dam66</URL>") != std::string::npos);

    json w = body(s.row("writes/2/journals%2Fcn%2FBrinP98", false));
    REQUIRE(w["outlinks"].size() == 2);
    CHECK(w["outlinks"][0]["url"] == "/row/author/2");
    CHECK(w["outlinks"][1]["url"] == "/row/publication/journals%2Fcn%2FBrinP98");

    CHECK(s.row("publication/nosuch", false).status == 404);
    CHECK(s.row("nosuchtable/1", false).status == 404);
    CHECK(s.row("author/%zz", false).status == 400);
}

TEST_CASE("GET /backlinks") {
    Service& s = *fixture().service;
    json j = body(s.backlinks("publication/journals%2Fcn%2FBrinP98"));
    REQUIRE(j["backlinks"].size() == 6);
    for (const auto& ref : j["backlinks"]) {
        std::string url = ref["url"];
        REQUIRE(url.rfind("/row/", 0) == 0);
        CHECK(s.row(url.substr(5), false).status == 200);
    }
    CHECK(body(s.backlinks("writes/1/journals%2Fac%2FDam66"))["backlinks"].empty());
    CHECK(s.backlinks("publication/nosuch").status == 404);
}

TEST_CASE("GET /stats") {
    json j = body(fixture().service->stats());
    CHECK(j["nodes"] == 190);
    CHECK(j["fk_edges"] == 200);
    CHECK(j["adjacency_entries"] == 400);
}

TEST_CASE("row store access discipline") {
    Service& s = *fixture().service;
    s.rows().reset_access_stats();
    for (const char* q : {"sergey anatomy", "vannevar bush", "computers -type=mastersthesis", "link:author/2"}) {
        s.search({{"q", q}});
    }
    CHECK(s.rows().access_stats().keyed_lookups == 0);
    CHECK(s.rows().access_stats().scans == 0);

    s.row("publication/journals%2Fac%2FDam66", false);
    CHECK(s.rows().access_stats().keyed_lookups == 1);
    s.row("writes/2/journals%2Fcn%2FBrinP98", true);
    CHECK(s.rows().access_stats().keyed_lookups == 2);
    s.backlinks("publication/journals%2Fcn%2FBrinP98");
    CHECK(s.rows().access_stats().keyed_lookups == 2);
    CHECK(s.rows().access_stats().scans == 0);
}

TEST_CASE("HTTP round trip") {
    Service& s = *fixture().service;
    int port = s.bind_any_port("127.0.0.1");
    REQUIRE(port > 0);
    std::thread server([&] { s.listen_after_bind(); });
    httplib::Client cli("127.0.0.1", port);
    for (int i = 0; i < 50 && !cli.Get("/stats"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

    auto row = cli.Get("/row/publication/journals%2Fac%2FDam66");
    REQUIRE(row);
    CHECK(row->status == 200);
    CHECK(json::parse(row->body)["key"][0] == "journals/ac/Dam66");

    auto xml = cli.Get("/row/publication/journals%2Fac%2FDam66", {{"Accept", "application/xml"}});
    REQUIRE(xml);
    CHECK(xml->body.rfind("<PUBLICATION>", 0) == 0);

    auto missing = cli.Get("/row/publication/nosuch");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    auto bad = cli.Get("/search?q=");
    REQUIRE(bad);
    CHECK(bad->status == 400);

    auto start = std::chrono::steady_clock::now();
    auto search = cli.Get("/search?q=sergey+anatomy&k=5&seed=1");
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(search);
    CHECK(search->status == 200);
    CHECK(json::parse(search->body)["trails"].size() <= 5);
    CHECK(ms < 100.0);

    auto back = cli.Get("/backlinks/author/2");
    REQUIRE(back);
    CHECK(json::parse(back->body)["backlinks"].size() == 2);

    s.stop();
    server.join();
}
