#include "dbtrail/csv.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"
#include "dbtrail/xml.hpp"

#include <doctest.h>

#include <random>

using namespace dbtrail;

TEST_CASE("fnv1a64 known vectors") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("percent encoding round trip") {
    CHECK(percent_encode("journals/ac/Dam66") == "journals%2Fac%2FDam66");
    CHECK(percent_encode("a b~_.-") == "a%20b~_.-");
    CHECK(percent_decode("journals%2fac%2FDam66") == "journals/ac/Dam66");
    CHECK_THROWS_AS(percent_decode("abc%2"), ParseError);
    CHECK_THROWS_AS(percent_decode("%zz"), ParseError);

    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        std::string s;
        int len = static_cast<int>(rng() % 12);
        for (int k = 0; k < len; ++k) s.push_back(static_cast<char>(rng() % 256));
        CHECK(percent_decode(percent_encode(s)) == s);
    }
}

TEST_CASE("split and trim") {
    CHECK(split("a\tb\t", '\t') == std::vector<std::string>{"a", "b", ""});
    CHECK(split("", ',') == std::vector<std::string>{""});
    CHECK(trim("  x y \n") == "x y");
    CHECK(iequals("Publication", "PUBLICATION"));
    CHECK_FALSE(iequals("pub", "publication"));
}

TEST_CASE("xml reader events") {
    xml::Reader r("<?xml version=\"1.0\"?>\n<!DOCTYPE dblp SYSTEM \"dblp.dtd\" [ <!ENTITY x \"y\"> ]>\n"
                  "<dblp><article key=\"k&amp;1\"><title>A &lt;b&gt; &uuml; &#233;<![CDATA[<raw>]]></title><br/></article></dblp>");
    auto e = r.next();
    REQUIRE(e);
    CHECK(e->name == "dblp");
    e = r.next();
    CHECK(e->name == "article");
    REQUIRE(e->attribute("key"));
    CHECK(*e->attribute("key") == "k&1");
    e = r.next();
    CHECK(e->name == "title");
    std::string text;
    for (e = r.next(); e && e->kind == xml::Event::Kind::Text; e = r.next()) text += e->text;
    CHECK(text == "A <b> \xc3\xbc \xc3\xa9<raw>");
    CHECK(e->kind == xml::Event::Kind::EndElement);
    e = r.next();
    CHECK((e->kind == xml::Event::Kind::StartElement && e->name == "br"));
    e = r.next();
    CHECK((e->kind == xml::Event::Kind::EndElement && e->name == "br"));
    r.next();
    r.next();
    CHECK_FALSE(r.next());
}

TEST_CASE("xml reader rejects malformed input") {
    auto drain = [](std::string_view doc) {
        xml::Reader r(doc);
        while (r.next()) {
        }
    };
    CHECK_THROWS_AS(drain("<a><b></a>"), ParseError);
    CHECK_THROWS_AS(drain("<a>"), ParseError);
    CHECK_THROWS_AS(drain("<a>&nosuch;</a>"), ParseError);
    CHECK_NOTHROW(drain("<a><!-- c --><b x='1'/></a>"));
}

TEST_CASE("csv parse and format") {
    auto rows = csv::parse("\xEF\xBB\xBF" "a,b,c\r\n1,\"x,y\",\n\"q\"\"q\",,\"\"\n");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == csv::Record{"a", "b", "c"});
    CHECK(rows[1] == csv::Record{"1", "x,y", std::nullopt});
    CHECK(rows[2] == csv::Record{"q\"q", std::nullopt, std::nullopt});
    CHECK(csv::format_record({"a", std::nullopt, "x\"y", " z"}) == "a,,\"x\"\"y\",\" z\"\n");
    CHECK_THROWS_AS(csv::parse("\"open\n"), ParseError);
}

TEST_CASE("csv round trip property") {
    std::mt19937_64 rng(11);
    const std::string alphabet = "ab ,\"\n\r\xc3\xa9";
    for (int i = 0; i < 300; ++i) {
        csv::Record rec;
        int cols = 1 + static_cast<int>(rng() % 4);
        for (int c = 0; c < cols; ++c) {
            std::string f;
            int len = static_cast<int>(rng() % 6);
            for (int k = 0; k < len; ++k) f.push_back(alphabet[rng() % alphabet.size()]);
            rec.push_back(f.empty() ? csv::Field{} : csv::Field{f});
        }
        auto back = csv::parse(csv::format_record(rec));
        REQUIRE(back.size() == 1);
        CHECK(back[0] == rec);
    }
}
