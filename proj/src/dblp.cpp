#include "dbtrail/dblp.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"
#include "dbtrail/xml.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

namespace dbtrail::dblp {

namespace {

constexpr std::array<std::string_view, 7> kRecordTypes = {
    "article", "inproceedings", "proceedings", "book", "incollection", "phdthesis", "mastersthesis"};

// Publication columns in schema order; "key" and "type" come from the record element itself.
constexpr std::array<std::string_view, 12> kPublicationColumns = {
    "booktitle", "journal", "key",  "number", "pages",  "publisher",
    "school",    "title",   "type", "url",    "volume", "year"};

struct Record {
    std::string type;
    std::string key;
    std::map<std::string, std::string> fields;
    std::vector<std::string> authors;
    std::vector<std::string> cites;
};

bool is_record_type(std::string_view name) {
    for (auto t : kRecordTypes) {
        if (t == name) return true;
    }
    return false;
}

std::string collapse_space(std::string_view s) {
    std::string out;
    bool space = false;
    for (char c : trim(s)) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            space = true;
            continue;
        }
        if (space && !out.empty()) out.push_back(' ');
        space = false;
        out.push_back(c);
    }
    return out;
}

} // namespace

SchemaDescriptor schema() {
    TableDef publication;
    publication.name = "publication";
    for (auto c : kPublicationColumns) publication.columns.push_back({std::string(c)});
    publication.primary_key = {"key"};

    TableDef author;
    author.name = "author";
    author.columns = {{"id"}, {"name"}};
    author.primary_key = {"id"};

    TableDef writes;
    writes.name = "writes";
    writes.columns = {{"author"}, {"publication"}};
    writes.primary_key = {"author", "publication"};
    writes.foreign_keys = {{{"author"}, "author", {"id"}}, {{"publication"}, "publication", {"key"}}};

    TableDef citation;
    citation.name = "citation";
    citation.columns = {{"citing"}, {"cited"}};
    citation.primary_key = {"citing", "cited"};
    citation.foreign_keys = {{{"citing"}, "publication", {"key"}},
                             {{"cited"}, "publication", {"key"}}};

    return SchemaDescriptor({publication, author, writes, citation});
}

ConversionResult convert(std::string_view xml_text) {
    xml::Reader reader(xml_text);
    std::vector<Record> records;
    std::vector<std::string> warnings;

    // depth 1 = root, 2 = record, 3 = field, deeper = inline markup inside a field
    int depth = 0;
    std::optional<Record> current;
    std::set<std::string> seen_keys;
    std::string field_name;
    std::string field_text;

    while (auto ev = reader.next()) {
        switch (ev->kind) {
        case xml::Event::Kind::StartElement:
            ++depth;
            if (depth == 2) {
                if (!is_record_type(ev->name)) {
                    warnings.push_back("skipping unsupported record type <" + ev->name + ">" +
                                       (ev->attribute("key") ? " key=" + *ev->attribute("key") : ""));
                    break;
                }
                const std::string* key = ev->attribute("key");
                if (!key || key->empty()) {
                    warnings.push_back("skipping <" + ev->name + "> without key attribute");
                    break;
                }
                current = Record{ev->name, *key, {}, {}, {}};
            } else if (depth == 3 && current) {
                field_name = ev->name;
                field_text.clear();
            }
            break;
        case xml::Event::Kind::Text:
            if (depth >= 3 && current) field_text += ev->text;
            break;
        case xml::Event::Kind::EndElement:
            if (depth == 3 && current) {
                std::string value = collapse_space(field_text);
                if (field_name == "author") {
                    if (!value.empty()) current->authors.push_back(std::move(value));
                } else if (field_name == "cite") {
                    if (!value.empty()) current->cites.push_back(std::move(value));
                } else if (field_name != "key" && field_name != "type" && !value.empty()) {
                    current->fields.try_emplace(field_name, std::move(value));
                }
            } else if (depth == 2) {
                if (current) {
                    if (seen_keys.insert(current->key).second) {
                        records.push_back(std::move(*current));
                    } else {
                        warnings.push_back("skipping duplicate publication key " + current->key);
                    }
                }
                current.reset();
            }
            --depth;
            break;
        }
    }

    SchemaDescriptor sch = schema();
    Dataset data(sch);
    const std::size_t pub_table = 0, author_table = 1, writes_table = 2, citation_table = 3;
    const TableDef& pub_def = sch.table(pub_table);

    std::set<std::string> pub_keys;
    std::unordered_map<std::string, std::string> author_ids;
    std::vector<std::string> author_order;

    for (const Record& r : records) {
        pub_keys.insert(r.key);
        Row row;
        row.table = pub_table;
        row.values.resize(pub_def.columns.size());
        for (std::size_t i = 0; i < pub_def.columns.size(); ++i) {
            const std::string& col = pub_def.columns[i].name;
            if (col == "key") row.values[i] = r.key;
            else if (col == "type") row.values[i] = r.type;
            else if (auto it = r.fields.find(col); it != r.fields.end()) row.values[i] = it->second;
        }
        data.add_row(std::move(row));
        for (const auto& name : r.authors) {
            if (author_ids.try_emplace(name, std::to_string(author_ids.size() + 1)).second) {
                author_order.push_back(name);
            }
        }
    }
    for (const auto& name : author_order) {
        data.add_row(Row{author_table, {author_ids.at(name), name}});
    }

    std::set<std::string> emitted;
    for (const Record& r : records) {
        for (const auto& name : r.authors) {
            const std::string& id = author_ids.at(name);
            if (emitted.insert(id + '\x1f' + r.key).second) {
                data.add_row(Row{writes_table, {id, r.key}});
            }
        }
    }
    emitted.clear();
    for (const Record& r : records) {
        for (const auto& cited : r.cites) {
            if (!pub_keys.count(cited)) continue;
            if (emitted.insert(r.key + '\x1f' + cited).second) {
                data.add_row(Row{citation_table, {r.key, cited}});
            }
        }
    }
    return ConversionResult{std::move(data), std::move(warnings)};
}

ConversionResult convert_file(const std::filesystem::path& xml_path,
                              const std::filesystem::path& out_dir) {
    ConversionResult result = convert(read_file(xml_path));
    write_dataset(result.dataset, out_dir);
    return result;
}

} // namespace dbtrail::dblp
