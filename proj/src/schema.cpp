#include "dbtrail/schema.hpp"

#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"

#include <json.hpp>

#include <set>

namespace dbtrail {

using nlohmann::json;

std::optional<std::size_t> TableDef::column_index(std::string_view column) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == column) return i;
    }
    return std::nullopt;
}

std::vector<std::size_t> TableDef::primary_key_indices() const {
    std::vector<std::size_t> out;
    out.reserve(primary_key.size());
    for (const auto& c : primary_key) out.push_back(*column_index(c));
    return out;
}

SchemaDescriptor::SchemaDescriptor(std::vector<TableDef> tables) : tables_(std::move(tables)) {
    std::set<std::string> table_names;
    for (const auto& t : tables_) {
        if (t.name.empty()) throw ValidationError("schema: table with empty name");
        if (!table_names.insert(to_lower(t.name)).second) {
            throw ValidationError("schema: duplicate table name '" + t.name + "'");
        }
        std::set<std::string> cols;
        for (const auto& c : t.columns) {
            if (c.name.empty()) throw ValidationError("schema: empty column name in " + t.name);
            if (!cols.insert(c.name).second) {
                throw ValidationError("schema: duplicate column '" + c.name + "' in " + t.name);
            }
        }
        if (t.primary_key.empty()) {
            throw ValidationError("schema: table '" + t.name + "' has no primary key");
        }
        for (const auto& pk : t.primary_key) {
            if (!cols.count(pk)) {
                throw ValidationError("schema: primary key column '" + pk + "' not in " + t.name);
            }
        }
    }
    for (const auto& t : tables_) {
        for (const auto& fk : t.foreign_keys) {
            if (fk.source_columns.size() != 1 || fk.target_columns.size() != 1) {
                throw ValidationError("schema: composite foreign key on table '" + t.name +
                                      "' is not supported (link target is ambiguous)");
            }
            if (!t.column_index(fk.source_columns[0])) {
                throw ValidationError("schema: foreign key column '" + fk.source_columns[0] +
                                      "' not in " + t.name);
            }
            auto target = table_index(fk.target_table);
            if (!target) {
                throw ValidationError("schema: foreign key on '" + t.name +
                                      "' references unknown table '" + fk.target_table + "'");
            }
            const TableDef& tt = tables_[*target];
            if (!tt.column_index(fk.target_columns[0])) {
                throw ValidationError("schema: foreign key on '" + t.name +
                                      "' references unknown column '" + tt.name + "." +
                                      fk.target_columns[0] + "'");
            }
            if (tt.primary_key != fk.target_columns) {
                throw ValidationError("schema: foreign key on '" + t.name + "' must reference the "
                                      "primary key of '" + tt.name + "'");
            }
        }
    }
}

std::optional<std::size_t> SchemaDescriptor::table_index(std::string_view name) const {
    for (std::size_t i = 0; i < tables_.size(); ++i) {
        if (iequals(tables_[i].name, name)) return i;
    }
    return std::nullopt;
}

const TableDef& SchemaDescriptor::table(std::string_view name) const {
    auto idx = table_index(name);
    if (!idx) throw NotFoundError("unknown table '" + std::string(name) + "'");
    return tables_[*idx];
}

std::string SchemaDescriptor::to_json() const {
    nlohmann::ordered_json tables = nlohmann::ordered_json::array();
    for (const auto& t : tables_) {
        nlohmann::ordered_json cols = nlohmann::ordered_json::array();
        for (const auto& c : t.columns) cols.push_back(nlohmann::ordered_json{{"name", c.name}});
        nlohmann::ordered_json fks = nlohmann::ordered_json::array();
        for (const auto& fk : t.foreign_keys) {
            nlohmann::ordered_json f = nlohmann::ordered_json::object();
            f["columns"] = fk.source_columns;
            f["ref_table"] = fk.target_table;
            f["ref_columns"] = fk.target_columns;
            fks.push_back(std::move(f));
        }
        nlohmann::ordered_json jt = nlohmann::ordered_json::object();
        jt["name"] = t.name;
        jt["columns"] = std::move(cols);
        jt["primary_key"] = t.primary_key;
        jt["foreign_keys"] = std::move(fks);
        tables.push_back(std::move(jt));
    }
    return nlohmann::ordered_json{{"tables", std::move(tables)}}.dump(2) + "\n";
}

namespace {

std::vector<std::string> string_list(const json& j, const char* what) {
    if (!j.is_array()) throw ParseError(std::string("schema: '") + what + "' must be an array");
    std::vector<std::string> out;
    for (const auto& v : j) {
        if (!v.is_string()) throw ParseError(std::string("schema: '") + what + "' entries must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

const json& member(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(std::string("schema: missing field '") + key + "'");
    return *it;
}

} // namespace

SchemaDescriptor parse_schema(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("schema: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("schema: top level must be an object");
    const json& jtables = member(doc, "tables");
    if (!jtables.is_array()) throw ParseError("schema: 'tables' must be an array");

    std::vector<TableDef> tables;
    for (const auto& jt : jtables) {
        if (!jt.is_object()) throw ParseError("schema: table entries must be objects");
        TableDef t;
        const json& name = member(jt, "name");
        if (!name.is_string()) throw ParseError("schema: table name must be a string");
        t.name = name.get<std::string>();
        const json& cols = member(jt, "columns");
        if (!cols.is_array()) throw ParseError("schema: 'columns' must be an array");
        for (const auto& c : cols) {
            if (!c.is_object() || !c.contains("name") || !c["name"].is_string()) {
                throw ParseError("schema: column entries must be {\"name\": string}");
            }
            t.columns.push_back(ColumnDef{c["name"].get<std::string>()});
        }
        t.primary_key = string_list(member(jt, "primary_key"), "primary_key");
        if (auto it = jt.find("foreign_keys"); it != jt.end()) {
            if (!it->is_array()) throw ParseError("schema: 'foreign_keys' must be an array");
            for (const auto& jf : *it) {
                if (!jf.is_object()) throw ParseError("schema: foreign key entries must be objects");
                ForeignKeyDef fk;
                fk.source_columns = string_list(member(jf, "columns"), "columns");
                const json& rt = member(jf, "ref_table");
                if (!rt.is_string()) throw ParseError("schema: 'ref_table' must be a string");
                fk.target_table = rt.get<std::string>();
                fk.target_columns = string_list(member(jf, "ref_columns"), "ref_columns");
                t.foreign_keys.push_back(std::move(fk));
            }
        }
        tables.push_back(std::move(t));
    }
    return SchemaDescriptor(std::move(tables));
}

SchemaDescriptor load_schema(const std::filesystem::path& path) {
    return parse_schema(read_file(path));
}

} // namespace dbtrail
