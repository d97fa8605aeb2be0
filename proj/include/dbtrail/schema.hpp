#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail {

struct ColumnDef {
    std::string name;
};

/// Single-column foreign key; composite keys are rejected at load.
struct ForeignKeyDef {
    std::vector<std::string> source_columns;
    std::string target_table;
    std::vector<std::string> target_columns;
};

struct TableDef {
    std::string name;
    std::vector<ColumnDef> columns;
    std::vector<std::string> primary_key;
    std::vector<ForeignKeyDef> foreign_keys;

    /// Case-sensitive column position, nullopt if absent.
    std::optional<std::size_t> column_index(std::string_view column) const;
    /// Column positions of the primary key, in declared order.
    std::vector<std::size_t> primary_key_indices() const;
};

class SchemaDescriptor {
public:
    SchemaDescriptor() = default;
    /// Validates every invariant; throws ValidationError on the first violation.
    explicit SchemaDescriptor(std::vector<TableDef> tables);

    const std::vector<TableDef>& tables() const { return tables_; }
    /// Case-insensitive lookup.
    std::optional<std::size_t> table_index(std::string_view name) const;
    const TableDef& table(std::size_t index) const { return tables_.at(index); }
    /// Throws NotFoundError when the table is unknown.
    const TableDef& table(std::string_view name) const;

    /// Serializes to the schema.json layout with stable key order and indentation.
    std::string to_json() const;

private:
    std::vector<TableDef> tables_;
};

SchemaDescriptor parse_schema(std::string_view json_text);
SchemaDescriptor load_schema(const std::filesystem::path& path);

} // namespace dbtrail
