#pragma once

#include "dbtrail/schema.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace dbtrail {

/// Identifies one row: canonical table name plus primary-key values in declared order.
struct RowKey {
    std::string table;
    std::vector<std::string> pk_values;

    bool operator==(const RowKey&) const = default;
    auto operator<=>(const RowKey&) const = default;

    /// "table/pk1/pk2" with each component percent-encoded; also the /row URL suffix.
    std::string to_path() const;
    /// Inverse of to_path. Throws ParseError on an empty table or bad escape.
    static RowKey from_path(std::string_view path);
};

struct RowKeyHash {
    std::size_t operator()(const RowKey& k) const noexcept;
};

/// One row; `values` follow the table's column order, nullopt is SQL NULL.
struct Row {
    std::size_t table = 0;
    std::vector<std::optional<std::string>> values;
};

/// All rows of a dataset, keyed by RowKey.
///
/// Keyed lookups and bulk scans are counted so callers can verify that query
/// paths never touch the row store.
class Dataset {
public:
    explicit Dataset(SchemaDescriptor schema);
    Dataset(const Dataset&) = delete;
    Dataset& operator=(const Dataset&) = delete;
    Dataset(Dataset&& other) noexcept;
    Dataset& operator=(Dataset&&) = delete;

    const SchemaDescriptor& schema() const { return schema_; }

    /// Validates and appends a row. Throws ValidationError on a null PK
    /// column, wrong arity, or duplicate key.
    void add_row(Row row);

    std::size_t size() const { return rows_.size(); }
    std::size_t table_size(std::size_t table) const { return per_table_.at(table).size(); }

    RowKey key_of(const Row& row) const;

    /// Keyed lookup; nullptr if absent. Counts one keyed lookup.
    const Row* find(const RowKey& key) const;

    /// Visits every row in table order then insertion order. Counts one scan.
    void for_each_row(const std::function<void(const Row&)>& fn) const;

    struct AccessStats {
        std::uint64_t keyed_lookups = 0;
        std::uint64_t scans = 0;
    };
    AccessStats access_stats() const;
    void reset_access_stats() const;

private:
    SchemaDescriptor schema_;
    std::vector<Row> rows_;
    std::vector<std::vector<std::size_t>> per_table_;
    std::unordered_map<RowKey, std::size_t, RowKeyHash> by_key_;
    mutable std::atomic<std::uint64_t> keyed_lookups_{0};
    mutable std::atomic<std::uint64_t> scans_{0};
};

/// Reads `<dir>/<table>.csv` for every table in `schema`.
/// The header must name exactly the declared columns (any order).
Dataset load_dataset(const SchemaDescriptor& schema, const std::filesystem::path& dir);

/// Writes schema.json plus one CSV per table into `dir`, columns in declared order.
void write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

} // namespace dbtrail
