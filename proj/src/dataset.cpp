#include "dbtrail/dataset.hpp"

#include "dbtrail/csv.hpp"
#include "dbtrail/error.hpp"
#include "dbtrail/util.hpp"

#include <unordered_set>

namespace dbtrail {

std::string RowKey::to_path() const {
    std::string out = percent_encode(table);
    for (const auto& v : pk_values) {
        out.push_back('/');
        out += percent_encode(v);
    }
    return out;
}

RowKey RowKey::from_path(std::string_view path) {
    auto parts = split(path, '/');
    if (parts.empty() || parts[0].empty()) throw ParseError("row path has no table: '" + std::string(path) + "'");
    RowKey key;
    key.table = percent_decode(parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i) key.pk_values.push_back(percent_decode(parts[i]));
    return key;
}

std::size_t RowKeyHash::operator()(const RowKey& k) const noexcept {
    std::uint64_t h = fnv1a64(k.table);
    for (const auto& v : k.pk_values) {
        h = fnv1a64("\x1f", h);
        h = fnv1a64(v, h);
    }
    return static_cast<std::size_t>(h);
}

Dataset::Dataset(SchemaDescriptor schema)
    : schema_(std::move(schema)), per_table_(schema_.tables().size()) {}

Dataset::Dataset(Dataset&& other) noexcept
    : schema_(std::move(other.schema_)),
      rows_(std::move(other.rows_)),
      per_table_(std::move(other.per_table_)),
      by_key_(std::move(other.by_key_)),
      keyed_lookups_(other.keyed_lookups_.load()),
      scans_(other.scans_.load()) {}

RowKey Dataset::key_of(const Row& row) const {
    const TableDef& t = schema_.table(row.table);
    RowKey key;
    key.table = t.name;
    for (auto idx : t.primary_key_indices()) key.pk_values.push_back(row.values.at(idx).value_or(""));
    return key;
}

void Dataset::add_row(Row row) {
    if (row.table >= per_table_.size()) throw ValidationError("row references unknown table index");
    const TableDef& t = schema_.table(row.table);
    if (row.values.size() != t.columns.size()) {
        throw ValidationError("row for '" + t.name + "' has " + std::to_string(row.values.size()) +
                              " values, expected " + std::to_string(t.columns.size()));
    }
    for (auto idx : t.primary_key_indices()) {
        if (!row.values[idx]) {
            throw ValidationError("row for '" + t.name + "' has null primary key column '" +
                                  t.columns[idx].name + "'");
        }
    }
    RowKey key = key_of(row);
    if (by_key_.count(key)) {
        throw ValidationError("duplicate primary key in table '" + t.name + "': " + key.to_path());
    }
    by_key_.emplace(std::move(key), rows_.size());
    per_table_[row.table].push_back(rows_.size());
    rows_.push_back(std::move(row));
}

const Row* Dataset::find(const RowKey& key) const {
    keyed_lookups_.fetch_add(1, std::memory_order_relaxed);
    RowKey canonical = key;
    if (auto idx = schema_.table_index(key.table)) canonical.table = schema_.table(*idx).name;
    auto it = by_key_.find(canonical);
    return it == by_key_.end() ? nullptr : &rows_[it->second];
}

void Dataset::for_each_row(const std::function<void(const Row&)>& fn) const {
    scans_.fetch_add(1, std::memory_order_relaxed);
    for (const auto& ids : per_table_) {
        for (auto id : ids) fn(rows_[id]);
    }
}

Dataset::AccessStats Dataset::access_stats() const {
    return {keyed_lookups_.load(std::memory_order_relaxed), scans_.load(std::memory_order_relaxed)};
}

void Dataset::reset_access_stats() const {
    keyed_lookups_.store(0);
    scans_.store(0);
}

Dataset load_dataset(const SchemaDescriptor& schema, const std::filesystem::path& dir) {
    Dataset data(schema);
    for (std::size_t ti = 0; ti < schema.tables().size(); ++ti) {
        const TableDef& t = schema.table(ti);
        auto path = dir / (t.name + ".csv");
        if (!std::filesystem::exists(path)) {
            throw NotFoundError("missing row file " + path.string());
        }
        std::vector<csv::Record> records;
        try {
            records = csv::parse(read_file(path));
        } catch (const ParseError& e) {
            throw ParseError(path.filename().string() + ": " + e.what());
        }
        if (records.empty()) continue;

        const csv::Record& header = records.front();
        std::vector<std::size_t> mapping(header.size());
        std::unordered_set<std::string> seen;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (!header[i]) throw ParseError(path.filename().string() + ": empty header field");
            auto idx = t.column_index(*header[i]);
            if (!idx) {
                throw ParseError(path.filename().string() + ": unknown column '" + *header[i] + "'");
            }
            if (!seen.insert(*header[i]).second) {
                throw ParseError(path.filename().string() + ": duplicate column '" + *header[i] + "'");
            }
            mapping[i] = *idx;
        }
        for (const auto& c : t.columns) {
            if (!seen.count(c.name)) {
                throw ValidationError(path.filename().string() + ": missing column '" + c.name + "'");
            }
        }
        for (std::size_t r = 1; r < records.size(); ++r) {
            const csv::Record& rec = records[r];
            if (rec.size() != header.size()) {
                throw ParseError(path.filename().string() + ": record " + std::to_string(r) +
                                 " has " + std::to_string(rec.size()) + " fields, expected " +
                                 std::to_string(header.size()));
            }
            Row row;
            row.table = ti;
            row.values.resize(t.columns.size());
            for (std::size_t i = 0; i < rec.size(); ++i) row.values[mapping[i]] = rec[i];
            data.add_row(std::move(row));
        }
    }
    return data;
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const SchemaDescriptor& schema = dataset.schema();
    write_file(dir / "schema.json", schema.to_json());
    std::vector<std::string> bodies(schema.tables().size());
    for (std::size_t ti = 0; ti < schema.tables().size(); ++ti) {
        csv::Record header;
        for (const auto& c : schema.table(ti).columns) header.emplace_back(c.name);
        bodies[ti] = csv::format_record(header);
    }
    dataset.for_each_row([&](const Row& row) {
        bodies[row.table] += csv::format_record(csv::Record(row.values.begin(), row.values.end()));
    });
    for (std::size_t ti = 0; ti < schema.tables().size(); ++ti) {
        write_file(dir / (schema.table(ti).name + ".csv"), bodies[ti]);
    }
}

} // namespace dbtrail
