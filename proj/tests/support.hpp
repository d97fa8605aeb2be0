#pragma once

#include "dbtrail/dataset.hpp"
#include "dbtrail/index_store.hpp"

#include <atomic>
#include <filesystem>
#include <random>
#include <string>

namespace support {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("dbtrail-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::filesystem::path fixture_data() { return std::filesystem::path(DBTRAIL_FIXTURES_DIR) / "dblp50"; }

inline dbtrail::Dataset load_fixture() {
    auto schema = dbtrail::load_schema(fixture_data() / "schema.json");
    return dbtrail::load_dataset(schema, fixture_data());
}

/// The fixture index, built once per process.
inline const dbtrail::IndexBundle& fixture_bundle() {
    static const dbtrail::IndexBundle bundle = dbtrail::build_index(load_fixture());
    return bundle;
}

} // namespace support
