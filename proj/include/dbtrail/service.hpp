#pragma once

#include "dbtrail/dataset.hpp"
#include "dbtrail/engine.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace dbtrail {

struct HttpReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json; charset=utf-8";
};

/// HTTP front end: /search, /row/{table}/{pk...}, /backlinks/{table}/{pk...}, /stats.
///
/// Trails come from the engine alone; the row store is only consulted by
/// /row, with exactly one keyed lookup per request. Handlers are const and
/// safe to run concurrently.
class Service {
public:
    Service(SearchEngine engine, Dataset rows);
    ~Service();

    HttpReply search(const std::map<std::string, std::string>& params) const;
    /// `path` is the raw (still percent-encoded) part after "/row/".
    HttpReply row(std::string_view path, bool want_xml) const;
    HttpReply backlinks(std::string_view path) const;
    HttpReply stats() const;

    const SearchEngine& engine() const { return engine_; }
    const Dataset& rows() const { return rows_; }

    /// Blocks serving on host:port until stop(). Returns false if the bind fails.
    bool listen(const std::string& host, int port);
    /// Binds an ephemeral port and returns it, or -1.
    int bind_any_port(const std::string& host);
    /// Serves on a socket bound by bind_any_port; blocks until stop().
    bool listen_after_bind();
    /// Stops accepting; in-flight requests complete first.
    void stop();

private:
    void install_routes();

    SearchEngine engine_;
    Dataset rows_;
    std::unique_ptr<httplib::Server> server_;
};

/// Opens the engine and the row copy stored under `index_dir/data`.
std::unique_ptr<Service> open_service(const std::filesystem::path& index_dir,
                                      const std::optional<std::filesystem::path>& config_path = std::nullopt);

} // namespace dbtrail
